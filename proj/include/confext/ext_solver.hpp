#ifndef CONFEXT_EXT_SOLVER_HPP
#define CONFEXT_EXT_SOLVER_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "confext/conformal_module.hpp"
#include "confext/linalg.hpp"

namespace confext {

/// Ext(quot, sub): short exact sequences 0 -> sub -> E -> quot -> 0.
struct ExtProblem {
  LcaSpec algebra;
  ModuleSpec sub, quot;
  int degree_cap = 9;
};

/// 1: sub trivial, quot rank1.  2: sub rank1, quot trivial.  3: both rank1.
inline int ext_type(const ExtProblem& P) {
  if (P.degree_cap < 0) throw error("degree cap must be nonnegative");
  bool st = P.sub.is_trivial(), qt = P.quot.is_trivial();
  if (st && qt)
    throw error("unsupported extension problem: both modules are trivial");
  if (st) return 1;
  if (qt) return 2;
  return 3;
}

inline std::string unknown_name_for(const std::string& gen) {
  if (gen == "L") return "f";
  if (gen == "M") return "g";
  if (gen == "Y") return "h";
  if (gen == "N") return "k";
  return "phi_" + gen;
}

struct Unknown {
  std::string name;
  std::string gen;  // empty for the partial-deformation unknown a
  std::vector<Exp> monos;
  std::map<Exp, int, GrlexGreater> pos;
};

/// Flat coordinate system: one scalar per monomial per unknown, unknowns in
/// generator order (f, g, h, k) followed by a, monomials in descending
/// graded-lex order.
struct UnknownLayout {
  std::vector<Unknown> unknowns;
  std::vector<int> offsets;
  int ncols = 0;

  int col(int u, const Exp& e) const {
    auto it = unknowns[u].pos.find(e);
    if (it == unknowns[u].pos.end())
      throw error("monomial outside the degree cap");
    return offsets[u] + it->second;
  }
  int find_unknown(const std::string& name) const {
    for (size_t i = 0; i < unknowns.size(); ++i)
      if (unknowns[i].name == name) return (int)i;
    return -1;
  }
};

namespace detail {

inline Unknown make_unknown(const std::string& name, const std::string& gen,
                            bool with_partial, bool with_lambda, int cap) {
  Unknown u;
  u.name = name;
  u.gen = gen;
  for (int i = 0; i <= (with_partial ? cap : 0); ++i)
    for (int j = 0; j <= (with_lambda ? cap - i : 0); ++j)
      u.monos.push_back(Exp{i, j, 0, 0});
  std::sort(u.monos.begin(), u.monos.end(), GrlexGreater{});
  for (size_t k = 0; k < u.monos.size(); ++k) u.pos[u.monos[k]] = (int)k;
  return u;
}

}  // namespace detail

inline UnknownLayout make_layout(const LcaSpec& A, int type, int phi_cap,
                                 int a_cap) {
  UnknownLayout L;
  for (auto& g : A.generators)
    L.unknowns.push_back(detail::make_unknown(unknown_name_for(g), g,
                                              type != 1, true, phi_cap));
  if (type == 2)
    L.unknowns.push_back(detail::make_unknown("a", "", true, false, a_cap));
  for (auto& u : L.unknowns) {
    L.offsets.push_back(L.ncols);
    L.ncols += (int)u.monos.size();
  }
  return L;
}

struct LinearSystem {
  UnknownLayout layout;
  std::vector<SparseVec> rows;
};

namespace detail {

enum class Transform { Id, LambdaToMu, ShiftL, ShiftM, LambdaToSum };

inline MPoly transform_monomial(const Exp& e, Transform t) {
  MPoly p = MPoly::monomial(e, Scalar(1));
  MPoly d = MPoly::variable(VPartial);
  MPoly l = MPoly::variable(VLambda), m = MPoly::variable(VMu);
  switch (t) {
    case Transform::Id:
      return p;
    case Transform::LambdaToMu:
      return p.substitute(VLambda, m);
    case Transform::ShiftL:  // phi(d+l, m)
      return p.substitute(VLambda, m).substitute(VPartial, d + l);
    case Transform::ShiftM:  // phi(d+m, l)
      return p.substitute(VPartial, d + m);
    case Transform::LambdaToSum:  // phi(d, l+m)
      return p.substitute(VLambda, l + m);
  }
  return p;
}

struct RowAccumulator {
  std::map<Exp, std::map<int, Scalar>, GrlexGreater> acc;

  void add(const UnknownLayout& layout, int u, const MPoly& multiplier,
           Transform t, const Scalar& sign) {
    if (multiplier.is_zero()) return;
    for (auto& mono : layout.unknowns[u].monos) {
      MPoly contrib = multiplier * transform_monomial(mono, t);
      int c = layout.col(u, mono);
      for (auto& [e, v] : contrib.terms()) {
        auto& cell = acc[e][c];
        cell += v * sign;
      }
    }
  }

  void emit(std::vector<SparseVec>& rows) {
    for (auto& [e, cols] : acc) {
      SparseVec row;
      for (auto& [c, v] : cols)
        if (!v.is_zero()) row.emplace_back(c, v);
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
};

}  // namespace detail

/// One homogeneous row per monomial in {d,l,m} of each residual
///   X_l(Z_m w) - Z_m(X_l w) - ([X_l Z])_{l+m} w
/// over all ordered generator pairs (X,Z), plus, when the quotient is
/// trivial, the partial-compatibility residuals
///   (d + l - gamma) phi_X(d,l) - B_X(d,l) a(d+l).
inline LinearSystem build_constraints(const ExtProblem& P) {
  int type = ext_type(P);
  const LcaSpec& A = P.algebra;
  LinearSystem sys;
  sys.layout = make_layout(A, type, P.degree_cap, P.degree_cap);
  const UnknownLayout& layout = sys.layout;

  MPoly d = MPoly::variable(VPartial);
  MPoly l = MPoly::variable(VLambda), m = MPoly::variable(VMu);
  MPoly gamma_sub = MPoly(P.sub.gamma);
  auto sub_gamma = [&](MPoly p) {
    return P.sub.is_trivial() ? p.substitute(VPartial, gamma_sub) : p;
  };

  int ng = (int)A.generators.size();
  auto phi = [&](const std::string& g) {
    for (int i = 0; i < ng; ++i)
      if (A.generators[i] == g) return i;
    throw error("unknown generator " + g);
  };
  using detail::Transform;

  for (auto& x : A.generators)
    for (auto& z : A.generators) {
      detail::RowAccumulator acc;
      // quot-action on the phi_X(d,l) term of Z_m w, and symmetrically
      MPoly ax = P.quot.action_of(x), az = P.quot.action_of(z);
      acc.add(layout, phi(x),
              sub_gamma(az.substitute(VLambda, m).substitute(VPartial, d + l)),
              Transform::Id, Scalar(1));
      acc.add(layout, phi(z), sub_gamma(ax.substitute(VPartial, d + m)),
              Transform::LambdaToMu, Scalar(-1));
      // sub-action applied to the phi-valued part
      MPoly bx = P.sub.action_of(x), bz = P.sub.action_of(z);
      acc.add(layout, phi(z), bx, Transform::ShiftL, Scalar(1));
      acc.add(layout, phi(x), bz.substitute(VLambda, m), Transform::ShiftM,
              Scalar(-1));
      // bracket term
      for (auto& e : A.bracket(x, z))
        acc.add(layout, phi(e.target),
                e.coeff.substitute(VPartial, -l - m), Transform::LambdaToSum,
                Scalar(-1));
      acc.emit(sys.rows);
    }

  if (type == 2) {
    int ua = layout.find_unknown("a");
    MPoly gq = MPoly(P.quot.gamma);
    for (auto& x : A.generators) {
      detail::RowAccumulator acc;
      acc.add(layout, phi(x), d + l - gq, Transform::Id, Scalar(1));
      // a(d+l); ShiftL moves d to d+l (no lambda present in a)
      acc.add(layout, ua, P.sub.action_of(x), Transform::ShiftL, Scalar(-1));
      acc.emit(sys.rows);
    }
  }
  return sys;
}

/// Full assignment of polynomials to unknowns, as a coordinate vector.
inline SparseVec assignment_vector(const UnknownLayout& layout,
                                   const std::map<std::string, MPoly>& polys) {
  SparseVec v;
  for (size_t u = 0; u < layout.unknowns.size(); ++u) {
    auto it = polys.find(layout.unknowns[u].name);
    if (it == polys.end()) continue;
    for (auto& [e, c] : it->second.terms())
      v.emplace_back(layout.col((int)u, e), c);
  }
  std::sort(v.begin(), v.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  return v;
}

inline std::map<std::string, MPoly> vector_assignment(
    const UnknownLayout& layout, const SparseVec& v) {
  std::map<std::string, MPoly> out;
  size_t u = 0;
  for (auto& [c, val] : v) {
    while (u + 1 < layout.unknowns.size() && layout.offsets[u + 1] <= c) ++u;
    while (layout.offsets[u] > c) --u;  // v sorted, so this never fires
    int local = c - layout.offsets[u];
    out[layout.unknowns[u].name].add_term(layout.unknowns[u].monos[local],
                                          val);
  }
  return out;
}

/// Coboundaries from the generic change of splitting, expressed inside the
/// capped layout.  The generators are computed with the cap extended by two
/// so that leading-term cancellations at the cap boundary are kept.
inline std::vector<SparseVec> coboundary_space(const ExtProblem& P) {
  int type = ext_type(P);
  const LcaSpec& A = P.algebra;
  int D = P.degree_cap;

  if (type == 1) {
    UnknownLayout layout = make_layout(A, type, D, D);
    std::map<std::string, MPoly> gen;
    MPoly gamma = MPoly(P.sub.gamma);
    for (auto& g : A.generators) {
      MPoly p = P.quot.action_of(g).substitute(VPartial, gamma);
      if (p.degree() > D) throw error("coboundary exceeds the degree cap");
      if (!p.is_zero()) gen[unknown_name_for(g)] = p;
    }
    std::vector<SparseVec> rows;
    SparseVec v = assignment_vector(layout, gen);
    if (!v.empty()) rows.push_back(std::move(v));
    Rref r = rref(rows);
    return r.rows();
  }

  int De = D + 2;
  UnknownLayout ext = make_layout(A, type, De, De);
  UnknownLayout std_layout = make_layout(A, type, D, D);

  MPoly d = MPoly::variable(VPartial), l = MPoly::variable(VLambda);
  std::vector<SparseVec> gens;
  for (int p = 0; p <= D + 1; ++p) {
    MPoly phi = d.pow(p), phi_shift = (d + l).pow(p);
    std::map<std::string, MPoly> gen;
    for (auto& g : A.generators) {
      MPoly img;
      if (type == 2)
        img = P.sub.action_of(g) * phi_shift;
      else
        img = P.quot.action_of(g) * phi - P.sub.action_of(g) * phi_shift;
      if (!img.is_zero()) gen[unknown_name_for(g)] = img;
    }
    if (type == 2) gen["a"] = (d - MPoly(P.quot.gamma)) * phi;
    gens.push_back(assignment_vector(ext, gen));
  }

  // intersect with the degree-capped subspace: order the out-of-cap
  // coordinates first, reduce, keep rows pivoting inside the cap
  std::vector<int> perm(ext.ncols, -1);
  std::vector<int> incap_map(ext.ncols, -1);
  int nout = 0, nin = 0;
  for (size_t u = 0; u < ext.unknowns.size(); ++u) {
    bool is_a = ext.unknowns[u].gen.empty();
    for (size_t k = 0; k < ext.unknowns[u].monos.size(); ++k) {
      const Exp& e = ext.unknowns[u].monos[k];
      bool incap = total_degree(e) <= D;
      int col = ext.offsets[u] + (int)k;
      if (incap) {
        incap_map[col] = std_layout.col((int)u, e);
        ++nin;
      } else {
        perm[col] = nout++;
      }
    }
  }
  (void)nin;
  for (int c = 0; c < ext.ncols; ++c)
    if (perm[c] < 0) perm[c] = nout + incap_map[c];

  std::vector<SparseVec> permuted;
  for (auto& g : gens) {
    SparseVec v;
    for (auto& [c, val] : g) v.emplace_back(perm[c], val);
    std::sort(v.begin(), v.end(),
              [](auto& a, auto& b) { return a.first < b.first; });
    permuted.push_back(std::move(v));
  }
  Rref r = rref(permuted);
  std::vector<SparseVec> out;
  for (size_t i = 0; i < r.rows().size(); ++i) {
    if (r.pivots()[i] < nout) continue;
    SparseVec v;
    for (auto& [c, val] : r.rows()[i]) v.emplace_back(c - nout, val);
    out.push_back(std::move(v));
  }
  return out;
}

struct ExtResult {
  UnknownLayout layout;
  std::vector<SparseVec> cocycle_basis;
  std::vector<SparseVec> coboundary_basis;
  std::vector<SparseVec> nontrivial_reps;
  int cocycle_dim = 0, coboundary_dim = 0, ext_dim = 0;
};

inline ExtResult solve_ext(const ExtProblem& P) {
  LinearSystem sys = build_constraints(P);
  ExtResult R;
  R.layout = sys.layout;
  auto null_basis = nullspace(sys.rows, sys.layout.ncols);
  Rref coc = rref(null_basis);
  R.cocycle_basis = coc.rows();
  R.cocycle_dim = (int)R.cocycle_basis.size();

  auto cob = coboundary_space(P);
  // every coboundary must satisfy every constraint row, exactly
  for (auto& v : cob)
    for (auto& row : sys.rows) {
      Scalar dot;
      size_t i = 0, j = 0;
      while (i < row.size() && j < v.size()) {
        if (row[i].first < v[j].first)
          ++i;
        else if (v[j].first < row[i].first)
          ++j;
        else
          dot += row[i++].second * v[j++].second;
      }
      if (!dot.is_zero())
        throw error("internal: coboundary violates a cocycle constraint");
    }
  Rref cobR = rref(cob);
  R.coboundary_basis = cobR.rows();
  R.coboundary_dim = (int)R.coboundary_basis.size();
  R.ext_dim = R.cocycle_dim - R.coboundary_dim;

  std::vector<SparseVec> reduced;
  for (auto& v : R.cocycle_basis) {
    SparseVec r = cobR.reduce(v);
    if (!r.empty()) reduced.push_back(std::move(r));
  }
  Rref repR = rref(reduced);
  R.nontrivial_reps = repR.rows();
  if ((int)R.nontrivial_reps.size() != R.ext_dim)
    throw error("internal: representative count disagrees with ext_dim");
  return R;
}

inline nlohmann::ordered_json ext_result_json(const ExtProblem& P,
                                              const ExtResult& R) {
  nlohmann::ordered_json j;
  j["problem"] = {{"algebra", P.algebra.name},
                  {"sub", render_module_literal(P.sub)},
                  {"quot", render_module_literal(P.quot)}};
  j["degree_cap"] = P.degree_cap;
  j["cocycle_dim"] = R.cocycle_dim;
  j["coboundary_dim"] = R.coboundary_dim;
  j["ext_dim"] = R.ext_dim;
  nlohmann::ordered_json reps = nlohmann::ordered_json::array();
  for (auto& v : R.nontrivial_reps) {
    auto polys = vector_assignment(R.layout, v);
    nlohmann::ordered_json rep;
    for (auto& u : R.layout.unknowns) {
      auto it = polys.find(u.name);
      if (it != polys.end() && !it->second.is_zero())
        rep[u.name] = it->second.str();
    }
    reps.push_back(std::move(rep));
  }
  j["representatives"] = std::move(reps);
  return j;
}

/// Invariance of ext_dim under the partial-shift reparametrization: alpha
/// parameters move by offset, gamma parameters by -offset.
inline bool alpha_shift_check(const ExtProblem& P, const Scalar& offset) {
  ExtProblem Q = P;
  auto shift = [&](ModuleSpec& M) {
    if (M.is_trivial()) {
      M = make_trivial(Q.algebra, M.gamma - offset);
    } else {
      M = make_rank1(Q.algebra, M.alpha + offset, M.delta, M.beta);
    }
  };
  shift(Q.sub);
  shift(Q.quot);
  return solve_ext(P).ext_dim == solve_ext(Q).ext_dim;
}

}  // namespace confext

#endif

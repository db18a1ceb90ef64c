#ifndef CONFEXT_CLASSIFIER_HPP
#define CONFEXT_CLASSIFIER_HPP

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "confext/ext_solver.hpp"

namespace confext {

/// Active coefficient field: the rationals or a real quadratic extension.
struct Field {
  unsigned long disc = 0;  // 0 = plain rationals

  static Field parse(const std::string& s) {
    if (s == "q") return {};
    if (s.rfind("q-sqrt:", 0) == 0) {
      unsigned long d = std::stoul(s.substr(7));
      if (d < 2 || !is_squarefree(d))
        throw error("field discriminant must be squarefree and > 1");
      return {d};
    }
    throw error("unknown field '" + s + "'");
  }
  std::string str() const {
    return disc == 0 ? "q" : "q-sqrt:" + std::to_string(disc);
  }
  bool admits(const Scalar& v) const {
    return v.disc() == 0 || v.disc() == disc;
  }
};

using ParamMap = std::map<std::string, Scalar>;

namespace detail {

/// Arithmetic over parameter names, used by golden-table predicates:
/// expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
/// factor := ['-'] (scalar | name | '(' expr ')')
class ParamExpr {
 public:
  ParamExpr(const std::string& src, const ParamMap& params)
      : s_(src), params_(params) {}

  Scalar eval() {
    Scalar v = expr();
    skip_ws();
    if (pos_ < s_.size()) throw error("trailing input in expression '" + s_ + "'");
    return v;
  }

 private:
  const std::string& s_;
  const ParamMap& params_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && isspace((unsigned char)s_[pos_])) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  Scalar expr() {
    Scalar v = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        v += term();
      } else if (c == '-') {
        ++pos_;
        v -= term();
      } else {
        return v;
      }
    }
  }
  Scalar term() {
    Scalar v = factor();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        v *= factor();
      } else if (c == '/') {
        ++pos_;
        v /= factor();
      } else {
        return v;
      }
    }
  }
  Scalar factor() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '(') {
      ++pos_;
      Scalar v = expr();
      if (peek() != ')') throw error("expected ')' in expression '" + s_ + "'");
      ++pos_;
      return v;
    }
    if (isalpha((unsigned char)c) &&
        !(c == 'r' && pos_ + 1 < s_.size() &&
          isdigit((unsigned char)s_[pos_ + 1]))) {
      std::string name;
      while (pos_ < s_.size() &&
             (isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
        name += s_[pos_++];
      auto it = params_.find(name);
      if (it == params_.end())
        throw error("unknown parameter '" + name + "' in expression '" + s_ +
                    "'");
      return it->second;
    }
    // scalar literal: digits with optional /den and r<d> quadratic marker
    size_t start = pos_;
    if (c == 'r') ++pos_;
    while (pos_ < s_.size() &&
           (isdigit((unsigned char)s_[pos_]) || s_[pos_] == '/' ||
            s_[pos_] == 'r'))
      ++pos_;
    if (pos_ == start) throw error("bad expression '" + s_ + "'");
    return Scalar::parse(s_.substr(start, pos_ - start));
  }
};

inline Scalar eval_param_expr(const std::string& src, const ParamMap& params) {
  return ParamExpr(src, params).eval();
}

}  // namespace detail

struct Predicate {
  std::string lhs, rhs;
  bool negated = false;           // lhs != rhs
  std::string field_requirement;  // nonempty for "field=..." predicates

  bool matches(const ParamMap& params, const Field& field) const {
    if (!field_requirement.empty()) return field.str() == field_requirement;
    bool eq = detail::eval_param_expr(lhs, params) ==
              detail::eval_param_expr(rhs, params);
    return negated ? !eq : eq;
  }
};

struct GoldenRow {
  std::vector<Predicate> preds;
  int dim = 0;
  // each representative maps unknown names to polynomial sources
  std::vector<std::map<std::string, std::string>> reps;
  std::string source;

  bool matches(const ParamMap& params, const Field& field) const {
    for (auto& p : preds)
      if (!p.matches(params, field)) return false;
    return true;
  }
};

struct SweepLine {
  std::string field_requirement;  // nonempty: only under this field
  std::vector<std::pair<std::string, std::vector<Scalar>>> ranges;
};

struct GoldenTable {
  std::string id, algebra;
  int ext_type = 0;
  std::vector<SweepLine> sweeps;
  std::vector<GoldenRow> rows;
  int default_dim = 0;
};

namespace detail {

inline std::vector<Scalar> parse_range(const std::string& spec) {
  std::vector<Scalar> out;
  size_t pos = 0;
  while (pos <= spec.size()) {
    auto bar = spec.find('|', pos);
    std::string piece =
        spec.substr(pos, bar == std::string::npos ? std::string::npos
                                                  : bar - pos);
    pos = bar == std::string::npos ? spec.size() + 1 : bar + 1;
    if (piece.empty()) throw error("empty range piece in '" + spec + "'");
    auto dots = piece.find("..");
    if (dots == std::string::npos) {
      out.push_back(Scalar::parse(piece));
      continue;
    }
    std::string rest = piece.substr(dots + 2);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw error("range '" + piece + "' missing ':step'");
    std::string step_part = rest.substr(colon + 1);
    std::vector<Scalar> excluded;
    size_t bang;
    while ((bang = step_part.rfind('!')) != std::string::npos) {
      excluded.push_back(Scalar::parse(step_part.substr(bang + 1)));
      step_part = step_part.substr(0, bang);
    }
    Scalar lo = Scalar::parse(piece.substr(0, dots));
    Scalar hi = Scalar::parse(rest.substr(0, colon));
    Scalar step = Scalar::parse(step_part);
    if (!lo.is_rational() || !hi.is_rational() || !step.is_rational() ||
        step.rat_part() <= 0)
      throw error("range bounds must be rational with positive step: '" +
                  piece + "'");
    for (Rat v = lo.rat_part(); v <= hi.rat_part(); v += step.rat_part()) {
      Scalar s{v};
      bool skip = false;
      for (auto& e : excluded)
        if (e == s) skip = true;
      if (!skip) out.push_back(s);
    }
  }
  return out;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(sep, pos);
    out.push_back(
        s.substr(pos, next == std::string::npos ? std::string::npos
                                                : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

inline Predicate parse_predicate(const std::string& src) {
  Predicate p;
  auto neq = src.find("!=");
  if (neq != std::string::npos) {
    p.lhs = trim(src.substr(0, neq));
    p.rhs = trim(src.substr(neq + 2));
    p.negated = true;
    return p;
  }
  auto eq = src.find('=');
  if (eq == std::string::npos)
    throw error("predicate '" + src + "' missing comparison");
  p.lhs = trim(src.substr(0, eq));
  p.rhs = trim(src.substr(eq + 1));
  if (p.lhs == "field") {
    p.field_requirement = p.rhs;
    p.rhs.clear();
  }
  return p;
}

}  // namespace detail

inline GoldenTable parse_golden_table(const std::string& text) {
  GoldenTable T;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_default = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) -> error {
      return error("golden table line " + std::to_string(lineno) + ": " + what);
    };
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "theorem") {
      ls >> T.id;
    } else if (kw == "algebra") {
      ls >> T.algebra;
    } else if (kw == "type") {
      ls >> T.ext_type;
      if (T.ext_type < 1 || T.ext_type > 3) throw fail("type must be 1..3");
    } else if (kw == "sweep") {
      SweepLine sw;
      std::string item;
      while (ls >> item) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw fail("bad sweep item '" + item + "'");
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (key == "field")
          sw.field_requirement = val;
        else
          sw.ranges.emplace_back(key, detail::parse_range(val));
      }
      if (sw.ranges.empty()) throw fail("empty sweep");
      T.sweeps.push_back(std::move(sw));
    } else if (kw == "when" || kw == "default") {
      GoldenRow row;
      row.source = line;
      std::string rest;
      std::getline(ls, rest);
      auto expect_pos = rest.find("expect");
      if (kw == "when") {
        if (expect_pos == std::string::npos)
          throw fail("'when' row missing 'expect'");
        for (auto& pred : detail::split(rest.substr(0, expect_pos), ',')) {
          std::string p = detail::trim(pred);
          if (!p.empty()) row.preds.push_back(detail::parse_predicate(p));
        }
        if (row.preds.empty()) throw fail("'when' row without predicates");
        rest = rest.substr(expect_pos + 6);
      } else {
        if (expect_pos != std::string::npos) rest = rest.substr(expect_pos + 6);
        saw_default = true;
      }
      rest = detail::trim(rest);
      if (rest.rfind("dim=", 0) != 0) throw fail("expected 'dim=<n>'");
      size_t after = 4;
      while (after < rest.size() && isdigit((unsigned char)rest[after]))
        ++after;
      row.dim = std::stoi(rest.substr(4, after - 4));
      std::string reps_part = detail::trim(rest.substr(after));
      if (!reps_part.empty()) {
        if (reps_part.rfind("reps", 0) != 0)
          throw fail("expected 'reps' after the dimension");
        for (auto& rep_src : detail::split(reps_part.substr(4), ';')) {
          std::map<std::string, std::string> rep;
          for (auto& comp : detail::split(rep_src, '&')) {
            std::string c = detail::trim(comp);
            if (c.empty()) continue;
            auto eq = c.find('=');
            if (eq == std::string::npos)
              throw fail("bad representative component '" + c + "'");
            rep[detail::trim(c.substr(0, eq))] = detail::trim(c.substr(eq + 1));
          }
          if (!rep.empty()) row.reps.push_back(std::move(rep));
        }
      }
      if (kw == "when")
        T.rows.push_back(std::move(row));
      else
        T.default_dim = row.dim;
    } else {
      throw fail("unknown keyword '" + kw + "'");
    }
  }
  if (T.id.empty() || T.algebra.empty() || T.ext_type == 0)
    throw error("golden table missing theorem/algebra/type header");
  if (!saw_default) throw error("golden table missing 'default' row");
  return T;
}

inline GoldenTable load_golden_table(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw error("cannot open golden table '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_golden_table(ss.str());
}

// ---------------------------------------------------------------------------
// Grid enumeration and problem construction.

inline std::vector<ParamMap> table_grid(const GoldenTable& T,
                                        const Field& field) {
  std::vector<ParamMap> points;
  for (auto& sw : T.sweeps) {
    if (!sw.field_requirement.empty() &&
        sw.field_requirement != field.str())
      continue;
    std::vector<size_t> idx(sw.ranges.size(), 0);
    for (;;) {
      ParamMap p;
      for (size_t i = 0; i < sw.ranges.size(); ++i)
        p[sw.ranges[i].first] = sw.ranges[i].second[idx[i]];
      points.push_back(std::move(p));
      size_t i = sw.ranges.size();
      while (i > 0) {
        --i;
        if (++idx[i] < sw.ranges[i].second.size()) break;
        idx[i] = 0;
        if (i == 0) {
          i = SIZE_MAX;
          break;
        }
      }
      if (i == SIZE_MAX) break;
    }
  }
  return points;
}

inline Scalar param_of(const ParamMap& p, const std::string& key,
                       const Scalar& fallback = Scalar(0)) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

/// Completed parameter set: for type-3 sweeps delta is derived from
/// dbar + gap when not bound directly.
inline ParamMap complete_params(const GoldenTable& T, ParamMap p) {
  if (T.ext_type == 3 && !p.count("delta") && p.count("dbar") &&
      p.count("gap"))
    p["delta"] = p.at("dbar") + p.at("gap");
  return p;
}

inline ExtProblem table_problem(const GoldenTable& T, const LcaSpec& A,
                                const ParamMap& p, int degree_cap) {
  bool has_n = A.has_generator("N");
  auto beta_of = [&](const std::string& key) -> std::optional<Scalar> {
    if (!has_n) return std::nullopt;
    return param_of(p, key);
  };
  ExtProblem P;
  P.algebra = A;
  P.degree_cap = degree_cap;
  switch (T.ext_type) {
    case 1:
      P.sub = make_trivial(A, param_of(p, "gamma"));
      P.quot = make_rank1(A, param_of(p, "alpha"), param_of(p, "delta"),
                          beta_of("beta"));
      break;
    case 2:
      P.sub = make_rank1(A, param_of(p, "alpha"), param_of(p, "delta"),
                         beta_of("beta"));
      P.quot = make_trivial(A, param_of(p, "gamma"));
      break;
    case 3:
      P.sub = make_rank1(A, param_of(p, "abar"), param_of(p, "dbar"),
                         beta_of("bbar"));
      P.quot = make_rank1(A, param_of(p, "alpha"), param_of(p, "delta"),
                          beta_of("beta"));
      break;
    default:
      throw error("bad extension type in table " + T.id);
  }
  return P;
}

/// Grid points whose rank-1 modules are all irreducible.
inline bool point_admissible(const GoldenTable& T, const LcaSpec& A,
                             const ParamMap& p) {
  ExtProblem P = table_problem(T, A, p, 0);
  if (!P.sub.is_trivial() && !rank1_irreducible(A, P.sub)) return false;
  if (!P.quot.is_trivial() && !rank1_irreducible(A, P.quot)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Sweeping and golden comparison.

struct SweepResult {
  ParamMap params;
  ExtProblem problem;
  ExtResult result;
  std::string failure;  // nonempty when the solve threw
};

inline std::vector<SweepResult> run_sweep(const GoldenTable& T,
                                          const Field& field, int degree_cap,
                                          int jobs = 0,
                                          const LcaSpec* algebra = nullptr) {
  LcaSpec A = algebra ? *algebra : builtin_algebra(T.algebra);
  std::vector<ParamMap> points;
  for (auto& p : table_grid(T, field)) {
    ParamMap full = complete_params(T, p);
    if (point_admissible(T, A, full)) points.push_back(std::move(full));
  }
  std::vector<SweepResult> results(points.size());
  if (jobs <= 0) jobs = (int)std::thread::hardware_concurrency();
  if (jobs < 1) jobs = 1;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      SweepResult& r = results[i];
      r.params = points[i];
      r.problem = table_problem(T, A, points[i], degree_cap);
      try {
        r.result = solve_ext(r.problem);
      } catch (const std::exception& e) {
        r.failure = e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return results;
}

namespace detail {

inline std::string param_str(const ParamMap& p) {
  std::string out;
  for (auto& [k, v] : p) {
    if (!out.empty()) out += ", ";
    out += k + "=" + v.str();
  }
  return out;
}

/// Expected representative in solver coordinates: table polynomials are
/// written with d meaning d+alpha; tokens are the point's parameters.
inline SparseVec expected_rep_vector(
    const UnknownLayout& layout, const std::map<std::string, std::string>& rep,
    const ParamMap& p) {
  std::map<std::string, Scalar> syms;
  for (auto& [k, v] : p) {
    std::string upper = k;
    for (auto& c : upper) c = (char)toupper((unsigned char)c);
    syms[upper] = v;
  }
  MPoly shifted_d =
      MPoly::variable(VPartial) + MPoly(param_of(p, "alpha"));
  std::map<std::string, MPoly> polys;
  for (auto& [name, src] : rep) {
    MPoly q = MPoly::parse(src, &syms).substitute(VPartial, shifted_d);
    if (!q.is_zero()) polys[name] = q;
  }
  return assignment_vector(layout, polys);
}

}  // namespace detail

/// Empty = table fully reproduced.
using DiffReport = std::vector<std::string>;

inline DiffReport check_against_golden(const std::vector<SweepResult>& results,
                                       const GoldenTable& T,
                                       const Field& field) {
  DiffReport diff;
  std::vector<bool> row_hit(T.rows.size(), false);
  for (auto& r : results) {
    std::string where = T.id + " @ " + detail::param_str(r.params);
    if (!r.failure.empty()) {
      diff.push_back(where + ": solve failed: " + r.failure);
      continue;
    }
    const GoldenRow* match = nullptr;
    for (size_t i = 0; i < T.rows.size(); ++i) {
      if (!T.rows[i].matches(r.params, field)) continue;
      if (match != nullptr) {
        diff.push_back(where + ": multiple golden rows match (" +
                       match->source + " / " + T.rows[i].source + ")");
        break;
      }
      match = &T.rows[i];
      row_hit[i] = true;
    }
    int expected = match ? match->dim : T.default_dim;
    if (r.result.ext_dim != expected) {
      diff.push_back(where + ": ext_dim=" + std::to_string(r.result.ext_dim) +
                     ", expected " + std::to_string(expected));
      continue;
    }
    if (!match || match->reps.empty()) continue;
    Rref cocycles = rref(r.result.cocycle_basis);
    Rref coboundaries = rref(r.result.coboundary_basis);
    Rref joint = coboundaries;
    for (auto& rep : match->reps) {
      SparseVec v;
      try {
        v = detail::expected_rep_vector(r.result.layout, rep, r.params);
      } catch (const std::exception& e) {
        diff.push_back(where + ": bad representative spec: " + e.what());
        continue;
      }
      if (!cocycles.contains(v)) {
        diff.push_back(where + ": expected representative is not a cocycle");
        continue;
      }
      if (coboundaries.contains(v)) {
        diff.push_back(where + ": expected representative is a coboundary");
        continue;
      }
      if (!joint.add(v))
        diff.push_back(where +
                       ": expected representatives are dependent modulo "
                       "coboundaries");
    }
  }
  for (size_t i = 0; i < T.rows.size(); ++i) {
    if (row_hit[i]) continue;
    bool gated_off = false;
    for (auto& p : T.rows[i].preds)
      if (!p.field_requirement.empty() &&
          p.field_requirement != field.str())
        gated_off = true;
    auto has_quad_literal = [](const std::string& s) {
      for (size_t k = 0; k + 1 < s.size(); ++k)
        if (s[k] == 'r' && isdigit((unsigned char)s[k + 1]) &&
            (k == 0 || !isalpha((unsigned char)s[k - 1])))
          return true;
      return false;
    };
    bool needs_quad = false;
    for (auto& p : T.rows[i].preds)
      if (has_quad_literal(p.lhs) || has_quad_literal(p.rhs))
        needs_quad = true;
    if (gated_off || (field.disc == 0 && needs_quad)) continue;
    diff.push_back(T.id + ": golden row never exercised: " +
                   T.rows[i].source);
  }
  return diff;
}

// ---------------------------------------------------------------------------
// Registry.

inline const std::vector<std::string>& golden_registry() {
  static const std::vector<std::string> ids{
      "thm-2.8", "thm-2.9", "thm-2.10", "thm-3.2", "thm-3.4",
      "thm-3.7", "thm-5.2", "thm-5.4",  "thm-5.6", "thm-5.7",
      "thm-5.8", "cor-6.1", "cor-6.2",  "cor-6.3"};
  return ids;
}

inline std::string golden_table_path(const std::string& id) {
  return std::string(CONFEXT_DATA_DIR) + "/golden/" + id + ".tbl";
}

inline DiffReport reproduce_theorem(const std::string& id, const Field& field,
                                    int degree_cap, int jobs = 0) {
  auto& reg = golden_registry();
  if (std::find(reg.begin(), reg.end(), id) == reg.end())
    throw error("unknown theorem id '" + id + "'");
  GoldenTable T = load_golden_table(golden_table_path(id));
  if (T.id != id)
    throw error("golden table id mismatch: file says '" + T.id + "'");
  auto results = run_sweep(T, field, degree_cap, jobs);
  return check_against_golden(results, T, field);
}

/// The two-generator algebra embeds in the four-generator one with the same
/// bracket table on {L, N}; on the shared parameter grid the Ext dimensions
/// must agree wherever the larger algebra's representatives carry no g or h
/// component.
inline DiffReport hv_esv_consistency(const Field& field, int degree_cap,
                                     int jobs = 0,
                                     const GoldenTable* grid_table = nullptr) {
  GoldenTable T = grid_table ? *grid_table
                             : load_golden_table(golden_table_path("cor-6.3"));
  auto hv_results = run_sweep(T, field, degree_cap, jobs);
  GoldenTable Tesv = T;
  Tesv.algebra = "esv";
  auto esv_results = run_sweep(Tesv, field, degree_cap, jobs);
  DiffReport diff;
  if (hv_results.size() != esv_results.size()) {
    diff.push_back("consistency: grids of different size");
    return diff;
  }
  for (size_t i = 0; i < hv_results.size(); ++i) {
    auto& h = hv_results[i];
    auto& e = esv_results[i];
    std::string where = "consistency @ " + detail::param_str(h.params);
    if (!h.failure.empty() || !e.failure.empty()) {
      diff.push_back(where + ": solve failed");
      continue;
    }
    bool pure = true;
    for (auto& v : e.result.nontrivial_reps) {
      auto polys = vector_assignment(e.result.layout, v);
      if (polys.count("g") || polys.count("h")) pure = false;
    }
    if (pure && h.result.ext_dim != e.result.ext_dim)
      diff.push_back(where + ": hv dim " + std::to_string(h.result.ext_dim) +
                     " != esv dim " + std::to_string(e.result.ext_dim));
  }
  return diff;
}

}  // namespace confext

#endif

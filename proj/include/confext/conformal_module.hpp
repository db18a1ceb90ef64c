#ifndef CONFEXT_CONFORMAL_MODULE_HPP
#define CONFEXT_CONFORMAL_MODULE_HPP

#include <optional>

#include "confext/lca.hpp"

namespace confext {

/// A module that is free of rank one over C[partial] ("rank1", generator v,
/// X_l v = action[X](d, l) v) or one-dimensional over C ("trivial",
/// generator c, partial c = gamma c, all actions zero).
struct ModuleSpec {
  std::string kind;  // "rank1" | "trivial"
  Scalar alpha, delta, gamma;
  std::optional<Scalar> beta;
  std::map<std::string, MPoly> action;

  MPoly action_of(const std::string& g) const {
    auto it = action.find(g);
    return it == action.end() ? MPoly() : it->second;
  }
  bool is_trivial() const { return kind == "trivial"; }
};

inline ModuleSpec make_rank1(const LcaSpec& A, const Scalar& alpha,
                             const Scalar& delta,
                             std::optional<Scalar> beta = std::nullopt) {
  ModuleSpec M;
  M.kind = "rank1";
  M.alpha = alpha;
  M.delta = delta;
  if (A.has_generator("N")) {
    M.beta = beta.value_or(Scalar(0));
  } else if (beta && !beta->is_zero()) {
    throw error("beta parameter requires a generator N in algebra " + A.name);
  }
  MPoly d = MPoly::variable(VPartial), l = MPoly::variable(VLambda);
  for (auto& g : A.generators) {
    if (g == "L")
      M.action[g] = d + MPoly(alpha) + delta * l;
    else if (g == "N" && M.beta)
      M.action[g] = MPoly(*M.beta);
    else
      M.action[g] = MPoly();
  }
  return M;
}

inline ModuleSpec make_trivial(const LcaSpec& A, const Scalar& gamma) {
  ModuleSpec M;
  M.kind = "trivial";
  M.gamma = gamma;
  for (auto& g : A.generators) M.action[g] = MPoly();
  return M;
}

struct ModuleViolation {
  std::string x, z;
  MPoly residual;  // in {d, l, m}
};

/// Checks [X_l [Z_m v]] - [Z_m [X_l v]] = [[X_l Z]_{l+m} v] for all ordered
/// generator pairs.
inline std::vector<ModuleViolation> check_module(const LcaSpec& A,
                                                 const ModuleSpec& M) {
  std::vector<ModuleViolation> bad;
  MPoly d = MPoly::variable(VPartial);
  MPoly l = MPoly::variable(VLambda), m = MPoly::variable(VMu);
  for (auto& x : A.generators)
    for (auto& z : A.generators) {
      MPoly ax = M.action_of(x), az = M.action_of(z);
      MPoly r = az.substitute(VLambda, m).substitute(VPartial, d + l) * ax -
                ax.substitute(VPartial, d + m) * az.substitute(VLambda, m);
      for (auto& e : A.bracket(x, z)) {
        MPoly c = e.coeff.substitute(VPartial, -l - m);
        r -= c * M.action_of(e.target).substitute(VLambda, l + m);
      }
      if (!r.is_zero()) bad.push_back({x, z, r});
    }
  return bad;
}

/// A rank-one module is reducible exactly when C[partial](partial+alpha)v is
/// a proper submodule, i.e. (partial+alpha+l) action[X] vanishes at
/// partial = -alpha for every generator X.
inline bool rank1_irreducible(const LcaSpec& A, const ModuleSpec& M) {
  if (M.kind != "rank1") throw error("irreducibility test needs a rank1 module");
  MPoly l = MPoly::variable(VLambda);
  MPoly minus_alpha = MPoly(-M.alpha);
  for (auto& g : A.generators) {
    MPoly w = (MPoly::variable(VPartial) + MPoly(M.alpha) + l) * M.action_of(g);
    if (!w.substitute(VPartial, minus_alpha).is_zero()) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Literals: "rank1:alpha=0,beta=1/2,delta=3" and "trivial:gamma=-1".

struct ModuleLiteral {
  std::string kind;
  Scalar alpha, delta, gamma;
  std::optional<Scalar> beta;
};

inline ModuleLiteral parse_module_literal(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw error("module literal '" + s + "' missing ':'");
  ModuleLiteral lit;
  lit.kind = s.substr(0, colon);
  if (lit.kind != "rank1" && lit.kind != "trivial")
    throw error("unknown module kind '" + lit.kind + "'");
  std::string rest = s.substr(colon + 1);
  size_t pos = 0;
  bool saw_alpha = false, saw_delta = false, saw_gamma = false;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    std::string item = rest.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? rest.size() : comma + 1;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw error("bad module parameter '" + item + "'");
    std::string key = item.substr(0, eq);
    Scalar val = Scalar::parse(item.substr(eq + 1));
    if (key == "alpha") {
      lit.alpha = val;
      saw_alpha = true;
    } else if (key == "delta") {
      lit.delta = val;
      saw_delta = true;
    } else if (key == "beta") {
      lit.beta = val;
    } else if (key == "gamma") {
      lit.gamma = val;
      saw_gamma = true;
    } else {
      throw error("unknown module parameter '" + key + "'");
    }
  }
  if (lit.kind == "rank1" && (!saw_alpha || !saw_delta))
    throw error("rank1 literal requires alpha and delta");
  if (lit.kind == "trivial" && !saw_gamma)
    throw error("trivial literal requires gamma");
  return lit;
}

inline ModuleSpec instantiate(const LcaSpec& A, const ModuleLiteral& lit) {
  if (lit.kind == "trivial") return make_trivial(A, lit.gamma);
  return make_rank1(A, lit.alpha, lit.delta, lit.beta);
}

inline std::string render_module_literal(const ModuleSpec& M) {
  if (M.is_trivial()) return "trivial:gamma=" + M.gamma.str();
  std::string out = "rank1:alpha=" + M.alpha.str();
  if (M.beta) out += ",beta=" + M.beta->str();
  out += ",delta=" + M.delta.str();
  return out;
}

}  // namespace confext

#endif

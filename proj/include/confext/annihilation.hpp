#ifndef CONFEXT_ANNIHILATION_HPP
#define CONFEXT_ANNIHILATION_HPP

#include <map>
#include <string>
#include <vector>

#include "confext/lca.hpp"

namespace confext {

/// j-th products (a_(j) b) recovered from [a_l b] = sum_j (a_(j)b) l^j / j!.
/// Result[j] has coefficients in {d}.
inline std::vector<ConfElement> jproducts(const LcaSpec& A,
                                          const std::string& a,
                                          const std::string& b) {
  std::vector<ConfElement> out;
  std::array<bool, kNumVars> lmask{false, true, false, false};
  Rat fact(1);
  for (auto& entry : A.bracket(a, b)) {
    auto parts = entry.coeff.coeff_extract(lmask);
    for (auto& [key, p] : parts) {
      int j = key[VLambda];
      while ((int)out.size() <= j) out.emplace_back();
      out[j].add(entry.target, p);
    }
  }
  for (size_t j = 0; j < out.size(); ++j) {
    fact = 1;
    for (size_t i = 2; i <= j; ++i) fact *= (long)i;
    for (auto& [g, p] : out[j].components) p = p * Scalar(fact);
  }
  return out;
}

/// Basis mode of the (extended) annihilation algebra in physical labels:
/// L_m with integer m >= -1, Y_p with half-integer p, M_n / N_n integers.
struct ModeKey {
  std::string gen;
  Rat mode;
  bool operator<(const ModeKey& o) const {
    if (gen != o.gen) return gen < o.gen;
    return mode < o.mode;
  }
  bool operator==(const ModeKey& o) const {
    return gen == o.gen && mode == o.mode;
  }
};

/// Element of the extended annihilation algebra: a finite combination of
/// modes plus a multiple of the derivation partial.
struct AnnihElement {
  std::map<ModeKey, Scalar> modes;
  Scalar partial;

  bool is_zero() const { return modes.empty() && partial.is_zero(); }
  void add(const ModeKey& k, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = modes.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) modes.erase(it);
    }
  }
  AnnihElement operator+(const AnnihElement& o) const {
    AnnihElement r = *this;
    for (auto& [k, c] : o.modes) r.add(k, c);
    r.partial += o.partial;
    return r;
  }
  AnnihElement operator-(const AnnihElement& o) const {
    AnnihElement r = *this;
    for (auto& [k, c] : o.modes) r.add(k, -c);
    r.partial -= o.partial;
    return r;
  }
  AnnihElement operator*(const Scalar& s) const {
    AnnihElement r;
    if (s.is_zero()) return r;
    for (auto& [k, c] : modes) r.modes[k] = c * s;
    r.partial = partial * s;
    return r;
  }
  bool operator==(const AnnihElement& o) const {
    return modes == o.modes && partial == o.partial;
  }
  static AnnihElement mode(const std::string& g, const Rat& m,
                           const Scalar& c = Scalar(1)) {
    AnnihElement e;
    e.add({g, m}, c);
    return e;
  }
  static AnnihElement derivation(const Scalar& c = Scalar(1)) {
    AnnihElement e;
    e.partial = c;
    return e;
  }
  std::string str() const {
    std::string out;
    auto join = [&](const std::string& piece) {
      if (!out.empty()) out += " + ";
      out += piece;
    };
    for (auto& [k, c] : modes)
      join("(" + c.str() + ")" + k.gen + "_{" + rat_str(k.mode) + "}");
    if (!partial.is_zero()) join("(" + partial.str() + ")partial");
    return out.empty() ? "0" : out;
  }
};

namespace detail {

inline Rat falling(const Rat& x, int k) {
  Rat r(1);
  for (int i = 0; i < k; ++i) r *= (x - i);
  return r;
}

inline Rat binom(const Rat& x, int j) {
  Rat r = falling(x, j);
  for (int i = 2; i <= j; ++i) r /= i;
  return r;
}

/// (p(partial) T)_(k) in raw indices: (partial T)_(k) = -k T_(k-1).
inline void apply_poly_mode(AnnihElement& out, const LcaSpec& A,
                            const MPoly& p, const std::string& target,
                            const Rat& raw, const Scalar& factor) {
  Rat shift = A.shift_of(target);
  for (auto& [e, c] : p.terms()) {
    int i = e[VPartial];
    Rat sign = i % 2 ? Rat(-1) : Rat(1);
    Scalar coeff = factor * c * Scalar(sign * falling(raw, i));
    out.add({target, raw - i - shift}, coeff);
  }
}

}  // namespace detail

/// [g_m, h_n] for single modes in physical labels, via
/// [a_(p), b_(q)] = sum_j C(p, j) (a_(j) b)_(p+q-j) on raw indices,
/// with [partial, g_(q)] = -q g_(q-1).
inline AnnihElement annih_bracket_modes(const LcaSpec& A, const ModeKey& x,
                                        const ModeKey& y) {
  AnnihElement out;
  Rat p = x.mode + A.shift_of(x.gen);
  Rat q = y.mode + A.shift_of(y.gen);
  auto jp = jproducts(A, x.gen, y.gen);
  for (size_t j = 0; j < jp.size(); ++j) {
    Scalar c(detail::binom(p, (int)j));
    if (c.is_zero()) continue;
    for (auto& [t, poly] : jp[j].components)
      detail::apply_poly_mode(out, A, poly, t, p + q - (long)j, c);
  }
  return out;
}

inline AnnihElement annih_bracket(const LcaSpec& A, const AnnihElement& x,
                                  const AnnihElement& y) {
  AnnihElement out;
  for (auto& [kx, cx] : x.modes)
    for (auto& [ky, cy] : y.modes)
      out = out + annih_bracket_modes(A, kx, ky) * (cx * cy);
  for (auto& [ky, cy] : y.modes) {
    Rat raw = ky.mode + A.shift_of(ky.gen);
    out.add({ky.gen, ky.mode - 1}, x.partial * cy * Scalar(-raw));
  }
  for (auto& [kx, cx] : x.modes) {
    Rat raw = kx.mode + A.shift_of(kx.gen);
    out.add({kx.gen, kx.mode - 1}, y.partial * cx * Scalar(raw));
  }
  return out;
}

struct AnnihViolation {
  std::string kind;  // "antisymmetry", "jacobi", "reassembly"
  std::vector<std::string> where;
  std::string detail;
};

/// Structural verification of the extended annihilation algebra over all
/// basis modes with raw index 0..range, plus the derivation.
inline std::vector<AnnihViolation> verify_annih_lie(const LcaSpec& A,
                                                    int range = 5) {
  std::vector<AnnihViolation> bad;
  std::vector<AnnihElement> basis;
  std::vector<std::string> label;
  basis.push_back(AnnihElement::derivation());
  label.push_back("partial");
  for (auto& g : A.generators)
    for (int r = 0; r <= range; ++r) {
      Rat mode = Rat(r) - A.shift_of(g);
      basis.push_back(AnnihElement::mode(g, mode));
      label.push_back(g + "_{" + rat_str(mode) + "}");
    }
  size_t n = basis.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      AnnihElement r =
          annih_bracket(A, basis[i], basis[j]) + annih_bracket(A, basis[j], basis[i]);
      if (!r.is_zero())
        bad.push_back({"antisymmetry", {label[i], label[j]}, r.str()});
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        AnnihElement r =
            annih_bracket(A, basis[i], annih_bracket(A, basis[j], basis[k])) -
            annih_bracket(A, annih_bracket(A, basis[i], basis[j]), basis[k]) -
            annih_bracket(A, basis[j], annih_bracket(A, basis[i], basis[k]));
        if (!r.is_zero())
          bad.push_back({"jacobi", {label[i], label[j], label[k]}, r.str()});
      }
  // j-products must reassemble the lambda-bracket
  MPoly l = MPoly::variable(VLambda);
  for (auto& a : A.generators)
    for (auto& b : A.generators) {
      ConfElement expect;
      for (auto& e : A.bracket(a, b)) expect.add(e.target, e.coeff);
      ConfElement got;
      auto jp = jproducts(A, a, b);
      Rat fact(1);
      for (size_t j = 0; j < jp.size(); ++j) {
        if (j > 1) fact *= (long)j;
        for (auto& [g, p] : jp[j].components)
          got.add(g, p * l.pow((int)j) * Scalar(Rat(1) / fact));
      }
      if (!(got == expect))
        bad.push_back({"reassembly", {a, b}, (got - expect).str()});
    }
  return bad;
}

// ---------------------------------------------------------------------------
// Symbolic commutation relations, e.g. "[L_m, L_n] = (m - n) L_{m+n}".
// The two mode symbols are carried as the mu and nu variables.

namespace detail {

inline MPoly falling_sym(const MPoly& x, int k) {
  MPoly r(1);
  for (int i = 0; i < k; ++i) r *= x - MPoly(i);
  return r;
}

inline std::string rename_vars(std::string s, char m_as, char n_as) {
  for (auto& c : s) {
    if (c == 'm') c = m_as;
    if (c == 'n') c = n_as;
  }
  return s;
}

}  // namespace detail

/// One line of the symbolic mode algebra for the ordered pair (a, b).
inline std::string annih_relation(const LcaSpec& A, const std::string& a,
                                  const std::string& b) {
  MPoly msym = MPoly::variable(VMu), nsym = MPoly::variable(VNu);
  MPoly p = msym + MPoly(Scalar(A.shift_of(a)));
  MPoly q = nsym + MPoly(Scalar(A.shift_of(b)));
  // target -> (offset of the physical index from m+n -> coefficient)
  std::map<std::string, std::map<Rat, MPoly>> acc;
  auto jp = jproducts(A, a, b);
  for (size_t j = 0; j < jp.size(); ++j) {
    MPoly cj = detail::falling_sym(p, (int)j);
    Rat jf(1);
    for (size_t i = 2; i <= j; ++i) jf *= (long)i;
    cj = cj * Scalar(Rat(1) / jf);
    if (cj.is_zero()) continue;
    for (auto& [t, poly] : jp[j].components) {
      MPoly raw = p + q - MPoly((long)j);
      for (auto& [e, c] : poly.terms()) {
        int i = e[VPartial];
        MPoly term = cj * detail::falling_sym(raw, i) * c;
        if (i % 2) term = -term;
        Rat offset = A.shift_of(a) + A.shift_of(b) - (long)j - i -
                     A.shift_of(t);
        auto& slot = acc[t][offset];
        slot += term;
        if (slot.is_zero()) acc[t].erase(offset);
      }
    }
  }
  char am = a == "Y" ? 'p' : 'm';
  char bn = b == "Y" ? (a == "Y" ? 'q' : 'p') : 'n';
  std::string lhs = "[" + a + "_" + am + ", " + b + "_" + bn + "]";
  std::string rhs;
  for (auto& [t, slots] : acc)
    for (auto& [offset, coeff] : slots) {
      if (coeff.is_zero()) continue;
      if (!rhs.empty()) rhs += " + ";
      std::string idx = std::string(1, am) + "+" + bn;
      if (offset != 0) {
        idx += (offset > 0 ? "+" : "-");
        Rat mag = offset > 0 ? offset : Rat(-offset);
        idx += rat_str(mag);
      }
      std::string cs = detail::rename_vars(coeff.str(), am, bn);
      if (coeff == MPoly(1))
        rhs += t + "_{" + idx + "}";
      else
        rhs += "(" + cs + ") " + t + "_{" + idx + "}";
    }
  if (rhs.empty()) rhs = "0";
  return lhs + " = " + rhs;
}

}  // namespace confext

#endif

#ifndef CONFEXT_MPOLY_HPP
#define CONFEXT_MPOLY_HPP

#include <array>
#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "confext/scalar.hpp"

namespace confext {

/// The fixed ordered variable universe {partial, lambda, mu, nu},
/// rendered as d, l, m, n.
enum Var : int { VPartial = 0, VLambda = 1, VMu = 2, VNu = 3 };
inline constexpr int kNumVars = 4;
inline constexpr char kVarNames[kNumVars] = {'d', 'l', 'm', 'n'};

using Exp = std::array<int, kNumVars>;

inline int total_degree(const Exp& e) { return e[0] + e[1] + e[2] + e[3]; }

/// Graded-lex with partial > lambda > mu > nu; "greater" = later in the
/// canonical print order reversed, i.e. the map iterates leading term first.
struct GrlexGreater {
  bool operator()(const Exp& x, const Exp& y) const {
    int dx = total_degree(x), dy = total_degree(y);
    if (dx != dy) return dx > dy;
    for (int i = 0; i < kNumVars; ++i)
      if (x[i] != y[i]) return x[i] > y[i];
    return false;
  }
};

/// Multivariate polynomial over Scalar in {d,l,m,n}; canonical form with no
/// zero coefficients stored. Total degree of zero is -1.
class MPoly {
 public:
  using TermMap = std::map<Exp, Scalar, GrlexGreater>;

  MPoly() = default;
  MPoly(const Scalar& c) {
    if (!c.is_zero()) terms_[{0, 0, 0, 0}] = c;
  }
  MPoly(long n) : MPoly(Scalar(n)) {}
  MPoly(int n) : MPoly(Scalar(n)) {}

  static MPoly variable(Var v) {
    Exp e{0, 0, 0, 0};
    e[v] = 1;
    return monomial(e, Scalar(1));
  }
  static MPoly monomial(const Exp& e, const Scalar& c) {
    MPoly p;
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const {
    return terms_.empty() ? -1 : total_degree(terms_.begin()->first);
  }
  int degree_in(Var v) const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, e[v]);
    return d;
  }

  Scalar coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar() : it->second;
  }
  Scalar constant_term() const { return coeff({0, 0, 0, 0}); }

  /// True if every term's exponents vanish outside the given variable mask.
  bool uses_only(const std::array<bool, kNumVars>& mask) const {
    for (auto& [e, c] : terms_)
      for (int i = 0; i < kNumVars; ++i)
        if (e[i] > 0 && !mask[i]) return false;
    return true;
  }

  void add_term(const Exp& e, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  MPoly operator-() const {
    MPoly r;
    for (auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }
  MPoly operator+(const MPoly& o) const {
    MPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  MPoly operator-(const MPoly& o) const {
    MPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
  }
  MPoly operator*(const MPoly& o) const {
    MPoly r;
    for (auto& [e1, c1] : terms_)
      for (auto& [e2, c2] : o.terms_) {
        Exp e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]};
        r.add_term(e, c1 * c2);
      }
    return r;
  }
  MPoly operator*(const Scalar& s) const {
    MPoly r;
    if (s.is_zero()) return r;
    for (auto& [e, c] : terms_) r.terms_[e] = c * s;
    return r;
  }
  MPoly& operator+=(const MPoly& o) {
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    for (auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  bool operator==(const MPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  MPoly pow(int k) const {
    if (k < 0) throw error("negative exponent");
    MPoly r(1), base = *this;
    while (k > 0) {
      if (k & 1) r *= base;
      base *= base;
      k >>= 1;
    }
    return r;
  }

  /// Exact composition: replace every occurrence of v by expr.
  MPoly substitute(Var v, const MPoly& expr) const {
    std::vector<MPoly> powers{MPoly(1)};
    MPoly r;
    for (auto& [e, c] : terms_) {
      while ((int)powers.size() <= e[v])
        powers.push_back(powers.back() * expr);
      Exp rest = e;
      rest[v] = 0;
      r += powers[e[v]] * MPoly::monomial(rest, c);
    }
    return r;
  }

  /// v -> v + s, the shift used throughout the bracket calculus.
  MPoly shift(Var v, const Scalar& s) const {
    if (s.is_zero()) return *this;
    return substitute(v, MPoly::variable(v) + MPoly(s));
  }

  /// Group terms by their exponents in the masked variables; values are
  /// polynomials in the remaining variables. Reassembling the map gives
  /// back the original polynomial.
  std::map<Exp, MPoly, GrlexGreater> coeff_extract(
      const std::array<bool, kNumVars>& mask) const {
    std::map<Exp, MPoly, GrlexGreater> out;
    for (auto& [e, c] : terms_) {
      Exp key{0, 0, 0, 0}, rest{0, 0, 0, 0};
      for (int i = 0; i < kNumVars; ++i)
        (mask[i] ? key[i] : rest[i]) = e[i];
      out[key].add_term(rest, c);
    }
    return out;
  }

  static MPoly reassemble(const std::map<Exp, MPoly, GrlexGreater>& parts) {
    MPoly r;
    for (auto& [key, p] : parts) r += MPoly::monomial(key, Scalar(1)) * p;
    return r;
  }

  std::string str() const;
  static MPoly parse(const std::string& src,
                     const std::map<std::string, Scalar>* symbols = nullptr);

 private:
  TermMap terms_;
};

inline MPoly operator*(const Scalar& s, const MPoly& p) { return p * s; }

// ---------------------------------------------------------------------------
// Canonical rendering.  Each stored term splits into a rational and a
// quadratic sub-term so the compound-coefficient form never appears in
// output; parse(str(p)) == p.

namespace detail {

inline void render_monomial(std::string& out, const Exp& e) {
  for (int i = 0; i < kNumVars; ++i) {
    if (e[i] == 0) continue;
    out += kVarNames[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
}

inline void render_piece(std::string& out, bool first, const Rat& r,
                         unsigned long d, const Exp& e) {
  Rat mag = r < 0 ? Rat(-r) : r;
  if (first) {
    if (r < 0) out += "-";
  } else {
    out += r < 0 ? " - " : " + ";
  }
  std::string coeff;
  if (mag != 1 || d != 0 || total_degree(e) == 0) coeff = rat_str(mag);
  if (d != 0) coeff += "r" + std::to_string(d);
  out += coeff;
  render_monomial(out, e);
}

}  // namespace detail

inline std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [e, c] : terms_) {
    if (c.rat_part() != 0) {
      detail::render_piece(out, first, c.rat_part(), 0, e);
      first = false;
    }
    if (c.quad_part() != 0) {
      detail::render_piece(out, first, c.quad_part(), c.disc(), e);
      first = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expression parser.  Accepts the canonical grammar plus parentheses,
// products, powers and uppercase symbols (used by the golden tables).

namespace detail {

class PolyParser {
 public:
  PolyParser(const std::string& src, const std::map<std::string, Scalar>* syms)
      : s_(src), syms_(syms) {}

  MPoly parse() {
    MPoly p = expr();
    skip_ws();
    if (pos_ < s_.size())
      throw error("trailing input at '" + s_.substr(pos_) + "' in polynomial '" +
                  s_ + "'");
    return p;
  }

 private:
  const std::string& s_;
  const std::map<std::string, Scalar>* syms_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && isspace((unsigned char)s_[pos_])) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw error(what + " at position " + std::to_string(pos_) +
                " in polynomial '" + s_ + "'");
  }

  static bool is_var(char c) {
    return c == 'd' || c == 'l' || c == 'm' || c == 'n';
  }
  bool starts_factor(char c) {
    return isdigit((unsigned char)c) || is_var(c) || c == '(' ||
           (c == 'r' && pos_ + 1 < s_.size() &&
            isdigit((unsigned char)s_[pos_ + 1])) ||
           isupper((unsigned char)c);
  }

  unsigned long integer() {
    skip_ws();
    if (pos_ >= s_.size() || !isdigit((unsigned char)s_[pos_]))
      fail("expected integer");
    unsigned long v = 0;
    while (pos_ < s_.size() && isdigit((unsigned char)s_[pos_]))
      v = v * 10 + (s_[pos_++] - '0');
    return v;
  }

  MPoly expr() {
    MPoly acc;
    bool first = true;
    for (;;) {
      long sign = 1;
      char c = peek();
      if (c == '-') {
        ++pos_;
        sign = -1;
      } else if (c == '+') {
        ++pos_;
      } else if (!first) {
        break;
      }
      acc += term() * Scalar(sign);
      first = false;
      c = peek();
      if (c != '+' && c != '-') break;
    }
    return acc;
  }

  MPoly term() {
    MPoly p = factor();
    for (;;) {
      if (accept('*')) {
        p *= factor();
        continue;
      }
      char c = peek();
      if (c != '\0' && starts_factor(c)) {
        p *= factor();
        continue;
      }
      break;
    }
    return p;
  }

  MPoly factor() {
    MPoly p = primary();
    if (accept('^')) p = p.pow((int)integer());
    return p;
  }

  MPoly primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      MPoly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (isdigit((unsigned char)c)) {
      Rat r((long)integer());
      if (peek() == '/') {
        // only a plain integer denominator; x/(…) is not in the grammar
        size_t save = pos_;
        ++pos_;
        if (isdigit((unsigned char)peek())) {
          long den = (long)integer();
          if (den == 0) fail("zero denominator");
          r /= den;
          r.canonicalize();
        } else {
          pos_ = save;
          fail("expected integer denominator");
        }
      }
      if (peek() == 'r' && pos_ + 1 < s_.size() &&
          isdigit((unsigned char)s_[pos_ + 1])) {
        ++pos_;
        unsigned long d = integer();
        return MPoly(Scalar(Rat(0), r, d));
      }
      return MPoly(Scalar(r));
    }
    if (c == 'r' && pos_ + 1 < s_.size() &&
        isdigit((unsigned char)s_[pos_ + 1])) {
      ++pos_;
      unsigned long d = integer();
      return MPoly(Scalar::sqrt_of(d));
    }
    if (is_var(c)) {
      ++pos_;
      switch (c) {
        case 'd': return MPoly::variable(VPartial);
        case 'l': return MPoly::variable(VLambda);
        case 'm': return MPoly::variable(VMu);
        default: return MPoly::variable(VNu);
      }
    }
    if (isupper((unsigned char)c)) {
      std::string name;
      while (pos_ < s_.size() && isupper((unsigned char)s_[pos_]))
        name += s_[pos_++];
      if (!syms_ || !syms_->count(name))
        fail("unknown symbol '" + name + "'");
      return MPoly(syms_->at(name));
    }
    fail("unexpected character");
  }
};

}  // namespace detail

inline MPoly MPoly::parse(const std::string& src,
                          const std::map<std::string, Scalar>* symbols) {
  return detail::PolyParser(src, symbols).parse();
}

}  // namespace confext

#endif

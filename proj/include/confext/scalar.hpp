#ifndef CONFEXT_SCALAR_HPP
#define CONFEXT_SCALAR_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace confext {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact rational, always canonical (lowest terms, positive denominator).
using Rat = mpq_class;

inline bool is_squarefree(unsigned long d) {
  for (unsigned long p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return true;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// Element a + b*sqrt(d) of Q or a quadratic extension Q(sqrt(d)).
/// d is carried per value; d = 0 means the value is plain rational.
/// Mixing two distinct nonzero discriminants is an error, not a coercion.
class Scalar {
 public:
  Scalar() : d_(0) {}
  Scalar(long n) : a_(n), d_(0) {}
  Scalar(int n) : a_(n), d_(0) {}
  Scalar(Rat a) : a_(std::move(a)), d_(0) { a_.canonicalize(); }
  Scalar(long num, long den) : a_(num, den), d_(0) { a_.canonicalize(); }
  Scalar(Rat a, Rat b, unsigned long d)
      : a_(std::move(a)), b_(std::move(b)), d_(d) {
    a_.canonicalize();
    b_.canonicalize();
    normalize();
  }

  static Scalar sqrt_of(unsigned long d) { return Scalar(Rat(0), Rat(1), d); }

  const Rat& rat_part() const { return a_; }
  const Rat& quad_part() const { return b_; }
  unsigned long disc() const { return d_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  Scalar operator-() const { return Scalar(-a_, -b_, d_); }

  Scalar operator+(const Scalar& o) const {
    unsigned long d = join(o);
    return Scalar(a_ + o.a_, b_ + o.b_, d);
  }
  Scalar operator-(const Scalar& o) const { return *this + (-o); }

  Scalar operator*(const Scalar& o) const {
    unsigned long d = join(o);
    return Scalar(a_ * o.a_ + b_ * o.b_ * long(d), a_ * o.b_ + b_ * o.a_, d);
  }

  Scalar inverse() const {
    if (is_zero()) throw error("scalar division by zero");
    Rat norm = a_ * a_ - b_ * b_ * long(d_);
    // norm = 0 with (a,b) != 0 would make sqrt(d) rational; cannot happen
    // for squarefree d > 1.
    return Scalar(a_ / norm, -b_ / norm, d_);
  }
  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  bool operator==(const Scalar& o) const {
    return a_ == o.a_ && b_ == o.b_ && d_ == o.d_;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// Total order used only for canonical sorting, not arithmetic.
  bool operator<(const Scalar& o) const {
    if (a_ != o.a_) return a_ < o.a_;
    if (b_ != o.b_) return b_ < o.b_;
    return d_ < o.d_;
  }

  /// Canonical text form, e.g. "3", "-2/3", "1/2r19", "0".
  /// A value with both parts nonzero renders as "a+br19" / "a-br19".
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    if (a_ != 0) out += rat_str(a_);
    if (b_ != 0) {
      if (a_ != 0)
        out += (b_ > 0 ? "+" : "-");
      else if (b_ < 0)
        out += "-";
      Rat ab = b_ > 0 ? b_ : Rat(-b_);
      if (ab != 1) out += rat_str(ab);
      out += "r" + std::to_string(d_);
    }
    return out;
  }

  static Scalar parse(const std::string& s);

 private:
  Rat a_, b_;
  unsigned long d_;

  void normalize() {
    if (d_ == 1) {  // sqrt(1) folds into the rational part
      a_ += b_;
      b_ = 0;
      d_ = 0;
    }
    if (b_ == 0) {
      d_ = 0;
      return;
    }
    if (d_ == 0) throw error("quadratic part requires a nonzero discriminant");
    if (!is_squarefree(d_))
      throw error("discriminant " + std::to_string(d_) + " is not squarefree");
  }

  unsigned long join(const Scalar& o) const {
    if (d_ == 0) return o.d_;
    if (o.d_ == 0 || o.d_ == d_) return d_;
    throw error("mixing distinct discriminants " + std::to_string(d_) +
                " and " + std::to_string(o.d_));
  }
};

namespace detail {

struct ScalarLexer {
  const std::string& s;
  size_t pos = 0;
  explicit ScalarLexer(const std::string& str) : s(str) {}

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  unsigned long integer() {
    skip_ws();
    if (pos >= s.size() || !isdigit((unsigned char)s[pos]))
      throw error("expected integer in scalar '" + s + "'");
    unsigned long v = 0;
    while (pos < s.size() && isdigit((unsigned char)s[pos]))
      v = v * 10 + (s[pos++] - '0');
    return v;
  }
  // int['/'int] as a rational
  Rat rational() {
    long num = (long)integer();
    if (accept('/')) {
      long den = (long)integer();
      if (den == 0) throw error("zero denominator in scalar '" + s + "'");
      Rat r(num, den);
      r.canonicalize();
      return r;
    }
    return Rat(num);
  }
  // [sign] (rat ['r' int] | 'r' int)
  Scalar component() {
    long sign = 1;
    if (accept('-'))
      sign = -1;
    else
      accept('+');
    if (peek() == 'r') {
      ++pos;
      unsigned long d = integer();
      return Scalar(Rat(0), Rat(sign), d);
    }
    Rat r = rational() * sign;
    if (peek() == 'r') {
      ++pos;
      unsigned long d = integer();
      return Scalar(Rat(0), r, d);
    }
    return Scalar(r);
  }
};

}  // namespace detail

inline Scalar Scalar::parse(const std::string& s) {
  detail::ScalarLexer lex(s);
  Scalar v = lex.component();
  while (!lex.eof()) {
    char c = lex.peek();
    if (c != '+' && c != '-')
      throw error("trailing input in scalar '" + s + "'");
    v += lex.component();
  }
  return v;
}

}  // namespace confext

#endif

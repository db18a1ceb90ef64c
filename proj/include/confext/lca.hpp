#ifndef CONFEXT_LCA_HPP
#define CONFEXT_LCA_HPP

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "confext/mpoly.hpp"

namespace confext {

/// One summand of a bracket value: coeff(d,l) * target generator.
struct BracketEntry {
  MPoly coeff;  // in {d, l}
  std::string target;
};

/// A C[partial]-linear combination of generators.  Coefficients may pick up
/// l/mu after bracket evaluation.
struct ConfElement {
  std::map<std::string, MPoly> components;

  bool is_zero() const { return components.empty(); }
  void add(const std::string& gen, const MPoly& p) {
    if (p.is_zero()) return;
    auto [it, fresh] = components.try_emplace(gen, p);
    if (!fresh) {
      it->second += p;
      if (it->second.is_zero()) components.erase(it);
    }
  }
  ConfElement operator+(const ConfElement& o) const {
    ConfElement r = *this;
    for (auto& [g, p] : o.components) r.add(g, p);
    return r;
  }
  ConfElement operator-(const ConfElement& o) const {
    ConfElement r = *this;
    for (auto& [g, p] : o.components) r.add(g, -p);
    return r;
  }
  ConfElement operator*(const MPoly& p) const {
    ConfElement r;
    for (auto& [g, q] : components) r.add(g, q * p);
    return r;
  }
  bool operator==(const ConfElement& o) const {
    return components == o.components;
  }
  static ConfElement generator(const std::string& g) {
    ConfElement e;
    e.components[g] = MPoly(1);
    return e;
  }
  std::string str() const {
    if (components.empty()) return "0";
    std::string out;
    for (auto& [g, p] : components) {
      if (!out.empty()) out += " + ";
      out += "(" + p.str() + ")" + g;
    }
    return out;
  }
};

/// Declarative Lie conformal algebra: generators plus a structure table
/// storing one orientation per pair; the other is derived by skew-symmetry.
class LcaSpec {
 public:
  std::string name;
  std::vector<std::string> generators;
  std::map<std::pair<std::string, std::string>, std::vector<BracketEntry>>
      table;
  /// Mode-label shift per generator for the annihilation algebra
  /// (L is shifted by 1, Y by 1/2 in the builtin convention).
  std::map<std::string, Rat> mode_shift;

  bool has_generator(const std::string& g) const {
    return std::find(generators.begin(), generators.end(), g) !=
           generators.end();
  }
  void require_generator(const std::string& g) const {
    if (!has_generator(g))
      throw error("undeclared generator '" + g + "' in algebra " + name);
  }
  Rat shift_of(const std::string& g) const {
    auto it = mode_shift.find(g);
    return it == mode_shift.end() ? Rat(0) : it->second;
  }

  /// [X_l Y] as stored or derived by skew-symmetry (Eq. l -> -l-d).
  std::vector<BracketEntry> bracket(const std::string& x,
                                    const std::string& y) const {
    require_generator(x);
    require_generator(y);
    auto it = table.find({x, y});
    if (it != table.end()) return it->second;
    it = table.find({y, x});
    if (it == table.end()) return {};
    std::vector<BracketEntry> out;
    MPoly minus_l_minus_d =
        -MPoly::variable(VLambda) - MPoly::variable(VPartial);
    for (auto& e : it->second)
      out.push_back({-e.coeff.substitute(VLambda, minus_l_minus_d), e.target});
    return out;
  }

  void validate() const {
    for (auto& [pair, entries] : table) {
      require_generator(pair.first);
      require_generator(pair.second);
      std::array<bool, kNumVars> dl{true, true, false, false};
      for (auto& e : entries) {
        require_generator(e.target);
        if (!e.coeff.uses_only(dl))
          throw error("bracket coefficient outside {d,l} in algebra " + name);
      }
    }
  }
};

/// Bilinear bracket with a general bracket variable nu (an MPoly such as l,
/// m or l+m).  Left d-coefficients become p(-nu); right ones p(d+nu);
/// table coefficients c(d,l) become c(d,nu).
inline ConfElement bracket_general(const LcaSpec& A, const ConfElement& x,
                                   const ConfElement& y, const MPoly& nu) {
  ConfElement out;
  MPoly d_plus_nu = MPoly::variable(VPartial) + nu;
  for (auto& [gx, px] : x.components) {
    MPoly left = px.substitute(VPartial, -nu);
    for (auto& [gy, py] : y.components) {
      MPoly right = py.substitute(VPartial, d_plus_nu);
      MPoly factor = left * right;
      if (factor.is_zero()) continue;
      for (auto& entry : A.bracket(gx, gy))
        out.add(entry.target, factor * entry.coeff.substitute(VLambda, nu));
    }
  }
  return out;
}

/// [x_l y] for x, y with coefficients in {d} only.
inline ConfElement bracket_eval(const LcaSpec& A, const ConfElement& x,
                                const ConfElement& y) {
  std::array<bool, kNumVars> donly{true, false, false, false};
  for (auto& [g, p] : x.components)
    if (!p.uses_only(donly))
      throw error("bracket_eval operands must have coefficients in {d}");
  for (auto& [g, p] : y.components)
    if (!p.uses_only(donly))
      throw error("bracket_eval operands must have coefficients in {d}");
  return bracket_general(A, x, y, MPoly::variable(VLambda));
}

struct AxiomViolation {
  std::vector<std::string> where;  // pair or triple of generators
  ConfElement residual;
};

using AxiomReport = std::vector<AxiomViolation>;

/// Residuals of [a_l b] + [b_{-l-d} a] over all ordered generator pairs.
inline AxiomReport check_skew_symmetry(const LcaSpec& A) {
  AxiomReport report;
  MPoly minus_l_minus_d = -MPoly::variable(VLambda) - MPoly::variable(VPartial);
  for (auto& a : A.generators)
    for (auto& b : A.generators) {
      ConfElement r;
      for (auto& e : A.bracket(a, b)) r.add(e.target, e.coeff);
      for (auto& e : A.bracket(b, a))
        r.add(e.target, e.coeff.substitute(VLambda, minus_l_minus_d));
      if (!r.components.empty()) report.push_back({{a, b}, r});
    }
  return report;
}

/// Residuals of [a_l [b_m c]] - [[a_l b]_{l+m} c] - [b_m [a_l c]] over all
/// ordered generator triples.
inline AxiomReport check_jacobi(const LcaSpec& A) {
  AxiomReport report;
  MPoly l = MPoly::variable(VLambda), m = MPoly::variable(VMu);
  for (auto& a : A.generators)
    for (auto& b : A.generators)
      for (auto& c : A.generators) {
        ConfElement ea = ConfElement::generator(a);
        ConfElement eb = ConfElement::generator(b);
        ConfElement ec = ConfElement::generator(c);
        ConfElement t1 = bracket_general(A, ea, bracket_general(A, eb, ec, m), l);
        ConfElement t2 =
            bracket_general(A, bracket_general(A, ea, eb, l), ec, l + m);
        ConfElement t3 = bracket_general(A, eb, bracket_general(A, ea, ec, l), m);
        ConfElement r = t1 - t2 - t3;
        if (!r.components.empty()) report.push_back({{a, b, c}, r});
      }
  return report;
}

// ---------------------------------------------------------------------------
// Built-in algebras.

inline LcaSpec builtin_algebra(const std::string& which) {
  MPoly d = MPoly::variable(VPartial), l = MPoly::variable(VLambda);
  LcaSpec A;
  A.name = which;
  auto set = [&](const char* x, const char* y, MPoly coeff, const char* t) {
    A.table[{x, y}].push_back({std::move(coeff), t});
  };
  if (which == "vir") {
    A.generators = {"L"};
    set("L", "L", d + Scalar(2) * l, "L");
  } else if (which == "hv") {
    A.generators = {"L", "N"};
    set("L", "L", d + Scalar(2) * l, "L");
    set("L", "N", d + l, "N");
  } else if (which == "sv") {
    A.generators = {"L", "M", "Y"};
    set("L", "L", d + Scalar(2) * l, "L");
    set("L", "Y", d + Scalar(3, 2) * l, "Y");
    set("L", "M", d + l, "M");
    set("Y", "Y", d + Scalar(2) * l, "M");
  } else if (which == "esv") {
    A.generators = {"L", "M", "Y", "N"};
    set("L", "L", d + Scalar(2) * l, "L");
    set("L", "Y", d + Scalar(3, 2) * l, "Y");
    set("L", "M", d + l, "M");
    set("Y", "Y", d + Scalar(2) * l, "M");
    set("L", "N", d + l, "N");
    set("N", "M", MPoly(2), "M");
    set("N", "Y", MPoly(1), "Y");
  } else {
    throw error("unknown builtin algebra '" + which + "'");
  }
  for (auto& g : A.generators) {
    if (g == "L") A.mode_shift[g] = Rat(1);
    if (g == "Y") A.mode_shift[g] = Rat(1, 2);
  }
  A.validate();
  return A;
}

// ---------------------------------------------------------------------------
// Spec-file format:
//   algebra esv
//   generators: L M Y N
//   bracket L L = (d + 2l) L
//   bracket N M = 2 M
// Missing pairs are zero.  '#' starts a comment.

inline std::string render_algebra_spec(const LcaSpec& A) {
  std::ostringstream out;
  out << "algebra " << A.name << "\n";
  out << "generators:";
  for (auto& g : A.generators) out << " " << g;
  out << "\n";
  for (auto& x : A.generators)
    for (auto& y : A.generators) {
      auto it = A.table.find({x, y});
      if (it == A.table.end()) continue;
      for (auto& e : it->second) {
        out << "bracket " << x << " " << y << " = ";
        if (e.coeff == MPoly(1)) {
          out << e.target;
        } else if (e.coeff.terms().size() == 1) {
          out << e.coeff.str() << " " << e.target;
        } else {
          out << "(" << e.coeff.str() << ") " << e.target;
        }
        out << "\n";
      }
    }
  return out.str();
}

inline LcaSpec parse_algebra_spec(const std::string& text) {
  LcaSpec A;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto syntax = [&](const std::string& what) -> error {
    return error("algebra spec line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "algebra") {
      if (!(ls >> A.name)) throw syntax("missing algebra name");
    } else if (kw == "generators:") {
      std::string g;
      while (ls >> g) A.generators.push_back(g);
      if (A.generators.empty()) throw syntax("empty generator list");
    } else if (kw == "bracket") {
      std::string x, y, eq;
      if (!(ls >> x >> y >> eq) || eq != "=")
        throw syntax("expected 'bracket X Y = ...'");
      std::string rhs;
      std::getline(ls, rhs);
      // RHS: entries separated by top-level '+'; each entry is
      // [poly-expr] GeneratorName with the generator as the last word.
      size_t pos = 0;
      int depth = 0;
      std::vector<std::string> pieces;
      std::string cur;
      for (char c : rhs) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '+' && depth == 0) {
          pieces.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      pieces.push_back(cur);
      (void)pos;
      for (auto& piece : pieces) {
        size_t end = piece.find_last_not_of(" \t");
        if (end == std::string::npos) throw syntax("empty bracket entry");
        size_t start = end;
        while (start > 0 && !isspace((unsigned char)piece[start - 1]) &&
               piece[start - 1] != ')')
          --start;
        std::string target = piece.substr(start, end - start + 1);
        std::string coeff_src = piece.substr(0, start);
        if (coeff_src.find_first_not_of(" \t") == std::string::npos)
          coeff_src = "1";
        MPoly coeff;
        try {
          coeff = MPoly::parse(coeff_src);
        } catch (const error& e) {
          throw syntax(e.what());
        }
        if (target == "0" && coeff == MPoly(1)) continue;  // explicit zero
        A.table[{x, y}].push_back({coeff, target});
      }
    } else {
      throw syntax("unknown keyword '" + kw + "'");
    }
  }
  if (A.name.empty()) throw error("algebra spec missing 'algebra <name>' line");
  for (auto& g : A.generators) {
    if (g == "L") A.mode_shift[g] = Rat(1);
    if (g == "Y") A.mode_shift[g] = Rat(1, 2);
  }
  A.validate();
  return A;
}

}  // namespace confext

#endif

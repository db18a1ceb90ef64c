// Acceptance gate: one PASS/FAIL line per criterion.  Runs the full golden
// reproduction plus structural property checks and negative controls.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "confext/annihilation.hpp"
#include "confext/classifier.hpp"

using namespace confext;

namespace {

int failures = 0;

void report(const std::string& name, bool ok,
            const std::vector<std::string>& details, double secs) {
  for (auto& d : details) std::cout << "    " << d << "\n";
  std::cout << name << " " << (ok ? "PASS" : "FAIL") << " ("
            << (int)(secs * 1000) << "ms)\n";
  if (!ok) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

bool reproduce_ok(const std::string& id, const Field& field,
                  std::vector<std::string>& details) {
  auto diff = reproduce_theorem(id, field, 9);
  for (size_t i = 0; i < diff.size() && i < 5; ++i)
    details.push_back(id + ": " + diff[i]);
  return diff.empty();
}

int run_cli(const std::string& args) {
  std::string cmd =
      std::string(CONFEXT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WEXITSTATUS(st);
}

// --- fixed classification points used by the property suite ---------------

struct Point {
  std::string algebra;
  int type;
  Scalar alpha, gamma_or_abar, delta, dbar;
  std::optional<Scalar> beta, bbar;
  int expected;
};

ExtProblem point_problem(const Point& pt, int cap) {
  LcaSpec A = builtin_algebra(pt.algebra);
  ExtProblem P;
  P.algebra = A;
  P.degree_cap = cap;
  switch (pt.type) {
    case 1:
      P.sub = make_trivial(A, pt.gamma_or_abar);
      P.quot = make_rank1(A, pt.alpha, pt.delta, pt.beta);
      break;
    case 2:
      P.sub = make_rank1(A, pt.alpha, pt.delta, pt.beta);
      P.quot = make_trivial(A, pt.gamma_or_abar);
      break;
    default:
      P.sub = make_rank1(A, pt.gamma_or_abar, pt.dbar, pt.bbar);
      P.quot = make_rank1(A, pt.alpha, pt.delta, pt.beta);
      break;
  }
  return P;
}

std::vector<Point> classification_points() {
  Scalar z(0), h(Rat(1, 2));
  auto r19 = Scalar::sqrt_of(19);
  std::vector<Point> pts;
  // type 1 / type 2 (gamma in the second slot)
  pts.push_back({"vir", 1, z, z, Scalar(1), z, {}, {}, 1});
  pts.push_back({"vir", 1, z, z, Scalar(2), z, {}, {}, 1});
  pts.push_back({"vir", 1, z, z, Scalar(3), z, {}, {}, 0});
  pts.push_back({"vir", 2, z, z, Scalar(1), z, {}, {}, 1});
  pts.push_back({"sv", 1, z, z, -h, z, {}, {}, 1});
  pts.push_back({"sv", 2, z, z, Scalar(1), z, {}, {}, 1});
  pts.push_back({"esv", 1, z, z, Scalar(1), z, z, {}, 2});
  pts.push_back({"esv", 1, z, z, Scalar(2), z, z, {}, 1});
  pts.push_back({"esv", 1, z, z, -h, z, Scalar(-1), {}, 1});
  pts.push_back({"esv", 2, z, z, Scalar(1), z, z, {}, 1});
  pts.push_back({"hv", 1, z, z, Scalar(1), z, z, {}, 2});
  // type 3 (abar in the second slot, quot delta = dbar + gap)
  pts.push_back({"vir", 3, z, z, Scalar(2), Scalar(2), {}, {}, 2});
  pts.push_back({"vir", 3, z, z, Scalar(4), Scalar(2), {}, {}, 1});
  pts.push_back({"vir", 3, z, z, Scalar(4), Scalar(1), {}, {}, 1});
  pts.push_back({"vir", 3, z, z, Scalar(5), Scalar(1), {}, {}, 1});
  pts.push_back({"vir", 3, z, z, Scalar(1), Scalar(-4), {}, {}, 1});
  pts.push_back({"vir", 3, z, z, Scalar(9), Scalar(2), {}, {}, 0});
  pts.push_back({"vir", 3, z, z, Scalar(Rat(7, 2)) + h * r19,
                 Scalar(Rat(-5, 2)) + h * r19, {}, {}, 1});
  pts.push_back({"sv", 3, z, z, h, Scalar(1), {}, {}, 1});
  pts.push_back({"sv", 3, z, z, Scalar(Rat(5, 2)), Scalar(2), {}, {}, 1});
  pts.push_back({"sv", 3, z, z, Scalar(1), -h, {}, {}, 1});
  pts.push_back({"esv", 3, z, z, h, Scalar(1), Scalar(-2), Scalar(-1), 1});
  pts.push_back({"esv", 3, z, z, Scalar(1), h, z, Scalar(1), 1});
  pts.push_back({"esv", 3, z, z, Scalar(1), Scalar(1), z, z, 3});
  pts.push_back({"esv", 3, z, z, Scalar(2), Scalar(1), z, z, 1});
  pts.push_back({"esv", 3, z, z, Scalar(3), Scalar(1), z, z, 2});
  pts.push_back({"esv", 3, z, z, Scalar(1), Scalar(-2), z, z, 2});
  pts.push_back({"esv", 3, z, z, Scalar(4), Scalar(1), z, z, 1});
  pts.push_back({"esv", 3, z, z, Scalar(5), Scalar(1), z, z, 1});
  pts.push_back({"esv", 3, z, z, Scalar(1), Scalar(-4), z, z, 1});
  pts.push_back(
      {"esv", 3, z, z, Scalar(1), Scalar(1), Scalar(1), Scalar(1), 3});
  pts.push_back(
      {"esv", 3, z, z, Scalar(2), Scalar(1), Scalar(1), Scalar(1), 1});
  pts.push_back({"esv", 3, z, z, Scalar(1), z, Scalar(1), Scalar(1), 1});
  pts.push_back(
      {"esv", 3, z, z, Scalar(3), Scalar(1), Scalar(1), Scalar(1), 2});
  pts.push_back(
      {"esv", 3, z, z, Scalar(4), Scalar(1), Scalar(1), Scalar(1), 0});
  pts.push_back(
      {"hv", 3, z, z, Scalar(3), Scalar(1), Scalar(2), Scalar(2), 2});
  return pts;
}

bool homogeneous_components(const ExtResult& R) {
  for (auto& v : R.nontrivial_reps) {
    for (auto& [name, poly] : vector_assignment(R.layout, v)) {
      int deg = -1;
      for (auto& [e, c] : poly.terms()) {
        int d = e[VPartial] + e[VLambda] + e[VMu] + e[VNu];
        if (deg < 0) deg = d;
        if (d != deg) return false;
      }
    }
  }
  return true;
}

// independent dense Gauss-Jordan, sharing no code with the sparse kernel
std::vector<std::vector<Rat>> dense_nullspace(std::vector<std::vector<Rat>> m,
                                              int ncols) {
  std::vector<int> pivots;
  size_t row = 0;
  for (int col = 0; col < ncols && row < m.size(); ++col) {
    size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    Rat inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (size_t r2 = 0; r2 < m.size(); ++r2) {
      if (r2 == row || m[r2][col] == 0) continue;
      Rat f = m[r2][col];
      for (int c2 = 0; c2 < ncols; ++c2) m[r2][c2] -= f * m[row][c2];
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<std::vector<Rat>> basis;
  for (int f = 0; f < ncols; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    std::vector<Rat> v(ncols, Rat(0));
    v[f] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// --- criteria -------------------------------------------------------------

void ac1() {
  Timer t;
  std::vector<std::string> details;
  bool ok = true;
  for (const char* name : {"vir", "hv", "sv", "esv"}) {
    LcaSpec A = builtin_algebra(name);
    if (!check_skew_symmetry(A).empty() || !check_jacobi(A).empty()) {
      details.push_back(std::string(name) + ": axiom residual");
      ok = false;
    }
    if (!verify_annih_lie(A, 6).empty()) {
      details.push_back(std::string(name) + ": mode algebra violation");
      ok = false;
    }
  }
  report("AC1 axioms and mode algebras", ok, details, t.secs());
}

void ac_reproduce(const std::string& label,
                  const std::vector<std::pair<std::string, Field>>& runs) {
  Timer t;
  std::vector<std::string> details;
  bool ok = true;
  for (auto& [id, field] : runs)
    if (!reproduce_ok(id, field, details)) ok = false;
  report(label, ok, details, t.secs());
}

void ac6() {
  Timer t;
  std::vector<std::string> details;
  bool ok = true;
  for (const char* id :
       {"thm-5.2", "thm-5.4", "thm-5.6", "thm-5.7", "thm-5.8"})
    if (!reproduce_ok(id, Field{}, details)) ok = false;
  if (!reproduce_ok("thm-5.7", Field::parse("q-sqrt:19"), details)) ok = false;

  // the equal-nonzero-eigenvalue gap-1 case: the pair (DBAR*l^2, BETA*l) is
  // the coboundary of the splitting change by phi = d, so the written
  // two-parameter family carries a single class
  Point p{"esv",     3,         Scalar(0), Scalar(0), Scalar(2),
          Scalar(1), Scalar(1), Scalar(1), 1};
  ExtProblem P = point_problem(p, 9);
  ExtResult R = solve_ext(P);
  std::map<std::string, MPoly> overlap{
      {"f", MPoly::parse("l^2")},       // DBAR = 1
      {"k", MPoly::parse("l")}};        // BETA = 1
  SparseVec v = assignment_vector(R.layout, overlap);
  if (R.ext_dim != 1 || !rref(R.coboundary_basis).contains(v)) {
    details.push_back("gap-1 coboundary collapse not confirmed");
    ok = false;
  }
  report("AC6 four-generator tables", ok, details, t.secs());
}

void ac7() {
  Timer t;
  std::vector<std::string> details;
  bool ok = true;
  for (const char* id : {"cor-6.1", "cor-6.2", "cor-6.3"})
    if (!reproduce_ok(id, Field{}, details)) ok = false;
  auto diff = hv_esv_consistency(Field{}, 9);
  for (size_t i = 0; i < diff.size() && i < 5; ++i) details.push_back(diff[i]);
  if (!diff.empty()) ok = false;
  report("AC7 two-generator tables and cross-check", ok, details, t.secs());
}

void ac8() {
  Timer t;
  std::vector<std::string> details;
  bool ok = true;
  auto pts = classification_points();

  // expected dimensions, coboundary containment, and degree-cap stability
  for (auto& pt : pts) {
    for (int cap = 8; cap <= 12; ++cap) {
      ExtProblem P = point_problem(pt, cap);
      ExtResult R;
      try {
        R = solve_ext(P);
      } catch (const std::exception& e) {
        details.push_back(pt.algebra + " type " + std::to_string(pt.type) +
                          " cap " + std::to_string(cap) + ": " + e.what());
        ok = false;
        continue;
      }
      if (R.ext_dim != pt.expected) {
        details.push_back(pt.algebra + " type " + std::to_string(pt.type) +
                          " cap " + std::to_string(cap) + ": dim " +
                          std::to_string(R.ext_dim) + " != " +
                          std::to_string(pt.expected));
        ok = false;
      }
      if (cap != 9) continue;
      Rref cocycles = rref(R.cocycle_basis);
      for (auto& b : R.coboundary_basis)
        if (!cocycles.contains(b)) {
          details.push_back("coboundary outside cocycle space");
          ok = false;
        }
      if (pt.type == 3 && pt.alpha == Scalar(0) &&
          pt.gamma_or_abar == Scalar(0) && !homogeneous_components(R)) {
        details.push_back("inhomogeneous representative at alpha=abar=0");
        ok = false;
      }
    }
  }

  // alpha-shift invariance on a sample of 20 problems
  int sampled = 0;
  for (auto& pt : pts) {
    if (pt.delta.disc() != 0 || sampled >= 20) continue;
    ++sampled;
    ExtProblem P = point_problem(pt, 9);
    for (auto off : {Scalar(0), Scalar(5), Scalar(Rat(-3, 2))})
      if (!alpha_shift_check(P, off)) {
        details.push_back("alpha-shift changed a dimension");
        ok = false;
      }
  }

  // independent dense elimination oracle on random systems
  std::mt19937 rng(271828);
  std::uniform_int_distribution<int> dim(1, 10), val(-4, 4), density(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    int ncols = dim(rng), nrows = dim(rng);
    std::vector<SparseVec> rows;
    std::vector<std::vector<Rat>> dense;
    for (int i = 0; i < nrows; ++i) {
      SparseVec r;
      std::vector<Rat> d(ncols, Rat(0));
      for (int c = 0; c < ncols; ++c) {
        if (density(rng) != 0) continue;
        int x = val(rng);
        if (x == 0) continue;
        r.emplace_back(c, Scalar(x));
        d[c] = x;
      }
      if (!r.empty()) {
        rows.push_back(std::move(r));
        dense.push_back(std::move(d));
      }
    }
    auto sparse = nullspace(rows, ncols);
    auto oracle = dense_nullspace(dense, ncols);
    bool same = sparse.size() == oracle.size();
    for (size_t i = 0; same && i < sparse.size(); ++i) {
      std::vector<Rat> v(ncols, Rat(0));
      for (auto& [c, s] : sparse[i]) v[c] = s.rat_part();
      same = v == oracle[i];
    }
    if (!same) {
      details.push_back("elimination oracle mismatch at trial " +
                        std::to_string(trial));
      ok = false;
      break;
    }
  }
  report("AC8 property suite", ok, details, t.secs());
}

void ac9() {
  Timer t;
  std::vector<std::string> details;
  bool ok = true;

  std::ifstream in(std::string(CONFEXT_DATA_DIR) + "/algebras/esv.lca");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string spec = ss.str();
  auto pos = spec.find("bracket N Y = Y");
  if (pos == std::string::npos) {
    details.push_back("shipped algebra spec changed unexpectedly");
    ok = false;
  } else {
    spec.replace(pos, 15, "bracket N Y = 2 Y");
    auto path = std::filesystem::temp_directory_path() / "confext-broken.lca";
    std::ofstream(path) << spec;
    if (run_cli("axioms " + path.string()) != 1) {
      details.push_back("corrupted spec did not fail the axiom check");
      ok = false;
    }
    std::filesystem::remove(path);
  }

  if (run_cli("ext vir --sub trivial:gamma=0 --quot trivial:gamma=1") != 2) {
    details.push_back("both-trivial request did not exit with code 2");
    ok = false;
  }
  if (run_cli("reproduce --theorem nosuch") != 2) {
    details.push_back("unknown theorem id did not exit with code 2");
    ok = false;
  }

  try {
    Scalar s = Scalar::sqrt_of(19) + Scalar::sqrt_of(3);
    (void)s;
    details.push_back("mixed discriminants did not raise an error");
    ok = false;
  } catch (const error&) {
  }
  report("AC9 negative controls", ok, details, t.secs());
}

}  // namespace

int main() {
  Field q, q19 = Field::parse("q-sqrt:19");
  ac1();
  ac_reproduce("AC2 rank-1 by trivial, Virasoro", {{"thm-2.8", q}});
  ac_reproduce("AC3 trivial by rank-1, Virasoro", {{"thm-2.9", q}});
  ac_reproduce("AC4 rank-1 by rank-1, Virasoro",
               {{"thm-2.10", q}, {"thm-2.10", q19}});
  ac_reproduce("AC5 three-generator tables",
               {{"thm-3.2", q}, {"thm-3.4", q}, {"thm-3.7", q},
                {"thm-3.7", q19}});
  ac6();
  ac7();
  ac8();
  ac9();
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT")
            << "\n";
  return failures == 0 ? 0 : 1;
}

#include <catch2/catch_amalgamated.hpp>

#include "confext/ext_solver.hpp"

using namespace confext;

namespace {

const MPoly d = MPoly::variable(VPartial);
const MPoly l = MPoly::variable(VLambda);

ExtProblem type1(const std::string& alg, Scalar gamma, Scalar alpha,
                 Scalar delta, std::optional<Scalar> beta, int cap) {
  LcaSpec A = builtin_algebra(alg);
  return {A, make_trivial(A, gamma), make_rank1(A, alpha, delta, beta), cap};
}

ExtProblem type2(const std::string& alg, Scalar alpha, Scalar delta,
                 std::optional<Scalar> beta, Scalar gamma, int cap) {
  LcaSpec A = builtin_algebra(alg);
  return {A, make_rank1(A, alpha, delta, beta), make_trivial(A, gamma), cap};
}

ExtProblem type3(const std::string& alg, Scalar alpha_sub, Scalar delta_sub,
                 std::optional<Scalar> beta_sub, Scalar alpha_q,
                 Scalar delta_q, std::optional<Scalar> beta_q, int cap) {
  LcaSpec A = builtin_algebra(alg);
  return {A, make_rank1(A, alpha_sub, delta_sub, beta_sub),
          make_rank1(A, alpha_q, delta_q, beta_q), cap};
}

std::map<std::string, MPoly> rep_polys(const ExtResult& R, size_t i) {
  REQUIRE(i < R.nontrivial_reps.size());
  return vector_assignment(R.layout, R.nontrivial_reps[i]);
}

bool is_homogeneous(const MPoly& p) {
  if (p.is_zero()) return true;
  int deg = p.degree();
  for (auto& [e, c] : p.terms())
    if (total_degree(e) != deg) return false;
  return true;
}

}  // namespace

TEST_CASE("problem classification") {
  LcaSpec vir = builtin_algebra("vir");
  ExtProblem both{vir, make_trivial(vir, Scalar(0)),
                  make_trivial(vir, Scalar(1)), 3};
  CHECK_THROWS_WITH(ext_type(both),
                    Catch::Matchers::ContainsSubstring("both modules"));
  ExtProblem neg{vir, make_trivial(vir, Scalar(0)),
                 make_rank1(vir, Scalar(0), Scalar(1)), -1};
  CHECK_THROWS_AS(build_constraints(neg), error);
}

TEST_CASE("unknown layout shapes") {
  LcaSpec esv = builtin_algebra("esv");
  UnknownLayout t1 = make_layout(esv, 1, 3, 3);
  REQUIRE(t1.unknowns.size() == 4);
  CHECK(t1.unknowns[0].name == "f");
  CHECK(t1.unknowns[1].name == "g");
  CHECK(t1.unknowns[2].name == "h");
  CHECK(t1.unknowns[3].name == "k");
  CHECK(t1.ncols == 16);  // four unknowns in lambda only, degrees 0..3
  UnknownLayout t2 = make_layout(esv, 2, 3, 3);
  REQUIRE(t2.unknowns.size() == 5);
  CHECK(t2.unknowns[4].name == "a");
  CHECK(t2.ncols == 4 * 10 + 4);
  // descending graded-lex within an unknown
  CHECK(t2.unknowns[0].monos.front() == Exp{3, 0, 0, 0});
  CHECK(t2.unknowns[0].monos.back() == Exp{0, 0, 0, 0});
}

TEST_CASE("row count matches an independent expansion") {
  // single functional equation of the Witt type-1 problem:
  // (gamma+alpha+l+D*m) f(l) - (gamma+alpha+m+D*l) f(m) - (l-m) f(l+m)
  Rat alpha(1, 3), gamma(2), delta(5, 7);
  int D = 3;
  std::map<std::pair<int, int>, std::vector<Rat>> monos;
  auto bump = [&](int a, int b, int i, Rat v) {
    auto& vec = monos[{a, b}];
    if ((int)vec.size() <= i) vec.resize(D + 1, Rat(0));
    vec[i] += v;
  };
  std::vector<std::vector<Rat>> binom(D + 2, std::vector<Rat>(D + 2, Rat(0)));
  for (int n = 0; n <= D + 1; ++n) {
    binom[n][0] = 1;
    for (int k = 1; k <= n; ++k)
      binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : Rat(0));
  }
  for (int i = 0; i <= D; ++i) {
    bump(i, 0, i, gamma + alpha);
    bump(i + 1, 0, i, Rat(1));
    bump(i, 1, i, delta);
    bump(0, i, i, -(gamma + alpha));
    bump(0, i + 1, i, Rat(-1));
    bump(1, i, i, -delta);
    for (int t = 0; t <= i; ++t) {
      bump(t + 1, i - t, i, -binom[i][t]);
      bump(t, i - t + 1, i, binom[i][t]);
    }
  }
  int expected = 0;
  for (auto& [key, vec] : monos)
    for (auto& v : vec)
      if (v != 0) {
        ++expected;
        break;
      }
  ExtProblem P = type1("vir", Scalar(gamma), Scalar(alpha), Scalar(delta),
                       std::nullopt, D);
  LinearSystem sys = build_constraints(P);
  CHECK((int)sys.rows.size() == expected);
}

TEST_CASE("rank-one extension of the trivial module by the Witt module") {
  // gamma = -alpha, Delta = 1: one nontrivial direction l^2 on top of the
  // trivial cocycle alpha+gamma+Delta*l = l
  ExtProblem P = type1("vir", Scalar(0), Scalar(0), Scalar(1), std::nullopt, 4);
  LinearSystem sys = build_constraints(P);
  auto basis = nullspace(sys.rows, sys.layout.ncols);
  CHECK(basis.size() == 2);
  ExtResult R = solve_ext(P);
  CHECK(R.cocycle_dim == 2);
  CHECK(R.coboundary_dim == 1);
  CHECK(R.ext_dim == 1);
  auto rep = rep_polys(R, 0);
  CHECK(rep.at("f") == l.pow(2));

  // away from the classified points the group vanishes
  ExtResult R2 = solve_ext(
      type1("vir", Scalar(0), Scalar(0), Scalar(3), std::nullopt, 6));
  CHECK(R2.ext_dim == 0);
  ExtResult R3 = solve_ext(
      type1("vir", Scalar(1), Scalar(0), Scalar(1), std::nullopt, 6));
  CHECK(R3.ext_dim == 0);
}

TEST_CASE("half-integer weight gives the h-cocycle") {
  ExtResult R = solve_ext(
      type1("sv", Scalar(0), Scalar(0), Scalar(-1, 2), std::nullopt, 5));
  CHECK(R.ext_dim == 1);
  auto rep = rep_polys(R, 0);
  CHECK(rep.size() == 1);
  CHECK(rep.at("h") == MPoly(1));
  // every cocycle has zero g-part
  int gu = R.layout.find_unknown("g");
  for (auto& v : R.cocycle_basis)
    for (auto& [c, val] : v) {
      bool in_g = c >= R.layout.offsets[gu] &&
                  c < R.layout.offsets[gu] +
                          (int)R.layout.unknowns[gu].monos.size();
      CHECK_FALSE(in_g);
    }
}

TEST_CASE("trivial-quotient extensions") {
  // sub = V(alpha=0, Delta=1), quot = C c_0: one class with f = a = const
  ExtResult R =
      solve_ext(type2("vir", Scalar(0), Scalar(1), std::nullopt, Scalar(0), 5));
  CHECK(R.ext_dim == 1);
  auto rep = rep_polys(R, 0);
  CHECK(rep.at("f") == MPoly(1));
  CHECK(rep.at("a") == MPoly(1));
  CHECK(solve_ext(type2("vir", Scalar(0), Scalar(2), std::nullopt, Scalar(0),
                        5))
            .ext_dim == 0);
  CHECK(solve_ext(type2("vir", Scalar(0), Scalar(1), std::nullopt, Scalar(2),
                        5))
            .ext_dim == 0);
  // esv analogue needs beta = 0
  CHECK(solve_ext(type2("esv", Scalar(0), Scalar(1), Scalar(0), Scalar(0), 5))
            .ext_dim == 1);
  CHECK(solve_ext(type2("esv", Scalar(0), Scalar(1), Scalar(1), Scalar(0), 5))
            .ext_dim == 0);
}

TEST_CASE("rank-one by rank-one at weight gap zero") {
  ExtProblem P = type3("vir", Scalar(0), Scalar(3), std::nullopt, Scalar(0),
                       Scalar(3), std::nullopt, 2);
  ExtResult R = solve_ext(P);
  CHECK(R.ext_dim == 2);
  CHECK(rep_polys(R, 0).at("f") == l);
  CHECK(rep_polys(R, 1).at("f") == MPoly(1));
}

TEST_CASE("weight gap seven vanishes") {
  ExtResult R = solve_ext(type3("vir", Scalar(0), Scalar(1), std::nullopt,
                                Scalar(0), Scalar(8), std::nullopt, 9));
  CHECK(R.ext_dim == 0);
}

TEST_CASE("coboundary space of the extended algebra, trivial sub") {
  // alpha+gamma != 0: span of (f, k) = (alpha+gamma+Delta*l, beta)
  LcaSpec esv = builtin_algebra("esv");
  ExtProblem P = type1("esv", Scalar(1), Scalar(1), Scalar(3), Scalar(2), 4);
  auto cob = coboundary_space(P);
  REQUIRE(cob.size() == 1);
  Rref r = rref(cob);
  std::map<std::string, MPoly> expect{
      {"f", MPoly(2) + Scalar(3) * l}, {"k", MPoly(2)}};
  CHECK(r.contains(assignment_vector(make_layout(esv, 1, 4, 4), expect)));
}

TEST_CASE("coboundary generators satisfy the constraints") {
  // exercised by the internal assertion inside solve_ext across types
  for (int cap : {4, 6}) {
    CHECK_NOTHROW(solve_ext(
        type3("esv", Scalar(0), Scalar(2), Scalar(1), Scalar(0), Scalar(3),
              Scalar(1), cap)));
    CHECK_NOTHROW(solve_ext(
        type2("hv", Scalar(0), Scalar(1), Scalar(0), Scalar(0), cap)));
  }
}

TEST_CASE("representatives at aligned alpha are homogeneous") {
  // vir gap 2: rep l^2(2d+l)
  ExtResult R = solve_ext(type3("vir", Scalar(0), Scalar(2), std::nullopt,
                                Scalar(0), Scalar(4), std::nullopt, 6));
  REQUIRE(R.ext_dim == 1);
  auto rep = rep_polys(R, 0);
  for (auto& [name, p] : rep) CHECK(is_homogeneous(p));
  // l^2 (2 dbar + l) is a cocycle, nontrivial, and equivalent to the rep
  SparseVec expected = assignment_vector(
      R.layout, {{"f", Scalar(2) * d * l.pow(2) + l.pow(3)}});
  Rref coc = rref(R.cocycle_basis);
  CHECK(coc.contains(expected));
  Rref cob = rref(R.coboundary_basis);
  CHECK_FALSE(cob.contains(expected));
  Rref cob_plus_rep = cob;
  cob_plus_rep.add(R.nontrivial_reps[0]);
  CHECK(cob_plus_rep.contains(expected));
}

TEST_CASE("alpha shift invariance") {
  ExtProblem P1 =
      type1("vir", Scalar(0), Scalar(0), Scalar(2), std::nullopt, 5);
  CHECK(alpha_shift_check(P1, Scalar(0)));
  CHECK(alpha_shift_check(P1, Scalar(5)));
  ExtProblem P3 = type3("esv", Scalar(0), Scalar(2), Scalar(0), Scalar(0),
                        Scalar(4), Scalar(0), 6);
  CHECK(alpha_shift_check(P3, Scalar(7, 3)));
  ExtProblem P2 =
      type2("vir", Scalar(0), Scalar(1), std::nullopt, Scalar(0), 5);
  CHECK(alpha_shift_check(P2, Scalar(-2)));
}

TEST_CASE("results serialize deterministically") {
  ExtProblem P = type3("sv", Scalar(0), Scalar(1), std::nullopt, Scalar(0),
                       Scalar(3, 2), std::nullopt, 5);
  ExtResult A = solve_ext(P), B = solve_ext(P);
  std::string ja = ext_result_json(P, A).dump(2);
  std::string jb = ext_result_json(P, B).dump(2);
  CHECK(ja == jb);
  auto parsed = nlohmann::json::parse(ja);
  CHECK(parsed["problem"]["algebra"] == "sv");
  CHECK(parsed["degree_cap"] == 5);
  CHECK(parsed["ext_dim"] == A.ext_dim);
  CHECK(parsed["cocycle_dim"] == A.cocycle_dim);
  CHECK(parsed["coboundary_dim"] == A.coboundary_dim);
  CHECK(parsed["representatives"].size() == (size_t)A.ext_dim);
}

TEST_CASE("half-integer gap in the extended algebra") {
  // sub V(0, bbar, Dbar), quot V(0, bbar-1, D), D - Dbar = -1/2: rep h = 1
  ExtResult R = solve_ext(type3("esv", Scalar(0), Scalar(1), Scalar(1),
                                Scalar(0), Scalar(1, 2), Scalar(0), 6));
  CHECK(R.ext_dim == 1);
  CHECK(rep_polys(R, 0).at("h") == MPoly(1));
}

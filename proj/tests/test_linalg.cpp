#include <catch2/catch.hpp>

#include <random>

#include "kfib/int_matrix.hpp"
#include "kfib/rational.hpp"
#include "kfib/smith.hpp"
#include "oracle_helpers.hpp"

using namespace kfib;

namespace {

IntMatrix mat(std::size_t r, std::size_t c, std::vector<long> vals) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Int(vals[i * c + j]);
  return m;
}

void check_decomposition(const IntMatrix& a) {
  SmithDecomposition d = smith_normal_form(a);
  REQUIRE(d.u * a * d.v == d.s);
  REQUIRE(abs_int(d.u.det()) == 1);
  REQUIRE(abs_int(d.v.det()) == 1);
  // diagonal, nonnegative, divisibility chain with zeros trailing
  for (std::size_t i = 0; i < d.s.rows(); ++i)
    for (std::size_t j = 0; j < d.s.cols(); ++j)
      if (i != j) REQUIRE(d.s.at(i, j) == 0);
  for (std::size_t i = 0; i + 1 < d.invariant_factors.size(); ++i) {
    const Int& cur = d.invariant_factors[i];
    const Int& nxt = d.invariant_factors[i + 1];
    REQUIRE(cur >= 0);
    if (cur == 0) REQUIRE(nxt == 0);
    else REQUIRE(divides(cur, nxt));
  }
}

}  // namespace

TEST_CASE("smith normal form on pinned examples") {
  SECTION("identity") {
    auto d = smith_normal_form(IntMatrix::identity(3));
    REQUIRE(d.invariant_factors == std::vector<Int>{1, 1, 1});
  }
  SECTION("diag(2,3) has factors 1,6") {
    auto a = mat(2, 2, {2, 0, 0, 3});
    auto d = smith_normal_form(a);
    REQUIRE(d.invariant_factors == std::vector<Int>{1, 6});
    REQUIRE(d.u * a * d.v == d.s);
  }
  SECTION("[[2,4],[6,8]] has factors 2,4") {
    auto a = mat(2, 2, {2, 4, 6, 8});
    auto d = smith_normal_form(a);
    REQUIRE(d.invariant_factors == std::vector<Int>{2, 4});
    check_decomposition(a);
    // |det| = 8 preserved as the product of the factors
    REQUIRE(d.invariant_factors[0] * d.invariant_factors[1] == abs_int(a.det()));
  }
  SECTION("empty shapes are legal") {
    auto d = smith_normal_form(IntMatrix(0, 3));
    REQUIRE(d.invariant_factors.empty());
    REQUIRE(integer_kernel(IntMatrix(0, 3)) == IntMatrix::identity(3));
  }
}

TEST_CASE("smith properties on random matrices") {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> dim(1, 5), val(-9, 9);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t m = dim(rng), n = dim(rng);
    IntMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a.at(i, j) = Int(val(rng));
    check_decomposition(a);
    if (m == n) {
      auto d = smith_normal_form(a);
      Int prod(1);
      for (const Int& f : d.invariant_factors) if (f != 0) prod *= f;
      if (d.rank() == n) REQUIRE(prod == abs_int(a.det()));
      else REQUIRE(a.det() == 0);
    }
  }
}

TEST_CASE("smith is deterministic") {
  auto a = mat(3, 3, {4, -2, 6, 0, 8, 12, 2, 2, 2});
  auto d1 = smith_normal_form(a);
  auto d2 = smith_normal_form(a);
  REQUIRE(d1.u == d2.u);
  REQUIRE(d1.v == d2.v);
  REQUIRE(d1.s == d2.s);
}

TEST_CASE("integer_solve pinned examples") {
  SECTION("2x = 4") {
    auto sol = integer_solve(mat(1, 1, {2}), {Int(4)});
    REQUIRE(sol);
    REQUIRE(sol->particular == IntVec{Int(2)});
    REQUIRE(sol->kernel.rows() == 0);
  }
  SECTION("2x = 3 has no integer solution") {
    REQUIRE_FALSE(integer_solve(mat(1, 1, {2}), {Int(3)}));
    auto rat = rational_solve(mat(1, 1, {2}), {Int(3)});
    REQUIRE(rat);
    REQUIRE((*rat)[0] == Rat(3, 2));
  }
  SECTION("nilpotent example with kernel") {
    auto sol = integer_solve(mat(2, 2, {0, 1, 0, 0}), {Int(1), Int(0)});
    REQUIRE(sol);
    REQUIRE(sol->particular == IntVec{Int(0), Int(1)});
    REQUIRE(sol->kernel.rows() == 1);
    REQUIRE(sol->kernel.row(0) == IntVec{Int(1), Int(0)});
  }
}

TEST_CASE("solvers against planted decompositions") {
  std::mt19937 rng(462531);
  std::uniform_int_distribution<int> bval(-6, 6);
  int integral_absent_with_rational = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = oracles::plant_instance(rng, 4, 4);
    IntVec b(4);
    for (auto& x : b) x = Int(bval(rng));
    auto zsol = integer_solve(inst.a, b);
    auto qsol = rational_solve(inst.a, b);
    REQUIRE(zsol.has_value() == inst.solvable_z(b));
    REQUIRE(qsol.has_value() == inst.solvable_q(b));
    if (zsol) REQUIRE(inst.a * zsol->particular == b);
    if (qsol) {
      RatMatrix aq = RatMatrix::from_int(inst.a);
      for (std::size_t i = 0; i < 4; ++i) {
        Rat acc(0);
        for (std::size_t j = 0; j < 4; ++j) acc += aq.at(i, j) * (*qsol)[j];
        REQUIRE(acc == Rat(b[i]));
      }
    }
    if (!zsol && qsol) {
      // a rational-only solution must use a genuine denominator
      Int l(1);
      for (const Rat& x : *qsol) l = lcm_int(l, Int(x.get_den()));
      ++integral_absent_with_rational;
      REQUIRE(l > 1);
    }
    if (zsol)
      for (std::size_t r = 0; r < zsol->kernel.rows(); ++r)
        REQUIRE(is_zero_vec(inst.a * zsol->kernel.row(r)));
  }
  REQUIRE(integral_absent_with_rational > 0);  // the interesting case occurred
}

TEST_CASE("integer_solve agrees with exhaustive search on tiny instances") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> val(-3, 3), bval(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix a(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) a.at(i, j) = Int(val(rng));
    IntVec b{Int(bval(rng)), Int(bval(rng))};
    bool exhaustive = false;
    for (int x = -30; x <= 30 && !exhaustive; ++x)
      for (int y = -30; y <= 30 && !exhaustive; ++y)
        if (a * IntVec{Int(x), Int(y)} == b) exhaustive = true;
    auto sol = integer_solve(a, b);
    if (exhaustive) REQUIRE(sol.has_value());
    if (sol) REQUIRE(a * sol->particular == b);
  }
}

TEST_CASE("rational kernel basics") {
  REQUIRE(rational_kernel(IntMatrix::identity(3)).empty());
  auto k = rational_kernel(mat(1, 2, {1, 1}));
  REQUIRE(k.size() == 1);
  REQUIRE(k[0] == IntVec{Int(1), Int(-1)});
}

TEST_CASE("hermite form is canonical for equal lattices") {
  // same lattice, two generating sets
  auto h1 = hermite_rows(mat(2, 3, {1, 2, 3, 0, 4, 5}));
  auto h2 = hermite_rows(mat(3, 3, {1, 6, 8, 1, 2, 3, 0, 4, 5}));
  REQUIRE(h1 == h2);
  // pivots positive, reduced above
  auto h3 = hermite_rows(mat(2, 2, {-2, 0, 3, 3}));
  REQUIRE(h3.at(0, 0) > 0);
  for (std::size_t i = 0; i < h3.rows(); ++i) {
    std::size_t p = 0;
    while (p < h3.cols() && h3.at(i, p) == 0) ++p;
    for (std::size_t r = 0; r < i; ++r) {
      REQUIRE(h3.at(r, p) >= 0);
      REQUIRE(h3.at(r, p) < h3.at(i, p));
    }
  }
}

TEST_CASE("pivot growth stays exact on large entries") {
  std::mt19937 rng(160914);
  std::uniform_int_distribution<long> val(-1000000, 1000000);
  IntMatrix a(12, 12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) a.at(i, j) = Int(val(rng));
  auto d = smith_normal_form(a);
  REQUIRE(d.u * a * d.v == d.s);
  REQUIRE(abs_int(d.u.det()) == 1);
  REQUIRE(abs_int(d.v.det()) == 1);
  Int prod(1);
  bool singular = false;
  for (const Int& f : d.invariant_factors) {
    if (f == 0) singular = true;
    else prod *= f;
  }
  if (!singular) REQUIRE(prod == abs_int(a.det()));
}

TEST_CASE("hermite form ignores the choice of generating rows") {
  std::mt19937 rng(321987);
  std::uniform_int_distribution<int> val(-5, 5);
  for (int t = 0; t < 30; ++t) {
    IntMatrix a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a.at(i, j) = Int(val(rng));
    IntMatrix l = oracles::random_unimodular(rng, 4);
    REQUIRE(hermite_rows(a) == hermite_rows(l * a));
  }
}

TEST_CASE("matrix text format round trip") {
  auto a = mat(2, 3, {1, -2, 3, 0, 5, -6});
  REQUIRE(IntMatrix::parse(a.to_text()) == a);
  REQUIRE_THROWS_AS(IntMatrix::parse("2 2\n1 2 3"), std::invalid_argument);
  REQUIRE_THROWS_AS(IntMatrix::parse("x"), std::invalid_argument);
}

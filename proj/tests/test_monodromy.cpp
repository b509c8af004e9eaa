#include <catch2/catch.hpp>

#include <random>

#include "kfib/monodromy.hpp"
#include "kfib/rational.hpp"
#include "oracle_helpers.hpp"

using namespace kfib;

namespace {

PiSpec free_spec(std::size_t g) { return PiSpec(PiKind::free_group, g); }
PiSpec surf_spec(std::size_t g) { return PiSpec(PiKind::surface_group, g); }

PiModule trivial_module(const PiSpec& spec, std::size_t d) {
  std::vector<IntMatrix> acts(spec.generator_count(), IntMatrix::identity(d));
  return validated_module(spec, d, acts);
}

// Brute-force degeneracy test for a single u: one stacked rational solve per
// character.
bool brute_force_degenerate(const PiModule& m, std::size_t b, const IntVec& u) {
  std::vector<IntMatrix> blocks;
  for (const auto& a : m.actions)
    blocks.push_back(a - IntMatrix::identity(m.dim));
  IntMatrix stack = IntMatrix::vstack(blocks, m.dim);
  for (std::size_t j = 0; j < b; ++j) {
    IntVec rhs(stack.rows(), Int(0));
    for (std::size_t a = 0; a < m.dim; ++a) rhs[j * m.dim + a] = u[a];
    if (!rational_solve(stack, rhs)) return false;
  }
  return true;
}

bool in_rational_span(const IntMatrix& rows, const IntVec& v) {
  if (rows.rows() == 0) return is_zero_vec(v);
  return rational_solve(rows.transpose(), v).has_value();
}

// Conjugate every action by the same unimodular matrix.
PiModule conjugated(const PiSpec& spec, const PiModule& m, const IntMatrix& t) {
  auto tinv = unimodular_inverse(t);
  REQUIRE(tinv);
  std::vector<IntMatrix> acts;
  for (const auto& a : m.actions) acts.push_back(t * a * *tinv);
  return validated_module(spec, m.dim, acts);
}

PiModule shear_module(const PiSpec& spec) {
  // A1 = [[1,1],[0,1]], everything else identity
  std::vector<IntMatrix> acts(spec.generator_count(), IntMatrix::identity(2));
  acts[0].at(0, 1) = 1;
  return validated_module(spec, 2, acts);
}

}  // namespace

TEST_CASE("module validation") {
  REQUIRE_THROWS_AS(validated_module(free_spec(2), 2,
                                     {IntMatrix::identity(2)}),
                    std::invalid_argument);  // wrong generator count
  IntMatrix notuni(2, 2);
  notuni.at(0, 0) = 2;
  notuni.at(1, 1) = 1;
  REQUIRE_THROWS_AS(
      validated_module(free_spec(2), 2, {notuni, IntMatrix::identity(2)}),
      std::invalid_argument);
  // surface kind: relator must act as identity; two generic shears fail
  IntMatrix s1 = IntMatrix::identity(2), s2 = IntMatrix::identity(2);
  s1.at(0, 1) = 1;
  s2.at(1, 0) = 1;
  REQUIRE_THROWS_AS(validated_module(surf_spec(1), 2, {s1, s2}),
                    std::invalid_argument);
  // commuting shears pass
  REQUIRE_NOTHROW(validated_module(surf_spec(1), 2, {s1, s1}));
}

TEST_CASE("invariants") {
  SECTION("trivial action fixes everything") {
    auto m = trivial_module(free_spec(2), 3);
    REQUIRE(invariants(free_spec(2), m) == IntMatrix::identity(3));
  }
  SECTION("shear fixes its axis") {
    auto m = shear_module(free_spec(2));
    IntMatrix expect(1, 2);
    expect.at(0, 0) = 1;
    REQUIRE(invariants(free_spec(2), m) == expect);
  }
  SECTION("minus identity fixes nothing") {
    IntMatrix minus(1, 1);
    minus.at(0, 0) = -1;
    auto m = validated_module(free_spec(1), 1, {minus});
    REQUIRE(invariants(free_spec(1), m).rows() == 0);
  }
}

TEST_CASE("degenerate invariants pinned examples") {
  SECTION("trivial action: D = 0") {
    auto m = trivial_module(free_spec(2), 3);
    REQUIRE(degenerate_invariants(free_spec(2), m).rows() == 0);
  }
  SECTION("built-in bad module: D contains u") {
    auto [m, w] = build_bad_module(free_spec(2));
    auto d = degenerate_invariants(free_spec(2), m);
    REQUIRE(d.rows() >= 1);
    REQUIRE(in_rational_span(d, w.u));
  }
  SECTION("single shear with two characters: D = 0") {
    auto m = shear_module(free_spec(2));
    REQUIRE(degenerate_invariants(free_spec(2), m).rows() == 0);
  }
}

TEST_CASE("bad module round trips") {
  for (auto spec : {free_spec(1), free_spec(2), free_spec(3), surf_spec(1),
                    surf_spec(2), surf_spec(3)}) {
    auto [m, built] = build_bad_module(spec);
    REQUIRE(m.dim == spec.character_count() + 1);
    REQUIRE(verify_witness(m, built));
    auto found = extract_bad_submodule(spec, m);
    REQUIRE(found);
    REQUIRE(verify_witness(m, *found));
    // u recovered up to sign/scale: same rational line
    IntMatrix line(1, m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) line.at(0, i) = built.u[i];
    REQUIRE(in_rational_span(line, found->u));
  }
}

TEST_CASE("witness u is scaled to restore integral solvability") {
  // (A_1 - I) v = u needs v[1] = 1/2 for the primitive u, so the witness
  // must carry u = 2 e_0
  auto spec = free_spec(2);
  IntMatrix a1 = IntMatrix::identity(3), a2 = IntMatrix::identity(3);
  a1.at(0, 1) = 2;
  a2.at(0, 2) = 1;
  auto m = validated_module(spec, 3, {a1, a2});
  auto deg = degenerate_invariants(spec, m);
  REQUIRE(deg.rows() == 1);
  REQUIRE(deg.row(0) == IntVec{Int(1), Int(0), Int(0)});  // saturated lattice
  auto w = extract_bad_submodule(spec, m);
  REQUIRE(w);
  REQUIRE(w->u == IntVec{Int(2), Int(0), Int(0)});
  REQUIRE(verify_witness(m, *w));
  REQUIRE(kahler_verdict(spec, m).obstructed);
}

TEST_CASE("bad module inside a direct sum is still found") {
  auto spec = free_spec(2);
  auto [bad, bw] = build_bad_module(spec);
  std::size_t d = bad.dim + 2;
  std::vector<IntMatrix> acts;
  for (const auto& a : bad.actions) {
    IntMatrix big = IntMatrix::identity(d);
    for (std::size_t i = 0; i < bad.dim; ++i)
      for (std::size_t j = 0; j < bad.dim; ++j) big.at(i, j) = a.at(i, j);
    acts.push_back(big);  // (bad) + (trivial rank-2)
  }
  auto m = validated_module(spec, d, acts);
  auto found = extract_bad_submodule(spec, m);
  REQUIRE(found);
  REQUIRE(verify_witness(m, *found));
  // witness u lies inside the first summand
  for (std::size_t i = bad.dim; i < d; ++i) REQUIRE(found->u[i] == 0);
}

TEST_CASE("invariant splitting pinned examples") {
  SECTION("block diagonal trivial + rotation") {
    IntMatrix rot(3, 3);
    rot.at(0, 0) = 1;            // trivial 1-dim block
    rot.at(1, 2) = -1;           // [[0,-1],[1,0]] block
    rot.at(2, 1) = 1;
    auto m = validated_module(free_spec(1), 3, {rot});
    auto p = find_invariant_splitting(free_spec(1), m);
    REQUIRE(p);
    RatMatrix expect(3, 3);
    expect.at(0, 0) = 1;
    REQUIRE(*p == expect);
  }
  SECTION("shear admits no splitting") {
    auto m = shear_module(free_spec(2));
    REQUIRE_FALSE(find_invariant_splitting(free_spec(2), m));
  }
  SECTION("trivial action splits by the identity") {
    auto m = trivial_module(free_spec(2), 2);
    auto p = find_invariant_splitting(free_spec(2), m);
    REQUIRE(p);
    REQUIRE(*p == RatMatrix::identity(2));
  }
  SECTION("no invariants: zero projection") {
    IntMatrix minus(1, 1);
    minus.at(0, 0) = -1;
    auto m = validated_module(free_spec(1), 1, {minus});
    auto p = find_invariant_splitting(free_spec(1), m);
    REQUIRE(p);
    REQUIRE(p->is_zero());
  }
}

TEST_CASE("splitting implies zero degeneracy on random modules") {
  std::mt19937 rng(7459);
  std::uniform_int_distribution<int> ddim(2, 6), dsplit(0, 2);
  auto spec = free_spec(2);
  int splits_found = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t d = ddim(rng);
    std::vector<IntMatrix> acts;
    if (t % 2 == 0) {
      // block diagonal: identity block + fixed-point-free block, conjugated
      std::size_t s = 1 + (d > 2 ? dsplit(rng) % (d - 1) : 0);
      std::size_t w = d - s;
      IntMatrix t_conj = oracles::random_unimodular(rng, d);
      auto t_inv = unimodular_inverse(t_conj);
      REQUIRE(t_inv);
      // W block acts by -I on the first generator: no nonzero fixed vectors
      for (std::size_t gidx = 0; gidx < 2; ++gidx) {
        IntMatrix a = IntMatrix::identity(d);
        if (w > 0) {
          IntMatrix wblk = gidx == 0 ? IntMatrix::identity(w)
                                     : oracles::random_unimodular(rng, w, 4);
          if (gidx == 0)
            for (std::size_t i = 0; i < w; ++i) wblk.at(i, i) = -1;
          for (std::size_t i = 0; i < w; ++i)
            for (std::size_t j = 0; j < w; ++j)
              a.at(s + i, s + j) = wblk.at(i, j);
        }
        acts.push_back(t_conj * a * *t_inv);
      }
    } else {
      for (std::size_t gidx = 0; gidx < 2; ++gidx)
        acts.push_back(oracles::random_unipotent(rng, d));
    }
    auto m = validated_module(spec, d, acts);
    auto split = find_invariant_splitting(spec, m);
    auto deg = degenerate_invariants(spec, m);
    if (split) {
      ++splits_found;
      REQUIRE(deg.rows() == 0);
    }
    if (t % 2 == 0) REQUIRE(split.has_value());  // exists by construction
  }
  REQUIRE(splits_found >= 50);
}

namespace {

// Direct feasibility oracle for the splitting: solve for the full d x d
// projection P with P A_i = A_i P, P b = b on the invariant basis, and
// rows annihilating span(B) also annihilating P (image containment).
bool splitting_exists_direct(const PiSpec& spec, const PiModule& m) {
  IntMatrix inv = invariants(spec, m);
  std::size_t d = m.dim, s = inv.rows();
  if (s == 0) return true;  // zero projection
  std::vector<IntVec> ann = rational_kernel(inv);  // y with inv y = 0
  std::size_t rows = spec.generator_count() * d * d + s * d + ann.size() * d;
  IntMatrix sys(rows, d * d);
  IntVec rhs(rows, Int(0));
  std::size_t r = 0;
  for (std::size_t i = 0; i < spec.generator_count(); ++i)
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q, ++r)
        for (std::size_t k = 0; k < d; ++k) {
          // (P A_i - A_i P)[p][q] = 0
          sys.at(r, p * d + k) += m.actions[i].at(k, q);
          sys.at(r, k * d + q) -= m.actions[i].at(p, k);
        }
  for (std::size_t t = 0; t < s; ++t)
    for (std::size_t p = 0; p < d; ++p, ++r) {
      for (std::size_t k = 0; k < d; ++k) sys.at(r, p * d + k) = inv.at(t, k);
      rhs[r] = inv.at(t, p);  // P b_t = b_t
    }
  for (std::size_t a = 0; a < ann.size(); ++a)
    for (std::size_t q = 0; q < d; ++q, ++r)
      for (std::size_t k = 0; k < d; ++k)
        sys.at(r, k * d + q) = ann[a][k];  // y^T P = 0: image inside span
  return rational_solve(sys, rhs).has_value();
}

}  // namespace

TEST_CASE("splitting feasibility agrees with the direct formulation") {
  std::mt19937 rng(8212);
  std::uniform_int_distribution<int> ddim(1, 4), dg(1, 3);
  for (int t = 0; t < 60; ++t) {
    std::size_t g = dg(rng);
    PiSpec spec(PiKind::free_group, g);
    std::size_t d = ddim(rng);
    std::vector<IntMatrix> acts;
    for (std::size_t i = 0; i < g; ++i)
      acts.push_back(t % 3 == 0 ? oracles::random_unimodular(rng, d, 4)
                                : oracles::random_unipotent(rng, d));
    auto m = validated_module(spec, d, acts);
    auto impl = find_invariant_splitting(spec, m);
    REQUIRE(impl.has_value() == splitting_exists_direct(spec, m));
  }
}

TEST_CASE("degenerate invariants agree with the brute-force oracle") {
  std::mt19937 rng(99371);
  std::uniform_int_distribution<int> ddim(1, 5), dg(1, 3), dcoef(-2, 2);
  for (int t = 0; t < 100; ++t) {
    std::size_t g = dg(rng);
    auto spec = free_spec(g);
    std::size_t d = ddim(rng);
    std::vector<IntMatrix> acts;
    for (std::size_t i = 0; i < g; ++i)
      acts.push_back(oracles::random_unipotent(rng, d));
    auto m = validated_module(spec, d, acts);
    IntMatrix inv = invariants(spec, m);
    IntMatrix deg = degenerate_invariants(spec, m);
    // spanning set: the invariant basis plus a few random combinations
    std::vector<IntVec> spanning;
    for (std::size_t r = 0; r < inv.rows(); ++r) spanning.push_back(inv.row(r));
    for (int extra = 0; extra < 3 && inv.rows() > 0; ++extra) {
      IntVec u(d, Int(0));
      for (std::size_t r = 0; r < inv.rows(); ++r) {
        Int c(dcoef(rng));
        for (std::size_t a = 0; a < d; ++a) u[a] += c * inv.at(r, a);
      }
      spanning.push_back(u);
    }
    for (const IntVec& u : spanning) {
      bool brute = brute_force_degenerate(m, spec.character_count(), u);
      bool impl = in_rational_span(deg, u);
      if (is_zero_vec(u)) continue;  // zero is trivially in both
      REQUIRE(brute == impl);
    }
  }
}

TEST_CASE("degenerate lattice is closed under addition and negation") {
  std::mt19937 rng(5077);
  std::uniform_int_distribution<int> pick(0, 4);
  auto spec = free_spec(2);
  auto [m, w] = build_bad_module(spec);
  auto deg = degenerate_invariants(spec, m);
  REQUIRE(deg.rows() >= 1);
  for (int t = 0; t < 20; ++t) {
    IntVec a = deg.row(pick(rng) % deg.rows());
    IntVec b = deg.row(pick(rng) % deg.rows());
    REQUIRE(in_rational_span(deg, a + b));
    REQUIRE(in_rational_span(deg, Int(-1) * a));
  }
}

TEST_CASE("verdict") {
  SECTION("built-in bad module is obstructed") {
    for (auto spec : {surf_spec(1), surf_spec(2), free_spec(2), free_spec(3)}) {
      auto [m, w] = build_bad_module(spec);
      auto v = kahler_verdict(spec, m);
      REQUIRE(v.obstructed);
      REQUIRE(v.witness);
      REQUIRE_FALSE(v.splitting);
      if (spec.kind == PiKind::free_group) {
        bool has_reading_note = false;
        for (const auto& n : v.notes)
          if (n.find("quasi-projective") != std::string::npos)
            has_reading_note = true;
        REQUIRE(has_reading_note);
      }
    }
  }
  SECTION("trivial module is split, not obstructed") {
    auto spec = surf_spec(2);
    auto m = trivial_module(spec, 2);
    auto v = kahler_verdict(spec, m);
    REQUIRE_FALSE(v.obstructed);
    REQUIRE(v.splitting);
    REQUIRE(*v.splitting == RatMatrix::identity(2));
  }
  SECTION("shear: neither obstructed nor split") {
    auto spec = free_spec(2);
    auto m = shear_module(spec);
    auto v = kahler_verdict(spec, m);
    REQUIRE_FALSE(v.obstructed);
    REQUIRE_FALSE(v.splitting);
    REQUIRE(v.invariant_rank == 1);
    REQUIRE(v.degenerate_rank == 0);
  }
}

TEST_CASE("verdict is invariant under module isomorphism") {
  std::mt19937 rng(31337);
  for (auto spec : {free_spec(2), surf_spec(1)}) {
    auto [m, w] = build_bad_module(spec);
    auto base = kahler_verdict(spec, m);
    for (int t = 0; t < 5; ++t) {
      auto conj = conjugated(spec, m, oracles::random_unimodular(rng, m.dim));
      auto v = kahler_verdict(spec, conj);
      REQUIRE(v.invariant_rank == base.invariant_rank);
      REQUIRE(v.degenerate_rank == base.degenerate_rank);
      REQUIRE(v.obstructed == base.obstructed);
    }
  }
  // also a non-obstructed example
  auto spec = free_spec(2);
  auto m = shear_module(spec);
  auto base = kahler_verdict(spec, m);
  for (int t = 0; t < 5; ++t) {
    auto conj = conjugated(spec, m, oracles::random_unimodular(rng, 2));
    auto v = kahler_verdict(spec, conj);
    REQUIRE(v.invariant_rank == base.invariant_rank);
    REQUIRE(v.degenerate_rank == base.degenerate_rank);
    REQUIRE(v.obstructed == base.obstructed);
  }
}

TEST_CASE("module file format round trip") {
  auto [m, w] = build_bad_module(surf_spec(1));
  auto parsed = parse_module(module_to_text(m));
  REQUIRE(parsed.dim == m.dim);
  REQUIRE(parsed.actions == m.actions);
  REQUIRE_THROWS_AS(parse_module("dim 0\n"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_module("dim 2\ngen b\n1 0\n0 1\n"),
                    std::invalid_argument);
}

TEST_CASE("pi spec parsing") {
  auto s = parse_pi_spec("surface:2");
  REQUIRE(s.kind == PiKind::surface_group);
  REQUIRE(s.g == 2);
  auto f = parse_pi_spec("free:3");
  REQUIRE(f.kind == PiKind::free_group);
  REQUIRE(f.character_count() == 3);
  REQUIRE_THROWS_AS(parse_pi_spec("torus:1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_pi_spec("free:0"), std::invalid_argument);
}

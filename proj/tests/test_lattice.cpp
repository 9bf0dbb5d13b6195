#include <catch_amalgamated.hpp>

#include <random>

#include "qfkit/lattice.hpp"

using namespace qfkit;

namespace {

IMat diag2(const Int& a, const Int& b) { return IMat{{a, Int(0)}, {Int(0), b}}; }

IMat random_unimodular(std::size_t n, std::mt19937_64& rng, int ops = 8) {
  IMat u = IMat::identity(n);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int t = 0; t < ops; ++t) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Int c(coef(rng));
    for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
  }
  return u;
}

}  // namespace

TEST_CASE("make_lattice validates") {
  REQUIRE(make_lattice(diag2(1, 11)).disc() == 11);
  REQUIRE(make_lattice(IMat{{Int(1)}}).rank() == 1);
  REQUIRE(make_lattice(IMat{{Int(2), Int(1)}, {Int(1), Int(1)}}).disc() == 1);

  REQUIRE_THROWS_AS(make_lattice(IMat{{Int(1), Int(2)}, {Int(3), Int(1)}}), error);
  REQUIRE_THROWS_AS(make_lattice(IMat{{Int(-1)}}), error);
  REQUIRE_THROWS_AS(make_lattice(IMat{{Int(1), Int(3)}, {Int(3), Int(1)}}), error);
}

TEST_CASE("discriminant examples") {
  REQUIRE(discriminant(make_lattice(diag2(1, 11))) == 11);
  REQUIRE(discriminant(make_lattice(IMat::identity(4))) == 1);
  REQUIRE(discriminant(make_lattice(IMat{{Int(2), Int(1)}, {Int(1), Int(2)}})) == 3);
}

TEST_CASE("scale and norm ideals") {
  Lattice a = make_lattice(diag2(2, 6));
  REQUIRE(scale_ideal(a) == 2);
  REQUIRE(norm_ideal(a) == 2);

  Lattice hex = make_lattice(IMat{{Int(2), Int(1)}, {Int(1), Int(2)}});
  REQUIRE(scale_ideal(hex) == 1);
  REQUIRE(norm_ideal(hex) == 2);

  Lattice i2 = make_lattice(diag2(1, 1));
  REQUIRE(scale_ideal(i2) == 1);
  REQUIRE(norm_ideal(i2) == 1);
}

TEST_CASE("rescale") {
  Lattice a = make_lattice(diag2(18, 6));
  REQUIRE(rescale(a, Rat(1, 3)).gram() == diag2(6, 2));
  REQUIRE(rescale(a, Rat(1)).gram() == a.gram());
  REQUIRE_THROWS_AS(rescale(make_lattice(diag2(2, 6)), Rat(1, 4)), error);
}

TEST_CASE("normalize") {
  auto [n1, r1] = normalize(make_lattice(diag2(2, 6)));
  REQUIRE(r1 == 1);
  REQUIRE(n1.gram() == diag2(2, 6));

  auto [n2, r2] = normalize(make_lattice(diag2(6, 18)));
  REQUIRE(r2 == Rat(1, 3));
  REQUIRE(n2.gram() == diag2(2, 6));

  auto [n3, r3] = normalize(make_lattice(diag2(1, 11)));
  REQUIRE(r3 == 2);
  REQUIRE(n3.gram() == diag2(2, 22));

  // idempotent on its own output
  auto [n4, r4] = normalize(n3);
  REQUIRE(r4 == 1);
  REQUIRE(n4.gram() == n3.gram());
}

TEST_CASE("orthogonal sum") {
  Lattice a = make_lattice(IMat{{Int(1)}});
  Lattice b = make_lattice(IMat{{Int(11)}});
  REQUIRE(orthogonal_sum(a, b).gram() == diag2(1, 11));
  REQUIRE(orthogonal_sum(a, Lattice::empty()).gram() == a.gram());

  Lattice hex = make_lattice(IMat{{Int(2), Int(1)}, {Int(1), Int(2)}});
  REQUIRE(orthogonal_sum(hex, hex).disc() == 9);
}

TEST_CASE("primitive sublattices") {
  Lattice i2 = make_lattice(diag2(1, 1));
  IMat c1(1, 2);
  c1(0, 0) = 2;
  REQUIRE_FALSE(is_primitive_sublattice(SublatticeEmbedding(i2, c1)));
  IMat c2(1, 2);
  c2(0, 0) = 1;
  REQUIRE(is_primitive_sublattice(SublatticeEmbedding(i2, c2)));

  Lattice i3 = make_lattice(IMat::identity(3));
  IMat c3(2, 3);
  c3(0, 0) = 1;
  c3(0, 1) = 1;
  c3(1, 1) = 3;
  REQUIRE_FALSE(is_primitive_sublattice(SublatticeEmbedding(i3, c3)));
}

TEST_CASE("saturate") {
  Lattice i2 = make_lattice(diag2(1, 1));
  IMat c(1, 2);
  c(0, 0) = 2;
  auto sat = saturate(SublatticeEmbedding(i2, c));
  REQUIRE(sat.coords == IMat{{Int(1), Int(0)}});
  REQUIRE(sat.sub_gram()(0, 0) == 1);

  // idempotence
  auto sat2 = saturate(sat);
  REQUIRE(sat2.coords == sat.coords);

  Lattice d13 = make_lattice(diag2(1, 3));
  IMat c2(1, 2);
  c2(0, 0) = 2;
  c2(0, 1) = 2;
  auto sat3 = saturate(SublatticeEmbedding(d13, c2));
  REQUIRE(sat3.coords == IMat{{Int(1), Int(1)}});
  REQUIRE(sat3.sub_gram()(0, 0) == 4);
  REQUIRE(is_primitive_sublattice(sat3));
}

TEST_CASE("orthogonal complement") {
  Lattice d = make_lattice(diag2(1, 11));
  IMat e1(1, 2);
  e1(0, 0) = 1;
  auto [comp, a] = orthogonal_complement(SublatticeEmbedding(d, e1));
  REQUIRE(comp.sub_rank() == 1);
  REQUIRE(comp.sub_gram()(0, 0) == 11);
  REQUIRE(a.has_value());
  REQUIRE(*a == 11);

  auto [comp2, a2] = orthogonal_complement(identity_embedding(d));
  REQUIRE(comp2.sub_rank() == 0);
  REQUIRE_FALSE(a2.has_value());

  Lattice i2 = make_lattice(diag2(1, 1));
  IMat v(1, 2);
  v(0, 0) = 1;
  v(0, 1) = 1;
  auto [comp3, a3] = orthogonal_complement(SublatticeEmbedding(i2, v));
  REQUIRE(comp3.sub_gram()(0, 0) == 2);
  REQUIRE(*a3 == 2);
}

TEST_CASE("invariants under unimodular basis change") {
  std::mt19937_64 rng(12345);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 2 + (t % 3);
    IMat b(n, n);
    std::uniform_int_distribution<int> entry(-2, 2);
    do {
      for (auto& x : b.a) x = entry(rng);
    } while (det(b) == 0);
    IMat g = b * b.transposed();
    Lattice l = make_lattice(g);
    IMat u = random_unimodular(n, rng);
    Lattice conj = make_lattice(u * g * u.transposed());
    REQUIRE(discriminant(conj) == discriminant(l));
    REQUIRE(scale_ideal(conj) == scale_ideal(l));
    REQUIRE(norm_ideal(conj) == norm_ideal(l));
  }
}

TEST_CASE("saturation always yields primitive sublattices") {
  std::mt19937_64 rng(999);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int t = 0; t < 40; ++t) {
    std::size_t m = 3, n = 2;
    IMat b(m, m);
    do {
      for (auto& x : b.a) x = entry(rng);
    } while (det(b) == 0);
    Lattice l = make_lattice(b * b.transposed());
    IMat c(n, m);
    do {
      for (auto& x : c.a) x = entry(rng);
    } while (rank_int(c) != n);
    auto sat = saturate(SublatticeEmbedding(l, c));
    REQUIRE(is_primitive_sublattice(sat));
    REQUIRE(saturate(sat).coords == sat.coords);
  }
}

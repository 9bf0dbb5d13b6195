#include <catch_amalgamated.hpp>

#include "qfkit/matrix.hpp"

using namespace qfkit;

TEST_CASE("determinant and leading minors") {
  IMat a{{Int(2), Int(1)}, {Int(1), Int(1)}};
  auto minors = leading_principal_minors(a);
  REQUIRE(minors == std::vector<Int>{2, 1});
  REQUIRE(det(a) == 1);

  IMat b{{Int(1), Int(0)}, {Int(0), Int(11)}};
  REQUIRE(det(b) == 11);

  IMat c{{Int(2), Int(1)}, {Int(1), Int(2)}};
  REQUIRE(det(c) == 3);

  // zero pivot path
  IMat d{{Int(0), Int(1)}, {Int(1), Int(0)}};
  REQUIRE(det(d) == -1);
}

TEST_CASE("hnf basis is canonical") {
  IMat a{{Int(2), Int(4)}, {Int(1), Int(3)}};
  IMat h = hnf_basis(a);
  REQUIRE(h.rows == 2);
  REQUIRE(h(0, 0) == 1);
  REQUIRE(h(1, 0) == 0);
  // row lattice membership: (2,4) = 2*(1,3) - ... recombination exists
  REQUIRE(det(h) * det(h) == det(a) * det(a));
}

TEST_CASE("left kernel is saturated") {
  IMat a(3, 2);
  a(0, 0) = 1;
  a(1, 0) = 1;
  a(2, 1) = 1;  // rows (1,0),(1,0),(0,1)
  IMat k = left_kernel(a);
  REQUIRE(k.rows == 1);
  // kernel row is +-(1,-1,0)
  REQUIRE(abs_int(k(0, 0)) == 1);
  REQUIRE(k(0, 0) + k(0, 1) == 0);
  REQUIRE(k(0, 2) == 0);
}

TEST_CASE("invariant factors") {
  IMat a{{Int(2), Int(0)}, {Int(0), Int(3)}};
  auto f = invariant_factors(a);
  REQUIRE(f == std::vector<Int>{1, 6});

  IMat b{{Int(1), Int(1)}, {Int(0), Int(3)}};
  REQUIRE(invariant_factors(b) == std::vector<Int>{1, 3});

  IMat c(1, 2);
  c(0, 0) = 2;
  REQUIRE(invariant_factors(c) == std::vector<Int>{2});
}

TEST_CASE("rational solve and inverse") {
  RMat a{{Rat(2), Rat(1)}, {Rat(1), Rat(1)}};
  RMat x = solve_right(RMat::identity(2), a);
  RMat prod = x * a;
  REQUIRE(prod == RMat::identity(2));
}

TEST_CASE("mod-p kernels") {
  IMat g{{Int(2), Int(0)}, {Int(0), Int(6)}};
  IMat k = left_kernel_mod_p(g, 3);
  REQUIRE(k.rows == 1);
  REQUIRE(k(0, 0) == 0);
  REQUIRE(k(0, 1) == 1);
  REQUIRE(rank_mod_p(g, 3) == 1);
  REQUIRE(rank_mod_p(g, 5) == 2);
}

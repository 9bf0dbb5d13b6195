#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfkit/matrix.hpp"

namespace qfkit {

/// Positive definite integral lattice given by an exact Gram matrix.
/// Q(x) = x G x^t, B(x, y) = x G y^t; rank 0 is allowed as the empty lattice
/// (identity of the orthogonal sum).
class Lattice {
 public:
  Lattice() = default;

  static Lattice from_gram(const IMat& gram) {
    require(gram.rows == gram.cols, errc::not_symmetric, "gram matrix not square");
    require(gram.is_symmetric(), errc::not_symmetric, "gram matrix not symmetric");
    auto minors = leading_principal_minors(gram);
    for (const auto& m : minors)
      require(m > 0, errc::not_positive_definite, "leading principal minor <= 0");
    Lattice l;
    l.gram_ = gram;
    return l;
  }

  static Lattice empty() { return Lattice(); }

  const IMat& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows; }

  Int disc() const { return det(gram_); }

  Int q(const std::vector<Int>& x) const {
    Int s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) s += x[i] * gram_(i, j) * x[j];
    }
    return s;
  }

  Int b(const std::vector<Int>& x, const std::vector<Int>& y) const {
    Int s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j) s += x[i] * gram_(i, j) * y[j];
    }
    return s;
  }

 private:
  IMat gram_;
};

inline Lattice make_lattice(const IMat& gram) { return Lattice::from_gram(gram); }

inline Int discriminant(const Lattice& l) { return l.disc(); }

/// gcd of all Gram entries (positive generator of s(L)).
inline Int scale_ideal(const Lattice& l) {
  Int g = 0;
  for (const auto& x : l.gram().a) g = gcd_int(g, x);
  return g;
}

/// gcd of the diagonal together with 2 s(L) (positive generator of n(L)).
inline Int norm_ideal(const Lattice& l) {
  Int g = 2 * scale_ideal(l);
  for (std::size_t i = 0; i < l.rank(); ++i) g = gcd_int(g, l.gram()(i, i));
  return g;
}

inline bool is_normalized(const Lattice& l) { return norm_ideal(l) == 2; }

inline Lattice rescale(const Lattice& l, const Rat& r) {
  require(r > 0, errc::bad_input, "scaling factor must be positive");
  IMat g(l.rank(), l.rank());
  for (std::size_t i = 0; i < g.a.size(); ++i) {
    Rat v = Rat(l.gram().a[i]) * r;
    require(denominator(v) == 1, errc::not_integral_after_scaling,
            "entry not integral after scaling");
    g.a[i] = numerator(v);
  }
  return Lattice::from_gram(g);
}

/// Unique r with n(L^r) = 2Z; odd lattices scale up by 2.
inline std::pair<Lattice, Rat> normalize(const Lattice& l) {
  Rat r = Rat(2) / Rat(norm_ideal(l));
  return {rescale(l, r), r};
}

inline Lattice orthogonal_sum(const Lattice& l1, const Lattice& l2) {
  std::size_t n1 = l1.rank(), n2 = l2.rank();
  IMat g(n1 + n2, n1 + n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) g(i, j) = l1.gram()(i, j);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) g(n1 + i, n1 + j) = l2.gram()(i, j);
  return Lattice::from_gram(g);
}

/// A rank-n sublattice of an ambient lattice, given by coordinate rows.
struct SublatticeEmbedding {
  Lattice ambient;
  IMat coords;  // n x m, full row rank

  SublatticeEmbedding(Lattice amb, IMat c) : ambient(std::move(amb)), coords(std::move(c)) {
    require(coords.cols == ambient.rank(), errc::bad_input, "embedding shape mismatch");
    require(rank_int(coords) == coords.rows, errc::bad_input, "embedding rows dependent");
  }

  std::size_t sub_rank() const { return coords.rows; }

  IMat sub_gram() const {
    IMat g = coords * ambient.gram() * coords.transposed();
    return g;
  }

  Lattice sublattice() const { return Lattice::from_gram(sub_gram()); }
};

inline SublatticeEmbedding identity_embedding(const Lattice& l) {
  return SublatticeEmbedding(l, IMat::identity(l.rank()));
}

/// True iff coords extends to a basis of the ambient lattice (all invariant
/// factors 1, equivalently L/M torsion-free).
inline bool is_primitive_sublattice(const SublatticeEmbedding& e) {
  auto f = invariant_factors(e.coords);
  for (const auto& d : f)
    if (d != 1) return false;
  return true;
}

/// QM cap L: the smallest primitive sublattice containing M; idempotent.
inline SublatticeEmbedding saturate(const SublatticeEmbedding& e) {
  // Two kernels: rowspace_Q(C) = { x : x * N = 0 } where N spans ker(C *).
  IMat n = right_kernel_rows(e.coords);         // rows z with C z^t = 0
  IMat sat = left_kernel(n.transposed());       // { x : x z^t = 0 for all z }
  return SublatticeEmbedding(e.ambient, sat);
}

/// M^perp = { x in L : B(x, M) = 0 } with the positive generator of n(M^perp).
inline std::pair<SublatticeEmbedding, std::optional<Int>> orthogonal_complement(
    const SublatticeEmbedding& e) {
  IMat pair_mat = e.ambient.gram() * e.coords.transposed();  // m x n
  IMat comp = left_kernel(pair_mat);                          // rows x with x * pair_mat = 0
  SublatticeEmbedding ce(e.ambient, comp);
  if (comp.rows == 0) return {std::move(ce), std::nullopt};
  IMat g = ce.sub_gram();
  Int a = 0;
  for (std::size_t i = 0; i < g.rows; ++i) a = gcd_int(a, g(i, i));
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = i + 1; j < g.cols; ++j) a = gcd_int(a, 2 * g(i, j));
  return {std::move(ce), a};
}

}  // namespace qfkit

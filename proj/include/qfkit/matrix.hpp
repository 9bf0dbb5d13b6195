#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "qfkit/error.hpp"
#include "qfkit/numeric.hpp"

namespace qfkit {

/// Dense row-major matrix over an exact scalar (Int or Rat).
template <class T>
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}
  Mat(std::initializer_list<std::initializer_list<T>> init) {
    rows = init.size();
    cols = rows ? init.begin()->size() : 0;
    a.reserve(rows * cols);
    for (const auto& row : init) {
      require(row.size() == cols, errc::bad_input, "ragged matrix literal");
      for (const auto& x : row) a.push_back(x);
    }
  }

  T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  Mat transposed() const {
    Mat t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_symmetric() const {
    if (rows != cols) return false;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = i + 1; j < cols; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
  }
};

using IMat = Mat<Int>;
using RMat = Mat<Rat>;

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
  require(x.cols == y.rows, errc::bad_input, "matrix product shape mismatch");
  Mat<T> z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const T& v = x(i, k);
      if (v == T(0)) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
    }
  return z;
}

inline RMat to_rmat(const IMat& m) {
  RMat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
  return r;
}

/// Exact conversion; fails if any entry has a denominator.
inline IMat to_imat(const RMat& m) {
  IMat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) {
    require(denominator(m.a[i]) == 1, errc::not_integral, "non-integer entry");
    r.a[i] = numerator(m.a[i]);
  }
  return r;
}

/// Leading principal minors det(A[0..k, 0..k]), k = 0..n-1, by fraction-free
/// elimination. Also how determinants are computed.
inline std::vector<Int> leading_principal_minors(const IMat& m) {
  require(m.rows == m.cols, errc::bad_input, "minors of non-square matrix");
  std::size_t n = m.rows;
  std::vector<Int> minors;
  minors.reserve(n);
  IMat w = m;
  Int prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    // Bareiss step; a zero pivot means some leading minor vanishes.
    if (w(k, k) == 0) {
      // expansion fallback for the remaining minors (rare; tiny matrices)
      for (std::size_t t = k; t < n; ++t) {
        IMat sub(t + 1, t + 1);
        for (std::size_t i = 0; i <= t; ++i)
          for (std::size_t j = 0; j <= t; ++j) sub(i, j) = m(i, j);
        // naive cofactor determinant
        struct Det {
          static Int go(const IMat& s) {
            std::size_t d = s.rows;
            if (d == 1) return s(0, 0);
            Int acc = 0;
            int sign = 1;
            for (std::size_t c = 0; c < d; ++c) {
              IMat minor(d - 1, d - 1);
              for (std::size_t i = 1; i < d; ++i) {
                std::size_t jj = 0;
                for (std::size_t j = 0; j < d; ++j) {
                  if (j == c) continue;
                  minor(i - 1, jj++) = s(i, j);
                }
              }
              acc += sign * s(0, c) * go(minor);
              sign = -sign;
            }
            return acc;
          }
        };
        minors.push_back(Det::go(sub));
      }
      return minors;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = w(i, j) * w(k, k) - w(i, k) * w(k, j);
        w(i, j) = num / prev;  // exact division (Bareiss)
      }
    minors.push_back(w(k, k));
    prev = w(k, k);
  }
  return minors;
}

inline Int det(const IMat& m) {
  if (m.rows == 0) return 1;
  return leading_principal_minors(m).back();
}

/// Row Hermite normal form H = U * A with unimodular U.
/// Pivots positive, entries above pivots reduced into [0, pivot).
inline void hnf_rows(IMat& h, IMat& u) {
  std::size_t n = h.rows, m = h.cols;
  u = IMat::identity(n);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    // clear column c below row r by gcd pivoting
    while (true) {
      std::size_t piv = n;
      for (std::size_t i = r; i < n; ++i)
        if (h(i, c) != 0 && (piv == n || abs_int(h(i, c)) < abs_int(h(piv, c)))) piv = i;
      if (piv == n) break;
      h.swap_rows(r, piv);
      u.swap_rows(r, piv);
      bool done = true;
      for (std::size_t i = r + 1; i < n; ++i) {
        if (h(i, c) == 0) continue;
        Int q = h(i, c) / h(r, c);
        for (std::size_t j = 0; j < m; ++j) h(i, j) -= q * h(r, j);
        for (std::size_t j = 0; j < n; ++j) u(i, j) -= q * u(r, j);
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      for (std::size_t j = 0; j < m; ++j) h(r, j) = -h(r, j);
      for (std::size_t j = 0; j < n; ++j) u(r, j) = -u(r, j);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = h(i, c) / h(r, c);
      if (h(i, c) - q * h(r, c) < 0) q -= 1;  // floor division reduce
      if (q == 0) continue;
      for (std::size_t j = 0; j < m; ++j) h(i, j) -= q * h(r, j);
      for (std::size_t j = 0; j < n; ++j) u(i, j) -= q * u(r, j);
    }
    ++r;
  }
}

/// Nonzero rows of the row HNF of A (a canonical basis of the row lattice).
inline IMat hnf_basis(const IMat& a) {
  IMat h = a, u;
  hnf_rows(h, u);
  std::size_t nz = 0;
  for (std::size_t i = 0; i < h.rows; ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < h.cols; ++j)
      if (h(i, j) != 0) zero = false;
    if (!zero) ++nz;
    // HNF puts zero rows last
  }
  IMat b(nz, h.cols);
  for (std::size_t i = 0; i < nz; ++i)
    for (std::size_t j = 0; j < h.cols; ++j) b(i, j) = h(i, j);
  return b;
}

inline std::size_t rank_int(const IMat& a) { return hnf_basis(a).rows; }

/// Basis of {x : x * A = 0} as rows; the kernel lattice is saturated.
inline IMat left_kernel(const IMat& a) {
  IMat h = a, u;
  hnf_rows(h, u);
  std::vector<std::size_t> zero_rows;
  for (std::size_t i = 0; i < h.rows; ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < h.cols; ++j)
      if (h(i, j) != 0) zero = false;
    if (zero) zero_rows.push_back(i);
  }
  IMat k(zero_rows.size(), a.rows);
  for (std::size_t i = 0; i < zero_rows.size(); ++i)
    for (std::size_t j = 0; j < a.rows; ++j) k(i, j) = u(zero_rows[i], j);
  return hnf_basis(k);  // canonical
}

/// Basis of {x column : A * x = 0}, returned as rows of the transposed kernel.
inline IMat right_kernel_rows(const IMat& a) { return left_kernel(a.transposed()); }

/// Invariant factors d1 | d2 | ... (nonzero ones) of an integer matrix.
inline std::vector<Int> invariant_factors(IMat a) {
  std::size_t n = a.rows, m = a.cols;
  std::vector<Int> out;
  std::size_t top = 0;
  while (top < n && top < m) {
    // find smallest nonzero entry in the remaining block
    std::size_t pi = n, pj = m;
    for (std::size_t i = top; i < n; ++i)
      for (std::size_t j = top; j < m; ++j)
        if (a(i, j) != 0 && (pi == n || abs_int(a(i, j)) < abs_int(a(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == n) break;
    a.swap_rows(top, pi);
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, top), a(i, pj));
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = top + 1; i < n; ++i) {
        if (a(i, top) == 0) continue;
        Int q = a(i, top) / a(top, top);
        for (std::size_t j = top; j < m; ++j) a(i, j) -= q * a(top, j);
        if (a(i, top) != 0) {
          a.swap_rows(top, i);
          clean = false;
        }
      }
      for (std::size_t j = top + 1; j < m; ++j) {
        if (a(top, j) == 0) continue;
        Int q = a(top, j) / a(top, top);
        for (std::size_t i = top; i < n; ++i) a(i, j) -= q * a(i, top);
        if (a(top, j) != 0) {
          for (std::size_t i = 0; i < n; ++i) std::swap(a(i, top), a(i, j));
          clean = false;
        }
      }
      if (clean) {
        // pivot must divide the rest of the block
        for (std::size_t i = top + 1; i < n && clean; ++i)
          for (std::size_t j = top + 1; j < m && clean; ++j)
            if (a(i, j) % a(top, top) != 0) {
              for (std::size_t k = top; k < m; ++k) a(top, k) += a(i, k);
              clean = false;
            }
      }
    }
    out.push_back(abs_int(a(top, top)));
    ++top;
  }
  return out;
}

/// Solve X * A = B over Q for square invertible A.
inline RMat solve_right(const RMat& b, const RMat& a) {
  require(a.rows == a.cols, errc::bad_input, "solve with non-square matrix");
  require(b.cols == a.rows, errc::bad_input, "solve shape mismatch");
  std::size_t n = a.rows;
  // Solve A^T * X^T = B^T by Gaussian elimination.
  RMat at = a.transposed();
  RMat rhs = b.transposed();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && at(piv, c) == 0) ++piv;
    require(piv < n, errc::bad_input, "singular matrix in solve");
    at.swap_rows(c, piv);
    rhs.swap_rows(c, piv);
    Rat inv = Rat(1) / at(c, c);
    for (std::size_t j = 0; j < n; ++j) at(c, j) *= inv;
    for (std::size_t j = 0; j < rhs.cols; ++j) rhs(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || at(i, c) == 0) continue;
      Rat f = at(i, c);
      for (std::size_t j = 0; j < n; ++j) at(i, j) -= f * at(c, j);
      for (std::size_t j = 0; j < rhs.cols; ++j) rhs(i, j) -= f * rhs(c, j);
    }
  }
  return rhs.transposed();
}

inline RMat inverse(const RMat& a) { return solve_right(RMat::identity(a.rows), a); }

/// Rank and reduced row echelon form over F_p (in place); returns pivot columns.
inline std::vector<std::size_t> rref_mod_p(IMat& a, const Int& p) {
  std::vector<std::size_t> pivots;
  for (auto& x : a.a) x = mod_reduce(x, p);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
    std::size_t piv = r;
    while (piv < a.rows && a(piv, c) == 0) ++piv;
    if (piv == a.rows) continue;
    a.swap_rows(r, piv);
    Int inv = mod_inverse(a(r, c), p);
    for (std::size_t j = 0; j < a.cols; ++j) a(r, j) = mod_reduce(a(r, j) * inv, p);
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      Int f = a(i, c);
      for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = mod_reduce(a(i, j) - f * a(r, j), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank_mod_p(IMat a, const Int& p) { return rref_mod_p(a, p).size(); }

/// Basis (rows) of {x : x * A = 0 over F_p}, entries in [0, p).
inline IMat left_kernel_mod_p(const IMat& a, const Int& p) {
  IMat w = a.transposed();  // kernel of w * x = 0 as column problem
  std::vector<std::size_t> pivots = rref_mod_p(w, p);
  std::size_t n = a.rows;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) free_cols.push_back(j);
  IMat k(free_cols.size(), n);
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    std::size_t fc = free_cols[t];
    k(t, fc) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      k(t, pivots[r]) = mod_reduce(-w(r, fc), p);
  }
  return k;
}

}  // namespace qfkit

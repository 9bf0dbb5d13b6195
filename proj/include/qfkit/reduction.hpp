#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "qfkit/lattice.hpp"

namespace qfkit {

inline constexpr std::size_t kMaxReductionRank = 8;
inline constexpr long kDefaultEnumNodeCap = 50'000'000;

namespace detail {

inline Rat round_rat(const Rat& x) {
  // nearest integer, ties toward zero
  Int n = numerator(x), d = denominator(x);
  Int q = n / d, r = n % d;
  if (2 * abs_int(r) > d) q += (n < 0 ? -1 : 1);
  return Rat(q);
}

/// Gram-based LLL (delta = 3/4), exact rational arithmetic.
/// Returns U with U * G * U^t reduced.
inline IMat lll_transform(const IMat& g) {
  std::size_t n = g.rows;
  IMat u = IMat::identity(n);
  if (n <= 1) return u;
  auto gram = [&](const IMat& t) { return t * g * t.transposed(); };

  IMat w = g;
  // GSO of the current gram
  std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
  std::vector<Rat> bstar(n, Rat(0));
  auto recompute = [&]() {
    RMat r = to_rmat(w);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        Rat s = r(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= mu[i][k] * mu[j][k] * bstar[k];
        mu[i][j] = s / bstar[j];
      }
      Rat s = r(i, i);
      for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
      bstar[i] = s;
    }
  };
  recompute();

  const Rat delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      Rat q = round_rat(mu[k][j]);
      if (q != 0) {
        Int qi = numerator(q);
        for (std::size_t c = 0; c < n; ++c) u(k, c) -= qi * u(j, c);
        w = gram(u);
        recompute();
      }
    }
    if (bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
      ++k;
    } else {
      u.swap_rows(k, k - 1);
      w = gram(u);
      recompute();
      k = k > 1 ? k - 1 : 1;
    }
  }
  return u;
}

struct LdlData {
  std::vector<Rat> d;                 // positive pivots
  std::vector<std::vector<Rat>> off;  // off[i][j] for j > i
};

inline LdlData ldl(const IMat& g) {
  std::size_t n = g.rows;
  RMat w = to_rmat(g);
  LdlData out;
  out.d.resize(n);
  out.off.assign(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    out.d[i] = w(i, i);
    for (std::size_t j = i + 1; j < n; ++j) out.off[i][j] = w(i, j) / w(i, i);
    for (std::size_t r = i + 1; r < n; ++r)
      for (std::size_t c = i + 1; c < n; ++c) w(r, c) -= w(r, i) * w(i, c) / w(i, i);
  }
  return out;
}

inline bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::vector<Int> canonical_sign(std::vector<Int> v) {
  for (const auto& x : v) {
    if (x > 0) return v;
    if (x < 0) {
      for (auto& y : v) y = -y;
      return v;
    }
  }
  return v;
}

}  // namespace detail

struct ShortVector {
  std::vector<Int> coords;  // canonical representative of the +/- pair
  Int value;                // Q(coords)
};

/// All +/- classes with 0 < Q <= bound, canonical signs, sorted by (Q, lex).
/// Complete enumeration (Fincke-Pohst on an LLL-reduced gram).
inline std::vector<ShortVector> short_vectors(const Lattice& l, const Int& bound,
                                              long node_cap = kDefaultEnumNodeCap) {
  require(l.rank() <= kMaxReductionRank, errc::rank_too_large, "enumeration rank cap is 8");
  std::vector<ShortVector> out;
  if (bound <= 0 || l.rank() == 0) return out;
  std::size_t n = l.rank();
  IMat u = detail::lll_transform(l.gram());
  IMat w = u * l.gram() * u.transposed();
  detail::LdlData f = detail::ldl(w);

  std::vector<Int> x(n, 0);
  long nodes = 0;
  Rat bnd(bound);

  // enumerate from the last coordinate down; partial = sum of completed layers
  struct Frame {
    Rat center;   // c_i
    Rat partial;  // weight consumed by layers > i
  };
  std::vector<Frame> fr(n);

  auto center_at = [&](std::size_t i) {
    Rat c(0);
    for (std::size_t j = i + 1; j < n; ++j) c += f.off[i][j] * Rat(x[j]);
    return c;
  };

  // recursive lambda via explicit stack-free recursion
  auto rec = [&](auto&& self, std::size_t i, const Rat& partial) -> void {
    if (++nodes > node_cap) fail(errc::bound_too_large, "enumeration volume cap exceeded");
    if (i + 1 == 0) return;
    Rat c = center_at(i);
    // d_i (x + c)^2 <= bound - partial
    Rat budget = bnd - partial;
    // start at the integer nearest -c and walk out both ways
    Rat nc = -c;
    Int x0 = numerator(detail::round_rat(nc));
    auto weight = [&](const Int& xi) -> Rat {
      Rat t = Rat(xi) + c;
      return f.d[i] * t * t;
    };
    for (int dir = 0; dir < 2; ++dir) {
      Int xi = x0;
      if (dir == 1) xi += 1;
      Int step = dir == 0 ? -1 : 1;
      while (true) {
        Rat wgt = weight(xi);
        if (wgt > budget) break;
        x[i] = xi;
        if (i == 0) {
          bool zero = std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; });
          if (!zero) {
            // back to the original basis
            std::vector<Int> orig(n, 0);
            for (std::size_t r = 0; r < n; ++r)
              if (x[r] != 0)
                for (std::size_t cidx = 0; cidx < n; ++cidx) orig[cidx] += x[r] * u(r, cidx);
            Int qv = l.q(orig);
            if (qv > 0 && qv <= bound)
              out.push_back({detail::canonical_sign(std::move(orig)), qv});
          }
        } else {
          self(self, i - 1, partial + wgt);
        }
        xi += step;
      }
      x[i] = 0;
    }
    x[i] = 0;
  };
  rec(rec, n - 1, Rat(0));

  std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.value != b.value) return a.value < b.value;
    return detail::lex_less(a.coords, b.coords);
  });
  // +/- dedup: canonical signs make pairs collide
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ShortVector& a, const ShortVector& b) {
                          return a.value == b.value && a.coords == b.coords;
                        }),
            out.end());
  return out;
}

struct MinimaProfile {
  std::vector<Int> minima;  // mu_1 <= ... <= mu_m
  IMat witnesses;           // rows attain the minima, linearly independent
};

inline MinimaProfile successive_minima(const Lattice& l, long node_cap = kDefaultEnumNodeCap) {
  require(l.rank() >= 1, errc::bad_input, "minima of the empty lattice");
  require(l.rank() <= kMaxReductionRank, errc::rank_too_large, "minima rank cap is 8");
  std::size_t n = l.rank();
  IMat u = detail::lll_transform(l.gram());
  IMat w = u * l.gram() * u.transposed();
  Int bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, w(i, i));
  auto shorts = short_vectors(l, bound, node_cap);

  MinimaProfile prof;
  prof.witnesses = IMat(0, n);
  IMat acc(0, n);
  for (const auto& sv : shorts) {
    IMat trial(acc.rows + 1, n);
    for (std::size_t i = 0; i < acc.rows; ++i)
      for (std::size_t j = 0; j < n; ++j) trial(i, j) = acc(i, j);
    for (std::size_t j = 0; j < n; ++j) trial(acc.rows, j) = sv.coords[j];
    if (rank_int(trial) == trial.rows) {
      acc = trial;
      prof.minima.push_back(sv.value);
      prof.witnesses = acc;
      if (prof.minima.size() == n) break;
    }
  }
  require(prof.minima.size() == n, errc::bad_input, "minima enumeration incomplete");
  return prof;
}

namespace detail {

inline bool partial_primitive(const IMat& rows, const Lattice& l) {
  (void)l;
  auto f = invariant_factors(rows);
  for (const auto& d : f)
    if (d != 1) return false;
  return f.size() == rows.rows;
}

/// Backtracking over minima-attaining tuples, keeping the partial span
/// saturated (ranks <= 4: such a basis exists).
inline bool minkowski_backtrack(const Lattice& l, const std::vector<Int>& minima,
                                const std::vector<ShortVector>& pool, IMat& rows,
                                std::size_t level) {
  std::size_t n = l.rank();
  if (level == n) return true;
  for (const auto& sv : pool) {
    if (sv.value != minima[level]) continue;
    for (int sgn = 0; sgn < (level == 0 ? 1 : 2); ++sgn) {
      IMat trial(level + 1, n);
      for (std::size_t i = 0; i < level; ++i)
        for (std::size_t j = 0; j < n; ++j) trial(i, j) = rows(i, j);
      for (std::size_t j = 0; j < n; ++j) {
        trial(level, j) = sv.coords[j];
        if (sgn) trial(level, j) = -trial(level, j);
      }
      if (rank_int(trial) != level + 1) break;  // sign flip cannot fix dependence
      if (!partial_primitive(trial, l)) continue;
      IMat saved = rows;
      rows = trial;
      if (minkowski_backtrack(l, minima, pool, rows, level + 1)) return true;
      rows = saved;
    }
  }
  return false;
}

}  // namespace detail

/// Reduced gram plus the unimodular change of basis (rows of U in the old
/// basis). Rank <= 4: the diagonal equals the successive minima. Ranks 5-8:
/// greedy diagonal minimization over saturated partial bases.
inline std::pair<Lattice, IMat> minkowski_reduce(const Lattice& l,
                                                 long node_cap = kDefaultEnumNodeCap) {
  require(l.rank() >= 1, errc::bad_input, "reduce of the empty lattice");
  require(l.rank() <= kMaxReductionRank, errc::rank_too_large, "reduction rank cap is 8");
  std::size_t n = l.rank();
  MinimaProfile prof = successive_minima(l, node_cap);
  auto pool = short_vectors(l, prof.minima.back(), node_cap);

  if (n <= 4) {
    IMat rows(0, n);
    IMat work(0, n);
    if (detail::minkowski_backtrack(l, prof.minima, pool, work, 0)) {
      Lattice red = Lattice::from_gram(work * l.gram() * work.transposed());
      return {red, work};
    }
    // not expected for ranks <= 4; fall through to the greedy path
  }

  // greedy: next basis vector is the canonically smallest one keeping the
  // partial basis saturated
  IMat rows(0, n);
  Int bound = prof.minima.back();
  auto grown = short_vectors(l, bound, node_cap);
  for (std::size_t level = 0; level < n; ++level) {
    bool placed = false;
    while (!placed) {
      for (const auto& sv : grown) {
        for (int sgn = 0; sgn < (level == 0 ? 1 : 2); ++sgn) {
          IMat trial(level + 1, n);
          for (std::size_t i = 0; i < level; ++i)
            for (std::size_t j = 0; j < n; ++j) trial(i, j) = rows(i, j);
          for (std::size_t j = 0; j < n; ++j) {
            trial(level, j) = sv.coords[j];
            if (sgn) trial(level, j) = -trial(level, j);
          }
          if (rank_int(trial) != level + 1) break;
          if (!detail::partial_primitive(trial, l)) continue;
          rows = trial;
          placed = true;
          break;
        }
        if (placed) break;
      }
      if (!placed) {
        bound *= 2;
        grown = short_vectors(l, bound, node_cap);
      }
    }
  }
  Lattice red = Lattice::from_gram(rows * l.gram() * rows.transposed());
  return {red, rows};
}

/// Primitive sublattice spanned by the first k vectors of a reduced basis.
inline SublatticeEmbedding k_section(const Lattice& l, std::size_t k,
                                     long node_cap = kDefaultEnumNodeCap) {
  require(k >= 1 && k <= l.rank(), errc::bad_input, "section index out of range");
  auto [red, u] = minkowski_reduce(l, node_cap);
  (void)red;
  IMat rows(k, l.rank());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < l.rank(); ++j) rows(i, j) = u(i, j);
  return SublatticeEmbedding(l, rows);
}

}  // namespace qfkit

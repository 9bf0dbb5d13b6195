#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qfkit/matrix.hpp"

namespace qfkit {

/// Outcome of the finite-precision p-adic representation search.
///
/// `yes` carries a witness T mod p^depth whose residual vanishes mod p^depth
/// and whose pairing matrix T*G_L has enough p-unit structure that a Newton
/// step always lifts it one level further (so an exact Z_p witness exists).
/// `no` means the solution tree was exhausted below the depth cap: no T
/// satisfies the congruence at some finite level, hence none exists over Z_p.
/// `stuck` means the search hit the depth cap or the node budget first.
struct LocalSearch {
  enum class Verdict { yes, no, stuck };
  Verdict verdict = Verdict::no;
  IMat witness;
  long depth = 0;
  long nodes = 0;
  bool cap_hit = false;
  bool budget_hit = false;
};

namespace detail {

template <class I>
I mod_pos(I a, I m) {
  I r = a % m;
  if (r < 0) r += m;
  return r;
}

template <class I>
long ord_of(I a, I p) {
  long v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

template <class I>
I inv_mod(I a, I m) {
  I t = 0, nt = 1, r = m, nr = mod_pos(a, m);
  while (nr != 0) {
    I q = r / nr;
    I tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return mod_pos(t, m);
}

/// ord_p of the product of the invariant factors, by p-adic elimination of
/// the matrix reduced mod p^kprec (entries never grow past p^kprec).
/// Returns -1 when the answer is not determined at this precision.
template <class I>
long sigma_mod(std::vector<std::vector<I>> a, const I& p, long kprec,
               const std::vector<I>& pk) {
  std::size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
  const I mod = pk[static_cast<std::size_t>(kprec)];
  for (auto& row : a)
    for (auto& x : row) x = mod_pos(x, mod);
  long sigma = 0;
  for (std::size_t top = 0; top < n; ++top) {
    long best = kprec;
    std::size_t pi = n, pj = m;
    for (std::size_t i = top; i < n; ++i)
      for (std::size_t j = top; j < m; ++j) {
        if (a[i][j] == 0) continue;
        long o = ord_of(a[i][j], p);
        if (o < best) {
          best = o;
          pi = i;
          pj = j;
        }
      }
    if (pi == n || best >= kprec) return -1;  // pivot undetermined
    std::swap(a[top], a[pi]);
    for (std::size_t i = 0; i < n; ++i) std::swap(a[i][top], a[i][pj]);
    sigma += best;
    const I ps = pk[static_cast<std::size_t>(best)];
    I unit = a[top][top] / ps;
    I uinv = inv_mod(unit, mod);
    for (std::size_t i = top + 1; i < n; ++i) {
      if (a[i][top] == 0) continue;
      I f = mod_pos(I((a[i][top] / ps) * uinv), mod);
      for (std::size_t j = top; j < m; ++j)
        a[i][j] = mod_pos(I(a[i][j] - f * a[top][j]), mod);
    }
  }
  return sigma;
}

template <class I>
struct HenselSearch {
  std::vector<std::vector<I>> gm, gl;
  I p;
  bool primitive;
  long cap, budget;
  std::size_t n, m;
  std::vector<I> pk;
  std::vector<std::vector<I>> t;
  long nodes = 0;
  bool cap_hit = false, budget_hit = false;
  std::vector<std::vector<I>> wit;
  long wit_depth = 0;

  bool certified(long k) {
    long margin = (p == 2) ? 3 : 1;
    if (k < margin) return false;
    std::vector<std::vector<I>> pairing(n, std::vector<I>(m, I(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < m; ++a) {
        if (t[i][a] == 0) continue;
        for (std::size_t b = 0; b < m; ++b) pairing[i][b] += t[i][a] * gl[a][b];
      }
    long sigma = sigma_mod(pairing, p, k, pk);
    if (sigma < 0) return false;
    return k >= 2 * sigma + margin;
  }

  std::size_t rank_mod_p_rows() const {
    std::vector<std::vector<I>> a = t;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < n; ++c) {
      std::size_t piv = r;
      while (piv < n && mod_pos(a[piv][c], p) == 0) ++piv;
      if (piv == n) continue;
      std::swap(a[r], a[piv]);
      // normalize pivot to 1 via Fermat inverse
      I inv = 1, base = mod_pos(a[r][c], p), e = p - 2;
      while (e > 0) {
        if (e % 2 == 1) inv = mod_pos(I(inv * base), p);
        base = mod_pos(I(base * base), p);
        e /= 2;
      }
      for (std::size_t j = 0; j < m; ++j) a[r][j] = mod_pos(I(a[r][j] * inv), p);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        I f = mod_pos(a[i][c], p);
        if (f == 0) continue;
        for (std::size_t j = 0; j < m; ++j) a[i][j] = mod_pos(I(a[i][j] - f * a[r][j]), p);
      }
      ++r;
    }
    return r;
  }

  bool row_consistent(std::size_t i, const I& mod) {
    for (std::size_t j = 0; j <= i; ++j) {
      I s = 0;
      for (std::size_t a = 0; a < m; ++a) {
        if (t[i][a] == 0) continue;
        for (std::size_t b = 0; b < m; ++b) s += t[i][a] * gl[a][b] * t[j][b];
      }
      if (mod_pos(I(s - gm[i][j]), mod) != 0) return false;
    }
    return true;
  }

  bool extend_row(std::size_t i, long k) {
    if (i == n) {
      if (primitive && k == 0 && rank_mod_p_rows() < n) return false;
      return descend(k + 1);
    }
    const I& step = pk[static_cast<std::size_t>(k)];
    const I mod = pk[static_cast<std::size_t>(k) + 1];
    std::vector<I> saved = t[i];
    std::vector<I> dig(m, I(0));
    while (true) {
      if (++nodes > budget) {
        budget_hit = true;
        break;
      }
      if (row_consistent(i, mod)) {
        if (extend_row(i + 1, k)) return true;
        if (budget_hit) break;
      }
      std::size_t pos = 0;
      while (pos < m) {
        dig[pos] += 1;
        t[i][pos] = saved[pos] + dig[pos] * step;
        if (dig[pos] < p) break;
        dig[pos] = 0;
        t[i][pos] = saved[pos];
        ++pos;
      }
      if (pos == m) break;
    }
    t[i] = saved;
    return false;
  }

  bool descend(long k) {
    if (k >= 1 && certified(k)) {
      wit = t;
      wit_depth = k;
      return true;
    }
    if (k >= cap) {
      cap_hit = true;
      return false;
    }
    return extend_row(0, k);
  }

  LocalSearch run() {
    t.assign(n, std::vector<I>(m, I(0)));
    bool found = descend(0);
    LocalSearch out;
    out.nodes = nodes;
    out.cap_hit = cap_hit;
    out.budget_hit = budget_hit;
    if (found) {
      out.verdict = LocalSearch::Verdict::yes;
      out.depth = wit_depth;
      out.witness = IMat(n, m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) out.witness(i, j) = Int(wit[i][j]);
    } else if (cap_hit || budget_hit) {
      out.verdict = LocalSearch::Verdict::stuck;
    } else {
      out.verdict = LocalSearch::Verdict::no;
    }
    return out;
  }
};

}  // namespace detail

inline constexpr long kDefaultLocalNodeBudget = 10'000'000;

/// Decide whether the form with Gram gm is represented by the one with Gram
/// gl over Z_p, searching witness classes mod p^depth_cap. Runs on 64-bit
/// arithmetic when the moduli allow it, exact big integers otherwise.
inline LocalSearch local_search(const IMat& gm, const IMat& gl, const Int& p, bool primitive,
                                long depth_cap, long node_budget = kDefaultLocalNodeBudget) {
  require(gm.rows <= gl.rows, errc::bad_input, "target rank exceeds ambient rank");
  require(depth_cap >= 1, errc::bad_input, "depth cap must be positive");

  // magnitude check for the 64-bit path: |t G t| <= m^2 * p^{2(cap+1)} * |G|,
  // plus |gm| itself
  Int pmax = pow_int(p, static_cast<unsigned long>(depth_cap) + 1);
  Int gmax = 0;
  for (const auto& e : gl.a) gmax = std::max(gmax, abs_int(e));
  for (const auto& e : gm.a) gmax = std::max(gmax, abs_int(e));
  Int worst = Int(gl.rows) * Int(gl.rows) * pmax * pmax * gmax + gmax;
  const Int i64cap = (Int(1) << 62);

  if (worst < i64cap) {
    detail::HenselSearch<long long> s;
    s.gm.assign(gm.rows, std::vector<long long>(gm.cols));
    for (std::size_t i = 0; i < gm.rows; ++i)
      for (std::size_t j = 0; j < gm.cols; ++j) s.gm[i][j] = static_cast<long long>(gm(i, j));
    s.gl.assign(gl.rows, std::vector<long long>(gl.cols));
    for (std::size_t i = 0; i < gl.rows; ++i)
      for (std::size_t j = 0; j < gl.cols; ++j) s.gl[i][j] = static_cast<long long>(gl(i, j));
    s.p = static_cast<long long>(p);
    s.primitive = primitive;
    s.cap = depth_cap;
    s.budget = node_budget;
    s.n = gm.rows;
    s.m = gl.rows;
    s.pk.resize(static_cast<std::size_t>(depth_cap) + 2);
    s.pk[0] = 1;
    for (std::size_t i = 1; i < s.pk.size(); ++i) s.pk[i] = s.pk[i - 1] * s.p;
    return s.run();
  }

  detail::HenselSearch<Int> s;
  s.gm.assign(gm.rows, std::vector<Int>(gm.cols));
  for (std::size_t i = 0; i < gm.rows; ++i)
    for (std::size_t j = 0; j < gm.cols; ++j) s.gm[i][j] = gm(i, j);
  s.gl.assign(gl.rows, std::vector<Int>(gl.cols));
  for (std::size_t i = 0; i < gl.rows; ++i)
    for (std::size_t j = 0; j < gl.cols; ++j) s.gl[i][j] = gl(i, j);
  s.p = p;
  s.primitive = primitive;
  s.cap = depth_cap;
  s.budget = node_budget;
  s.n = gm.rows;
  s.m = gl.rows;
  s.pk.resize(static_cast<std::size_t>(depth_cap) + 2);
  s.pk[0] = 1;
  for (std::size_t i = 1; i < s.pk.size(); ++i) s.pk[i] = s.pk[i - 1] * s.p;
  return s.run();
}

}  // namespace qfkit

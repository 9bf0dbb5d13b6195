#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfkit/padic.hpp"
#include "qfkit/reduction.hpp"

namespace qfkit {

// ---------------------------------------------------------------------------
// Witnesses

struct RepresentationWitness {
  IMat t;  // n x m, rows are the images of the target basis
  Lattice target;
  Lattice ambient;
  bool primitive = false;
};

inline RepresentationWitness make_witness(const IMat& t, const Lattice& target,
                                          const Lattice& ambient) {
  RepresentationWitness w{t, target, ambient, false};
  auto fac = invariant_factors(t);
  w.primitive = fac.size() == t.rows;
  for (const auto& f : fac)
    if (f != 1) w.primitive = false;
  return w;
}

/// Exact check of T * gram(L) * T^t = gram(M) and of the primitivity flag.
inline bool verify_witness(const RepresentationWitness& w) {
  if (w.t.rows != w.target.rank() || w.t.cols != w.ambient.rank()) return false;
  IMat g = w.t * w.ambient.gram() * w.t.transposed();
  if (!(g == w.target.gram())) return false;
  return make_witness(w.t, w.target, w.ambient).primitive == w.primitive;
}

// ---------------------------------------------------------------------------
// Local verdicts

struct LocalVerdict {
  Int p;
  bool represented = false;
  bool primitively_represented = false;
  long precision = 0;                // depth cap E used by the decision
  std::optional<IMat> witness;       // mod p^witness_depth, when the search ran
  long witness_depth = 0;
  std::string method;                // which decision path answered
};

namespace detail {

/// Guaranteed number of hyperbolic planes split off by a unimodular
/// Z_p-lattice (p odd) of rank m and discriminant class d.
inline std::size_t hyperbolic_count(std::size_t m, bool disc_square, const Int& p) {
  bool minus_one_square = legendre(-1, p) == 1;
  std::size_t cnt = 0;
  bool dsq = disc_square;
  while (m >= 3) {
    ++cnt;
    m -= 2;
    dsq = minus_one_square ? dsq : !dsq;  // disc picks up a factor of -1
  }
  if (m == 2) {
    // binary unimodular is H iff -disc is a square
    bool minus_d_sq = minus_one_square ? dsq : !dsq;
    if (minus_d_sq) ++cnt;
  }
  return cnt;
}

/// Q_p-space representation test via rank, discriminant and Hasse invariants.
inline bool represents_space(const std::vector<Rat>& dm, const std::vector<Rat>& dl,
                             const Int& p) {
  std::size_t n = dm.size(), m = dl.size();
  if (n > m) return false;
  std::size_t r = m - n;
  if (r >= 3) return true;
  Place v = Place::prime(p);
  Rat ddm = space_disc(dm), ddl = space_disc(dl);
  int hl = hasse_invariant(dl, v), hm = hasse_invariant(dm, v);
  Rat dx = ddm * ddl;  // disc class of the complement
  if (r == 0) return is_local_square(dx, v) && hl == hm;
  if (r == 1) return hl == hm * hilbert_symbol(ddm, dx, v);
  // r == 2: a binary complement with disc dx and the needed Hasse invariant
  int needed = hl * hm * hilbert_symbol(ddm, dx, v);
  if (is_local_square(-dx, v) && needed == -1) return false;
  return true;
}

}  // namespace detail

/// Decide representation of M_p by L_p with the layered strategy: unimodular
/// shortcut, hyperbolic-split construction, space-level obstruction, then the
/// finite-precision Hensel search at E = ord_p(4 dL dM) + 3 with escalation
/// by 2 up to E <= 40.
///
/// With flavor_only the search runs only in the requested flavor and the
/// other flag is filled in only when it comes for free (a primitive witness
/// also witnesses plain representation; structural paths answer both).
inline LocalVerdict local_represents(const Lattice& m, const Lattice& l, const Int& p,
                                     bool primitive_flavor = false,
                                     long node_budget = kDefaultLocalNodeBudget,
                                     bool flavor_only = false) {
  require(m.rank() <= l.rank(), errc::bad_input, "target rank exceeds ambient rank");
  std::size_t n = m.rank(), mk = l.rank();
  Int dl = l.disc(), dm = m.disc();
  LocalVerdict out;
  out.p = p;
  long e0 = ord_p(Int(4) * dl * dm, p) + 3;
  out.precision = e0;

  if (p != 2 && dl % p != 0 && dm % p != 0) {
    out.method = "unimodular-rule";
    if (mk > n) {
      out.represented = out.primitively_represented = true;
    } else {
      bool same_class = legendre(dl * dm, p) == 1;
      out.represented = out.primitively_represented = same_class;
    }
    return out;
  }

  if (p != 2 && dl % p != 0) {
    bool disc_sq = legendre(dl, p) == 1;
    if (n <= detail::hyperbolic_count(mk, disc_sq, p)) {
      out.method = "hyperbolic-split";
      out.represented = out.primitively_represented = true;
      return out;
    }
  }

  if (!detail::represents_space(diagonalize_space(m), diagonalize_space(l), p)) {
    out.method = "space-obstruction";
    return out;  // both flags false
  }

  out.method = "hensel-search";
  auto decide = [&](bool primitive) -> std::pair<bool, std::optional<LocalSearch>> {
    long e = e0;
    while (true) {
      LocalSearch s = local_search(m.gram(), l.gram(), p, primitive, e, node_budget);
      if (s.verdict == LocalSearch::Verdict::yes) return {true, s};
      if (s.verdict == LocalSearch::Verdict::no) return {false, s};
      e += 2;
      require(e <= 40, errc::precision_unstable,
              "local decision did not stabilize below the precision cap");
      out.precision = e;
    }
  };

  if (flavor_only && !primitive_flavor) {
    auto [ok, search] = decide(false);
    out.represented = ok;
    if (ok) {
      out.witness = search->witness;
      out.witness_depth = search->depth;
    }
    return out;
  }

  auto [prim_ok, prim_search] = decide(true);
  out.primitively_represented = prim_ok;
  if (prim_ok) {
    out.represented = true;
    out.witness = prim_search->witness;
    out.witness_depth = prim_search->depth;
    return out;
  }
  if (flavor_only) return out;  // primitive flavor: the plain field is not consulted
  auto [plain_ok, plain_search] = decide(false);
  out.represented = plain_ok;
  if (plain_ok) {
    out.witness = plain_search->witness;
    out.witness_depth = plain_search->depth;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Genus-level test

struct GenusVerdict {
  bool represented = false;          // in the requested flavor
  bool real_place_ok = false;
  std::vector<LocalVerdict> per_prime;
};

/// Representation by the genus: the real place plus every Z_p. Finite places
/// away from 2 d(L) d(M) are automatic (and primitive) by the unimodular
/// shortcut, so only the divisors are scanned.
inline GenusVerdict genus_represents(const Lattice& m, const Lattice& l, bool primitive,
                                     long node_budget = kDefaultLocalNodeBudget) {
  require(m.rank() >= 1 && m.rank() <= l.rank(), errc::bad_input,
          "genus test needs 1 <= rank(M) <= rank(L)");
  GenusVerdict out;
  out.real_place_ok = true;  // positive definite with rank(M) <= rank(L)
  std::vector<Int> primes{2};
  for (const auto& q : prime_factors(l.disc()))
    if (q != 2) primes.push_back(q);
  for (const auto& q : prime_factors(m.disc()))
    if (q != 2 && std::find(primes.begin(), primes.end(), q) == primes.end())
      primes.push_back(q);
  std::sort(primes.begin(), primes.end());
  out.represented = true;
  for (const auto& q : primes) {
    LocalVerdict v = local_represents(m, l, q, primitive, node_budget);
    bool ok = primitive ? v.primitively_represented : v.represented;
    out.per_prime.push_back(std::move(v));
    if (!ok) out.represented = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Global search

struct GlobalResult {
  enum class Kind { found, not_found, exhausted };
  Kind kind = Kind::not_found;
  std::optional<RepresentationWitness> witness;
  long nodes = 0;
};

inline constexpr long kDefaultGlobalEffort = 10'000'000;

/// Exact global (primitive) representation search: images of a reduced basis
/// of M are drawn from the full list of vectors of the exact needed lengths,
/// matched by backtracking on the pairings. `not_found` is only returned
/// when that finite space has been fully traversed.
inline GlobalResult global_represents(const Lattice& m, const Lattice& l, bool primitive,
                                      long effort = kDefaultGlobalEffort) {
  require(m.rank() >= 1 && m.rank() <= l.rank(), errc::bad_input,
          "global search needs 1 <= rank(M) <= rank(L)");
  GlobalResult out;
  auto [mred, um] = minkowski_reduce(m);
  const IMat& r = mred.gram().rows ? mred.gram() : mred.gram();
  std::size_t n = m.rank(), mk = l.rank();

  Int maxdiag = 0;
  for (std::size_t i = 0; i < n; ++i) maxdiag = std::max(maxdiag, r(i, i));
  std::vector<std::vector<Int>> candidates;  // signed, sorted by (Q, lex)
  std::vector<Int> values;
  for (const auto& sv : short_vectors(l, maxdiag)) {
    candidates.push_back(sv.coords);
    values.push_back(sv.value);
    std::vector<Int> neg(sv.coords.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -sv.coords[i];
    candidates.push_back(std::move(neg));
    values.push_back(sv.value);
  }
  // sort by (Q, lex)
  {
    std::vector<std::size_t> idx(candidates.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] < values[b];
      return detail::lex_less(candidates[a], candidates[b]);
    });
    std::vector<std::vector<Int>> c2;
    std::vector<Int> v2;
    c2.reserve(idx.size());
    for (auto i : idx) {
      c2.push_back(candidates[i]);
      v2.push_back(values[i]);
    }
    candidates = std::move(c2);
    values = std::move(v2);
  }

  IMat rows(n, mk);
  long nodes = 0;
  bool exhausted_budget = false;

  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == n) {
      if (primitive) {
        auto fac = invariant_factors(rows);
        bool prim = fac.size() == n;
        for (const auto& f : fac)
          if (f != 1) prim = false;
        if (!prim) return false;
      }
      return true;
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (values[c] != r(i, i)) continue;
      if (++nodes > effort) {
        exhausted_budget = true;
        return false;
      }
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        Int pairing = 0;
        for (std::size_t a = 0; a < mk; ++a) {
          if (rows(j, a) == 0) continue;
          for (std::size_t b = 0; b < mk; ++b)
            pairing += rows(j, a) * l.gram()(a, b) * candidates[c][b];
        }
        if (pairing != r(i, j)) ok = false;
      }
      if (!ok) continue;
      for (std::size_t a = 0; a < mk; ++a) rows(i, a) = candidates[c][a];
      if (place(i + 1)) return true;
      if (exhausted_budget) return false;
    }
    return false;
  };

  bool found = place(0);
  out.nodes = nodes;
  if (found) {
    // rows represent the reduced M; pull back to the original basis
    RMat t = solve_right(to_rmat(IMat::identity(n)), to_rmat(um));  // um^{-1}
    IMat tz = to_imat(t) * rows;
    out.witness = make_witness(tz, m, l);
    require(verify_witness(*out.witness), errc::bad_input, "witness verification failed");
    if (primitive)
      require(out.witness->primitive, errc::bad_input, "primitive witness check failed");
    out.kind = GlobalResult::Kind::found;
  } else if (exhausted_budget) {
    out.kind = GlobalResult::Kind::exhausted;
  } else {
    out.kind = GlobalResult::Kind::not_found;
  }
  return out;
}

}  // namespace qfkit

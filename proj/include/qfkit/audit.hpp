#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qfkit/represent.hpp"
#include "qfkit/watson.hpp"

namespace qfkit {

inline constexpr std::size_t kMaxAuditArity = 4;
inline constexpr long kDefaultCandidateCap = 2'000'000;

/// Every positive definite integral n-ary lattice with mu_n <= B appears in
/// this stream at least once (reduced coefficient boxes, complete for
/// n <= 4); duplicates are possible and are deduplicated by the caller.
inline std::vector<Lattice> enumerate_candidates(std::size_t n, const Int& bound,
                                                 long cap = kDefaultCandidateCap) {
  require(n >= 1 && n <= kMaxAuditArity, errc::bad_input, "candidate arity must be 1..4");
  require(bound >= 1, errc::bad_input, "candidate bound must be positive");
  std::vector<Lattice> out;
  long count = 0;

  std::vector<Int> diag(n, 1);
  std::vector<std::pair<std::size_t, std::size_t>> offs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) offs.push_back({i, j});
  std::vector<Int> off(offs.size(), 0);

  auto emit = [&]() {
    IMat g(n, n);
    for (std::size_t i = 0; i < n; ++i) g(i, i) = diag[i];
    for (std::size_t k = 0; k < offs.size(); ++k) {
      g(offs[k].first, offs[k].second) = off[k];
      g(offs[k].second, offs[k].first) = off[k];
    }
    auto minors = leading_principal_minors(g);
    for (const auto& m : minors)
      if (m <= 0) return;
    require(++count <= cap, errc::cap_exceeded, "candidate enumeration cap exceeded");
    out.push_back(Lattice::from_gram(g));
  };

  std::function<void(std::size_t)> walk_offs = [&](std::size_t k) {
    if (k == offs.size()) {
      emit();
      return;
    }
    Int lim = diag[offs[k].first] / 2;  // 2|g_ij| <= g_ii for i < j
    for (Int v = -lim; v <= lim; ++v) {
      off[k] = v;
      walk_offs(k + 1);
    }
    off[k] = 0;
  };
  std::function<void(std::size_t, Int)> walk_diag = [&](std::size_t i, Int lo) {
    if (i == n) {
      walk_offs(0);
      return;
    }
    for (Int v = lo; v <= bound; ++v) {
      diag[i] = v;
      walk_diag(i + 1, v);
    }
  };
  walk_diag(0, 1);
  return out;
}

struct AuditCounterexample {
  Lattice candidate;
  GenusVerdict genus;   // the (primitive) genus verdicts that hold
  long search_nodes = 0;
};

struct AuditReport {
  enum class Verdict { verified_up_to_bound, counterexample, inconclusive };
  Verdict verdict = Verdict::verified_up_to_bound;
  std::size_t n = 0;
  Int bound;
  bool strict = false;
  std::optional<AuditCounterexample> counterexample;
  long enumerated = 0;    // candidates streamed
  long deduplicated = 0;  // skipped as repeats of a tested class
  long genus_pass = 0;    // candidates their genus (primitively) represents
  long tested = 0;        // global searches run
  long inconclusive = 0;  // Exhausted / PrecisionUnstable sub-decisions
};

struct AuditOptions {
  bool reverse_order = false;  // test-only knob; the verdict must not depend on it
  long global_effort = kDefaultGlobalEffort;
  long local_budget = kDefaultLocalNodeBudget;
  long candidate_cap = kDefaultCandidateCap;
};

/// (Strict) n-regularity audit of L against all n-ary candidates with
/// mu_n <= B: every candidate the genus (primitively) represents must be
/// (primitively) represented by L itself.
inline AuditReport audit_regularity(const Lattice& l, std::size_t n, const Int& bound,
                                    bool strict, const AuditOptions& opts = {}) {
  require(l.rank() >= n, errc::bad_input, "audit arity exceeds the lattice rank");
  require(l.rank() <= kMaxReductionRank, errc::rank_too_large, "audit rank cap is 8");
  AuditReport rep;
  rep.n = n;
  rep.bound = bound;
  rep.strict = strict;

  auto stream = enumerate_candidates(n, bound, opts.candidate_cap);
  if (opts.reverse_order) std::reverse(stream.begin(), stream.end());

  std::map<std::string, bool> seen;
  for (const auto& cand : stream) {
    ++rep.enumerated;
    // dedup key: minima profile, discriminant, canonical reduced gram
    std::ostringstream key;
    auto prof = successive_minima(cand);
    for (const auto& mu : prof.minima) key << mu << ',';
    key << '|' << cand.disc() << '|';
    auto [red, u] = minkowski_reduce(cand);
    (void)u;
    for (const auto& e : red.gram().a) key << e << ',';
    if (seen.count(key.str())) {
      ++rep.deduplicated;
      continue;
    }
    seen[key.str()] = true;

    try {
      GenusVerdict g = genus_represents(cand, l, strict, opts.local_budget);
      if (!g.represented) continue;
      ++rep.genus_pass;
      GlobalResult r = global_represents(cand, l, strict, opts.global_effort);
      ++rep.tested;
      if (r.kind == GlobalResult::Kind::found) continue;
      if (r.kind == GlobalResult::Kind::exhausted) {
        ++rep.inconclusive;
        continue;
      }
      rep.verdict = AuditReport::Verdict::counterexample;
      rep.counterexample = AuditCounterexample{cand, std::move(g), r.nodes};
      return rep;
    } catch (const error& e) {
      if (e.code() == errc::precision_unstable) {
        ++rep.inconclusive;
        continue;
      }
      throw;
    }
  }
  rep.verdict = rep.inconclusive ? AuditReport::Verdict::inconclusive
                                 : AuditReport::Verdict::verified_up_to_bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Minima-inequality harness

struct MinimaInequalityReport {
  // mu_{k+1}(L) >= a / d(M)^2, for a sublattice M of rank k < rank(L)
  bool lower_applicable = false;
  Rat lower_bound;          // a / d(M)^2
  Int lower_lhs;            // mu_{k+1}(L)
  bool lower_pass = false;
  // mu_{m+1}(L) <= max{mu_k(K), mu_m(M)}, C = 1 for max{k, m} <= 4
  bool upper_applicable = false;
  bool upper_primitive_flavor = false;  // hypotheses held in the primitive flavor
  Int upper_lhs;            // mu_{m+1}(L)
  Int upper_rhs;            // max{mu_k(K), mu_m(M)}
  bool upper_pass = false;
  std::string upper_skip_reason;
};

/// Mechanical check of the two minima inequalities on a concrete triple:
/// L, a sublattice embedding M, and a candidate K.
inline MinimaInequalityReport check_minima_inequalities(const Lattice& l,
                                                        const SublatticeEmbedding& e,
                                                        const Lattice& k) {
  MinimaInequalityReport rep;
  std::size_t rank_l = l.rank(), rank_m = e.sub_rank(), rank_k = k.rank();
  MinimaProfile prof_l = successive_minima(l);

  if (rank_m < rank_l) {
    auto [comp, a] = orthogonal_complement(e);
    if (a) {
      Lattice m = e.sublattice();
      rep.lower_applicable = true;
      rep.lower_bound = Rat(*a) / Rat(m.disc() * m.disc());
      rep.lower_lhs = prof_l.minima[rank_m];  // mu_{k+1}
      rep.lower_pass = Rat(rep.lower_lhs) >= rep.lower_bound;
    }
  }

  if (rank_m >= rank_l) {
    rep.upper_skip_reason = "M has full rank in L";
    return rep;
  }
  if (std::max(rank_k, rank_m) > 4) {
    rep.upper_skip_reason = "C = 1 needs max{rank K, rank M} <= 4";
    return rep;
  }
  Lattice m = e.sublattice();
  if (!is_primitive_sublattice(e)) {
    rep.upper_skip_reason = "M is not a primitive sublattice";
    return rep;
  }
  // plain flavor: K represented by L but not by M
  GlobalResult in_l = global_represents(k, l, false);
  bool plain_ok = false, prim_ok = false;
  if (in_l.kind == GlobalResult::Kind::found) {
    GlobalResult in_m = rank_k <= rank_m ? global_represents(k, m, false)
                                         : GlobalResult{GlobalResult::Kind::not_found, {}, 0};
    plain_ok = in_m.kind == GlobalResult::Kind::not_found;
  }
  if (!plain_ok) {
    GlobalResult in_lp = global_represents(k, l, true);
    if (in_lp.kind == GlobalResult::Kind::found) {
      GlobalResult in_mp = rank_k <= rank_m ? global_represents(k, m, true)
                                            : GlobalResult{GlobalResult::Kind::not_found, {}, 0};
      prim_ok = in_mp.kind == GlobalResult::Kind::not_found;
    }
  }
  if (!plain_ok && !prim_ok) {
    rep.upper_skip_reason = "K is not represented by L, or already lands in M";
    return rep;
  }
  rep.upper_applicable = true;
  rep.upper_primitive_flavor = !plain_ok;
  MinimaProfile prof_k = successive_minima(k);
  MinimaProfile prof_m = successive_minima(m);
  rep.upper_lhs = prof_l.minima[rank_m];  // mu_{m+1}
  rep.upper_rhs = std::max(prof_k.minima.back(), prof_m.minima.back());
  rep.upper_pass = rep.upper_lhs <= rep.upper_rhs;
  return rep;
}

}  // namespace qfkit

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qfkit/lattice.hpp"
#include "qfkit/local.hpp"
#include "qfkit/reduction.hpp"

namespace qfkit {

/// Hilbert symbol (a, b)_v for nonzero rationals.
inline int hilbert_symbol(const Rat& a, const Rat& b, const Place& v) {
  require(a != 0 && b != 0, errc::bad_input, "hilbert symbol of zero");
  if (v.infinite()) return (a < 0 && b < 0) ? -1 : 1;
  const Int& p = v.p;
  long alpha = ord_p(a, p), beta = ord_p(b, p);
  // unit parts as integers in the same square class
  Int ua = unit_part(numerator(a), p) * unit_part(denominator(a), p);
  Int ub = unit_part(numerator(b), p) * unit_part(denominator(b), p);
  if (p == 2) {
    auto eps = [](const Int& u) { return mod_reduce((u - 1) / 2, 2); };
    auto omega = [](const Int& u) { return mod_reduce((u * u - 1) / 8, 2); };
    Int e = eps(ua) * eps(ub) + Int(alpha) * omega(ub) + Int(beta) * omega(ua);
    return mod_reduce(e, 2) == 0 ? 1 : -1;
  }
  int s = 1;
  if ((alpha % 2) && (beta % 2) && legendre(-1, p) == -1) s = -s;
  if (beta % 2 && legendre(ua, p) == -1) s = -s;
  if (alpha % 2 && legendre(ub, p) == -1) s = -s;
  return s;
}

/// Hasse invariant prod_{i<j} (a_i, a_j)_v of a nondegenerate diagonal form.
inline int hasse_invariant(const std::vector<Rat>& diag, const Place& v) {
  int s = 1;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    require(diag[i] != 0, errc::bad_input, "degenerate diagonal form");
    for (std::size_t j = i + 1; j < diag.size(); ++j)
      s *= hilbert_symbol(diag[i], diag[j], v);
  }
  return s;
}

inline Rat space_disc(const std::vector<Rat>& diag) {
  Rat d(1);
  for (const auto& a : diag) d *= a;
  return d;
}

/// Isotropy of a nondegenerate quadratic space over Q_v.
inline bool is_isotropic_space(const std::vector<Rat>& diag, const Place& v) {
  std::size_t n = diag.size();
  require(n >= 1, errc::bad_input, "empty form");
  for (const auto& a : diag) require(a != 0, errc::bad_input, "degenerate diagonal form");
  if (v.infinite()) {
    bool pos = false, neg = false;
    for (const auto& a : diag) (a > 0 ? pos : neg) = true;
    return pos && neg;
  }
  Rat d = space_disc(diag);
  if (n == 1) return false;
  if (n == 2) return is_local_square(-d, v);
  if (n == 3) return hasse_invariant(diag, v) == hilbert_symbol(Rat(-1), -d, v);
  if (n == 4)
    return !(is_local_square(d, v) &&
             hasse_invariant(diag, v) == -hilbert_symbol(Rat(-1), Rat(-1), v));
  return true;  // rank >= 5 over Q_p
}

/// Congruence diagonalization of a positive definite symmetric matrix over Q.
inline std::vector<Rat> diagonalize_space(const IMat& gram) {
  RMat w = to_rmat(gram);
  std::size_t n = w.rows;
  std::vector<Rat> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(w(i, i) > 0, errc::not_positive_definite, "diagonalization pivot <= 0");
    d[i] = w(i, i);
    for (std::size_t r = i + 1; r < n; ++r) {
      Rat f = w(r, i) / w(i, i);
      if (f == 0) continue;
      for (std::size_t c = i; c < n; ++c) w(r, c) -= f * w(i, c);
      for (std::size_t c = i; c < n; ++c) w(c, r) -= f * w(c, i);
    }
  }
  return d;
}

inline std::vector<Rat> diagonalize_space(const Lattice& l) { return diagonalize_space(l.gram()); }

/// True iff the ambient Q_p-space of L is anisotropic.
inline bool is_anisotropic_lattice(const Lattice& l, const Int& p) {
  return !is_isotropic_space(diagonalize_space(l), Place::prime(p));
}

// ---------------------------------------------------------------------------
// Jordan decompositions

enum class BlockKind { unit, hyperbolic, anisotropic_binary };

struct JordanComponent {
  long scale = 0;          // p-adic order of the component's scale
  IMat unit_gram;          // gram divided by p^scale; p-unit determinant
  bool det_is_square = false;        // square class of det(unit_gram) in Z_p^*
  std::vector<BlockKind> blocks;     // p = 2: constituent block kinds
  std::size_t rank() const { return unit_gram.rows; }
};

struct JordanSplitting {
  Int p;
  std::vector<JordanComponent> components;  // strictly increasing scales
  IMat transform;                            // U with U G U^t = assembled mod p^precision
  long precision = 0;                        // the verified congruence level

  IMat assembled() const {
    std::size_t n = 0;
    for (const auto& c : components) n += c.rank();
    IMat g(n, n);
    std::size_t off = 0;
    for (const auto& c : components) {
      Int ps = pow_int(p, static_cast<unsigned long>(c.scale));
      for (std::size_t i = 0; i < c.rank(); ++i)
        for (std::size_t j = 0; j < c.rank(); ++j) g(off + i, off + j) = ps * c.unit_gram(i, j);
      off += c.rank();
    }
    return g;
  }
};

namespace detail {

inline long ord_or_cap(const Int& x, const Int& p, long cap) {
  if (x == 0) return cap;
  long o = ord_p(x, p);
  return o > cap ? cap : o;
}

}  // namespace detail

inline JordanSplitting jordan_decompose(const Lattice& l, const Int& p) {
  require(is_prime(p), errc::bad_input, "jordan decomposition needs a prime");
  require(l.rank() >= 1, errc::bad_input, "jordan decomposition of the empty lattice");
  std::size_t n = l.rank();
  Int d = l.disc();
  long od = ord_p(d, p);
  long prec = ord_p(Int(4) * d, p) + 3;  // the precision rule
  long work = prec + 2 * od + 4;         // headroom for the divisions below
  Int pn = pow_int(p, static_cast<unsigned long>(work));

  IMat w = l.gram();
  for (auto& x : w.a) x = mod_reduce(x, pn);
  IMat u = IMat::identity(n);

  auto row_sub = [&](std::size_t dst, const Int& f, std::size_t src) {
    for (std::size_t j = 0; j < n; ++j) {
      w(dst, j) = mod_reduce(w(dst, j) - f * w(src, j), pn);
      u(dst, j) = mod_reduce(u(dst, j) - f * u(src, j), pn);
    }
    for (std::size_t j = 0; j < n; ++j) w(j, dst) = mod_reduce(w(j, dst) - f * w(j, src), pn);
  };
  auto row_add = [&](std::size_t dst, std::size_t src) {
    for (std::size_t j = 0; j < n; ++j) {
      w(dst, j) = mod_reduce(w(dst, j) + w(src, j), pn);
      u(dst, j) = mod_reduce(u(dst, j) + u(src, j), pn);
    }
    for (std::size_t j = 0; j < n; ++j) w(j, dst) = mod_reduce(w(j, dst) + w(j, src), pn);
  };

  std::vector<bool> done(n, false);
  // pieces in construction order: (scale, indices)
  struct Piece {
    long scale;
    std::vector<std::size_t> idx;
  };
  std::vector<Piece> pieces;

  std::size_t remaining = n;
  while (remaining > 0) {
    long best = work;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (done[j]) continue;
        best = std::min(best, detail::ord_or_cap(w(i, j), p, work));
      }
    }
    require(best < work, errc::bad_input, "jordan precision exhausted");
    long s = best;
    Int ps = pow_int(p, static_cast<unsigned long>(s));

    // prefer a diagonal pivot of minimal order
    std::size_t piv = n;
    for (std::size_t i = 0; i < n && piv == n; ++i)
      if (!done[i] && detail::ord_or_cap(w(i, i), p, work) == s) piv = i;

    if (piv == n && p != 2) {
      // off-diagonal minimum; a row addition brings it to the diagonal
      for (std::size_t i = 0; i < n && piv == n; ++i) {
        if (done[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (done[j] || j == i) continue;
          if (detail::ord_or_cap(w(i, j), p, work) == s) {
            row_add(i, j);
            piv = i;
            break;
          }
        }
      }
    }

    if (piv != n) {
      Int upart = w(piv, piv) / ps;
      Int uinv = mod_inverse(upart, pn);
      for (std::size_t k = 0; k < n; ++k) {
        if (done[k] || k == piv || w(k, piv) == 0) continue;
        Int f = mod_reduce((w(k, piv) / ps) * uinv, pn);
        row_sub(k, f, piv);
      }
      done[piv] = true;
      pieces.push_back({s, {piv}});
      --remaining;
      continue;
    }

    // p = 2 with all diagonal orders > s: split an even 2x2 block
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n && bi == n; ++i) {
      if (done[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (done[j]) continue;
        if (detail::ord_or_cap(w(i, j), p, work) == s) {
          bi = i;
          bj = j;
          break;
        }
      }
    }
    require(bi != n, errc::bad_input, "jordan pivot search failed");
    Int a = w(bi, bi), b = w(bi, bj), c = w(bj, bj);
    Int detb = a * c - b * b;  // order exactly 2s
    Int detu = detb / (ps * ps);
    Int dinv = mod_inverse(mod_reduce(detu, pn), pn);
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k] || k == bi || k == bj) continue;
      Int r1 = w(k, bi), r2 = w(k, bj);
      // (x, y) = (r1, r2) * adj([[a,b],[b,c]]) / det
      Int x = (r1 * c - r2 * b) / (ps * ps);
      Int y = (r2 * a - r1 * b) / (ps * ps);
      x = mod_reduce(x * dinv, pn);
      y = mod_reduce(y * dinv, pn);
      if (x != 0) row_sub(k, x, bi);
      if (y != 0) row_sub(k, y, bj);
    }
    done[bi] = done[bj] = true;
    pieces.push_back({s, {bi, bj}});
    remaining -= 2;
  }

  // group pieces by scale
  std::map<long, std::vector<std::size_t>> by_scale;  // scale -> flat index list
  std::vector<std::size_t> order;
  for (auto& pc : pieces) {
    auto& v = by_scale[pc.scale];
    for (auto i : pc.idx) v.push_back(i);
  }

  JordanSplitting out;
  out.p = p;
  out.precision = prec;
  std::vector<std::size_t> perm;
  for (auto& [s, idx] : by_scale) {
    JordanComponent comp;
    comp.scale = s;
    Int ps = pow_int(p, static_cast<unsigned long>(s));
    comp.unit_gram = IMat(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) {
        Int e = mod_centered(w(idx[i], idx[j]), pn);
        require(e % ps == 0, errc::bad_input, "jordan scale division failed");
        comp.unit_gram(i, j) = e / ps;
      }
    // reduce entries for presentation; keep congruence at the verified level
    Int rp = pow_int(p, static_cast<unsigned long>(prec));
    for (auto& e : comp.unit_gram.a) e = mod_centered(e, rp);
    Int dc = det(comp.unit_gram);
    comp.det_is_square = is_local_square(Rat(dc), Place::prime(p));
    if (p == 2) {
      // reconstruct block kinds from the construction pieces at this scale
      for (const auto& pc : pieces) {
        if (pc.scale != s) continue;
        if (pc.idx.size() == 1) {
          comp.blocks.push_back(BlockKind::unit);
        } else {
          Int bd = (w(pc.idx[0], pc.idx[0]) * w(pc.idx[1], pc.idx[1]) -
                    w(pc.idx[0], pc.idx[1]) * w(pc.idx[0], pc.idx[1])) /
                   (ps * ps);
          comp.blocks.push_back(mod_reduce(bd, 8) == 7 ? BlockKind::hyperbolic
                                                       : BlockKind::anisotropic_binary);
        }
      }
    }
    out.components.push_back(std::move(comp));
    for (auto i : idx) perm.push_back(i);
  }

  // permute the transform so that rows follow the component order
  IMat up(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) up(i, j) = u(perm[i], j);
  out.transform = up;
  return out;
}

/// ord_p of the norm ideal of the last Jordan component.
inline long last_scale(const Lattice& l, const Int& p) {
  JordanSplitting js = jordan_decompose(l, p);
  const JordanComponent& c = js.components.back();
  Int g = 0;
  for (std::size_t i = 0; i < c.rank(); ++i) g = gcd_int(g, c.unit_gram(i, i));
  for (const auto& e : c.unit_gram.a) g = gcd_int(g, 2 * e);
  return c.scale + ord_p(g, p);
}

// ---------------------------------------------------------------------------
// Anisotropy exponents (Lemma-2.6-style norm gaps)

struct NormGap {
  long e = 0;        // minimal even bound: every primitive v has ord_p Q(v) < e
  long max_ord = 0;  // the attained maximum of ord_p Q over primitive vectors
};

/// For an anisotropic lattice at p (rank <= 4), the minimal even e such that
/// no primitive vector of K_p has ord_p Q(v) >= e. Certified by a breadth
/// search over primitive classes mod p^k, k up to ord_p(4 d(K)) + 3.
inline NormGap primitive_norm_gap_details(const Lattice& k, const Int& p) {
  require(k.rank() >= 1 && k.rank() <= 4, errc::bad_input, "norm gap needs rank 1..4");
  require(is_anisotropic_lattice(k, p), errc::isotropic_input,
          "norm gap requires an anisotropic lattice");
  long cap = ord_p(Int(4) * k.disc(), p) + 3;
  std::size_t n = k.rank();

  // frontier: primitive classes v mod p^lvl with Q(v) = 0 mod p^lvl
  std::vector<std::vector<Int>> frontier;
  {
    std::vector<Int> v(n, 0);
    while (true) {
      bool prim = false;
      for (const auto& x : v)
        if (mod_reduce(x, p) != 0) prim = true;
      if (prim && mod_reduce(k.q(v), p) == 0) frontier.push_back(v);
      std::size_t pos = 0;
      while (pos < n) {
        v[pos] += 1;
        if (v[pos] < p) break;
        v[pos] = 0;
        ++pos;
      }
      if (pos == n) break;
    }
  }
  long max_ord = 0;
  long lvl = 1;
  while (!frontier.empty()) {
    max_ord = lvl;
    require(lvl < cap, errc::bad_input, "norm gap exceeded its certified range");
    Int pl = pow_int(p, static_cast<unsigned long>(lvl));
    Int pl1 = pl * p;
    std::vector<std::vector<Int>> next;
    for (const auto& v : frontier) {
      std::vector<Int> w(n);
      std::vector<Int> dig(n, 0);
      while (true) {
        for (std::size_t i = 0; i < n; ++i) w[i] = v[i] + dig[i] * pl;
        if (mod_reduce(k.q(w), pl1) == 0) next.push_back(w);
        std::size_t pos = 0;
        while (pos < n) {
          dig[pos] += 1;
          if (dig[pos] < p) break;
          dig[pos] = 0;
          ++pos;
        }
        if (pos == n) break;
      }
    }
    frontier = std::move(next);
    ++lvl;
  }
  // max_ord is the largest k with a primitive class spanning Q = 0 mod p^k;
  // round up to the minimal even strict bound
  NormGap out;
  out.max_ord = max_ord;
  out.e = 2 * (max_ord / 2) + 2;
  return out;
}

inline long primitive_norm_gap(const Lattice& k, const Int& p) {
  return primitive_norm_gap_details(k, p).e;
}

// ---------------------------------------------------------------------------
// Characteristic primes of quinary spaces

/// The exact finite set {p : U_p anisotropic} for a positive definite
/// quaternary space with square discriminant; nonempty by reciprocity.
inline std::set<Int> anisotropic_primes_quaternary(const std::vector<Rat>& u) {
  require(u.size() == 4, errc::precondition_violation, "need a quaternary form");
  for (const auto& a : u)
    require(a > 0, errc::precondition_violation, "form must be positive definite");
  Rat d = space_disc(u);
  require(is_local_square(d, Place::real()) && is_perfect_square(numerator(d) * denominator(d)),
          errc::precondition_violation, "discriminant must be a rational square");
  std::set<Int> cand{2};
  for (const auto& a : u) {
    for (const auto& q : prime_factors(numerator(a))) cand.insert(q);
    for (const auto& q : prime_factors(denominator(a))) cand.insert(q);
  }
  std::set<Int> out;
  for (const auto& q : cand)
    if (!is_isotropic_space(u, Place::prime(q))) out.insert(q);
  require(!out.empty(), errc::precondition_violation,
          "no anisotropic prime found; input violated the preconditions");
  return out;
}

struct CharacteristicPrimeSet {
  std::vector<Rat> space;                 // the quinary diagonal form
  std::vector<Rat> square_disc_subspace;  // the quaternary complement
  std::set<Int> primes;
};

/// Characteristic primes of a positive definite quinary space: the anisotropy
/// primes of the square-discriminant quaternary complement of a vector
/// representing d(W).
inline CharacteristicPrimeSet characteristic_primes(const std::vector<Rat>& w,
                                                    const Int& search_cap = Int(1) << 20) {
  require(w.size() == 5, errc::bad_input, "need a quinary form");
  for (const auto& a : w) require(a > 0, errc::bad_input, "form must be positive definite");
  // integral model: x_i -> x_i / den_i rescales each variable
  IMat g(5, 5);
  for (std::size_t i = 0; i < 5; ++i) g(i, i) = numerator(w[i]) * denominator(w[i]);
  Lattice lw = Lattice::from_gram(g);
  Int d = lw.disc();

  Int bound = 0;
  for (std::size_t i = 0; i < 5; ++i) bound = std::max(bound, g(i, i));
  std::optional<std::vector<Int>> z;
  while (!z) {
    for (const auto& sv : short_vectors(lw, bound)) {
      if (is_perfect_square(sv.value * d)) {
        z = sv.coords;
        break;
      }
    }
    if (!z) {
      bound *= 2;
      require(bound <= search_cap, errc::search_exhausted,
              "no vector representing d(W) below the configured bound");
    }
  }

  IMat zrow(1, 5);
  for (std::size_t i = 0; i < 5; ++i) zrow(0, i) = (*z)[i];
  auto [comp, a] = orthogonal_complement(SublatticeEmbedding(lw, zrow));
  (void)a;
  require(comp.sub_rank() == 4, errc::bad_input, "complement construction failed");
  CharacteristicPrimeSet out;
  out.space = w;
  out.square_disc_subspace = diagonalize_space(comp.sub_gram());
  out.primes = anisotropic_primes_quaternary(out.square_disc_subspace);
  return out;
}

// ---------------------------------------------------------------------------
// Norm image

/// True iff Q(L_p) = 2 Z_p for a normalized lattice. Odd p: decided from the
/// Jordan splitting. p = 2: decided by the finite representation oracle on
/// ord-1 and ord-2 targets of every unit square class.
inline bool norm_image_full(const Lattice& l, const Int& p) {
  require(is_normalized(l), errc::not_normalized, "norm_image_full needs a normalized lattice");
  if (p != 2) {
    JordanSplitting js = jordan_decompose(l, p);
    std::size_t r0 = 0, r1 = 0;
    bool comp0_isotropic = false;
    for (const auto& c : js.components) {
      if (c.scale == 0) {
        r0 = c.rank();
        if (r0 == 2) {
          Int dc = det(c.unit_gram);
          comp0_isotropic = is_local_square(Rat(-dc), Place::prime(p));
        }
      }
      if (c.scale == 1) r1 = c.rank();
    }
    if (r0 >= 3) return true;
    if (r0 == 2 && (comp0_isotropic || r1 >= 2)) return true;
    return false;
  }
  // p = 2: all of 2 Z_2 is hit iff both 2u and 4u are represented for every
  // unit class u mod 8 (doubling a vector then covers the higher orders)
  long cap = ord_p(Int(4) * l.disc() * 7 * 4, Int(2)) + 3;
  for (Int u : {1, 3, 5, 7}) {
    for (Int t : {2 * u, 4 * u}) {
      IMat gm(1, 1);
      gm(0, 0) = t;
      LocalSearch r = local_search(gm, l.gram(), 2, false, cap + 4);
      require(r.verdict != LocalSearch::Verdict::stuck, errc::precision_unstable,
              "norm image oracle did not stabilize");
      if (r.verdict == LocalSearch::Verdict::no) return false;
    }
  }
  return true;
}

}  // namespace qfkit

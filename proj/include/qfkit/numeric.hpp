#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "qfkit/error.hpp"

namespace qfkit {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline Int gcd_all(const std::vector<Int>& xs) {
  Int g = 0;
  for (const auto& x : xs) g = gcd_int(g, x);
  return g;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

/// floor(sqrt(a)) for a >= 0.
inline Int isqrt(const Int& a) {
  require(a >= 0, errc::bad_input, "isqrt of negative");
  return boost::multiprecision::sqrt(a);
}

inline bool is_perfect_square(const Int& a) {
  if (a < 0) return false;
  Int s = isqrt(a);
  return s * s == a;
}

/// p-adic valuation of a nonzero integer.
inline long ord_p(Int a, const Int& p) {
  require(a != 0, errc::bad_input, "valuation of zero");
  long v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

inline long ord_p(const Rat& a, const Int& p) {
  return ord_p(numerator(a), p) - ord_p(denominator(a), p);
}

/// a / p^ord_p(a) with sign kept.
inline Int unit_part(Int a, const Int& p) {
  while (a % p == 0) a /= p;
  return a;
}

inline Int mod_reduce(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

/// Representative in (-m/2, m/2].
inline Int mod_centered(const Int& a, const Int& m) {
  Int r = mod_reduce(a, m);
  if (2 * r > m) r -= m;
  return r;
}

inline Int mod_inverse(const Int& a, const Int& m) {
  // extended euclid
  Int t = 0, nt = 1, r = m, nr = mod_reduce(a, m);
  while (nr != 0) {
    Int q = r / nr;
    Int tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  require(r == 1, errc::bad_input, "not invertible");
  return mod_reduce(t, m);
}

/// Legendre symbol (a|p) for odd prime p; 0 when p | a.
inline int legendre(const Int& a, const Int& p) {
  Int r = mod_reduce(a, p);
  if (r == 0) return 0;
  Int e = (p - 1) / 2;
  Int s = boost::multiprecision::powm(r, e, p);
  if (s == 1) return 1;
  return -1;
}

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<Int> prime_factors(Int n) {
  std::vector<Int> ps;
  n = abs_int(n);
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

inline Int squarefree_part(Int n) {
  require(n != 0, errc::bad_input, "squarefree part of zero");
  Int sign = n < 0 ? -1 : 1;
  n = abs_int(n);
  Int out = 1;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      int v = 0;
      while (n % d == 0) {
        n /= d;
        ++v;
      }
      if (v & 1) out *= d;
    }
  }
  return sign * out * n;
}

/// A place of Q: a finite prime or the real place.
struct Place {
  Int p;  // 0 encodes the real place
  bool infinite() const { return p == 0; }
  static Place real() { return Place{0}; }
  static Place prime(const Int& q) { return Place{q}; }
};

/// True iff the nonzero rational a is a square in the completion at v.
inline bool is_local_square(const Rat& a, const Place& v) {
  require(a != 0, errc::bad_input, "square class of zero");
  if (v.infinite()) return a > 0;
  const Int& p = v.p;
  Int n = numerator(a) * denominator(a);  // same square class as a
  long o = ord_p(n, p);
  if (o % 2 != 0) return false;
  Int u = unit_part(n, p);
  if (p == 2) return mod_reduce(u, 8) == 1;
  return legendre(u, p) == 1;
}

}  // namespace qfkit

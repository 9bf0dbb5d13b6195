#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qfkit/padic.hpp"

namespace qfkit {

namespace detail {

/// Lambda_{2p} of an even integral lattice as rows of a full-rank sublattice
/// basis. Two exact kernel computations instead of coset enumeration:
/// the radical of the gram mod p, and for p = 2 additionally the kernel of
/// the mod-2 linear functional Q/2 on that radical.
inline IMat lambda_rows(const IMat& gram, const Int& p) {
  std::size_t n = gram.rows;
  IMat ker = left_kernel_mod_p(gram, p);  // rows x with x * G = 0 mod p
  IMat lifts;
  if (p == 2) {
    std::vector<Int> phi(ker.rows);
    for (std::size_t i = 0; i < ker.rows; ++i) {
      Int q = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) q += ker(i, a) * gram(a, b) * ker(i, b);
      require(q % 2 == 0, errc::bad_input, "lattice is not even");
      phi[i] = mod_reduce(q / 2, 2);
    }
    std::size_t piv = ker.rows;
    for (std::size_t i = 0; i < ker.rows; ++i)
      if (phi[i] == 1) {
        piv = i;
        break;
      }
    if (piv == ker.rows) {
      lifts = ker;
    } else {
      lifts = IMat(ker.rows - 1, n);
      std::size_t r = 0;
      for (std::size_t i = 0; i < ker.rows; ++i) {
        if (i == piv) continue;
        for (std::size_t j = 0; j < n; ++j)
          lifts(r, j) = phi[i] == 1 ? mod_reduce(ker(i, j) + ker(piv, j), 2) : ker(i, j);
        ++r;
      }
    }
  } else {
    lifts = ker;  // x in the radical already has Q(x) = B(x,x) = 0 mod p
  }
  // basis of the preimage: lifts together with p L
  IMat stack(lifts.rows + n, n);
  for (std::size_t i = 0; i < lifts.rows; ++i)
    for (std::size_t j = 0; j < n; ++j) stack(i, j) = lifts(i, j);
  for (std::size_t i = 0; i < n; ++i) stack(lifts.rows + i, i) = p;
  return hnf_basis(stack);
}

}  // namespace detail

/// Watson sublattice Lambda_m(L) = {x : Q(x+z) = Q(z) mod m for all z in L},
/// m = 2p for a prime p (m = 4 covers p = 2). L must be normalized.
inline SublatticeEmbedding lambda(const Lattice& l, const Int& m) {
  require(m > 0 && m % 2 == 0 && is_prime(m / 2), errc::unsupported_modulus,
          "modulus must be 4 or 2p for a prime p");
  require(is_normalized(l), errc::not_normalized, "lambda needs a normalized lattice");
  Int p = m / 2;
  return SublatticeEmbedding(l, detail::lambda_rows(l.gram(), p));
}

struct WatsonStep {
  Int p;
  Rat r;             // 1/p or 1/p^2
  Lattice before;    // normalized input
  Lattice after;     // normalized output
};

struct WatsonSequence {
  Int p;
  std::vector<WatsonStep> steps;
};

/// One normalized Watson step: Lambda_{2p} followed by the unique rescale back
/// to norm 2Z.
inline std::pair<Lattice, WatsonStep> lambda_normalized(const Lattice& l, const Int& p) {
  SublatticeEmbedding e = lambda(l, 2 * p);
  Lattice sub = e.sublattice();
  auto [norm, r] = normalize(sub);
  require(r == Rat(1, p) || r == Rat(1) / Rat(p * p), errc::bad_input,
          "watson step produced an inadmissible scaling factor");
  WatsonStep step{p, r, l, norm};
  return {norm, step};
}

struct DriveResult {
  WatsonSequence sequence;
  Lattice result;
  bool isotropic_refinement_applicable = false;  // L_p isotropic as a space
  bool hyperbolic_split_achieved = false;        // result_p split by H
};

/// Iterate normalized Watson steps at p until Q(L_p) = 2 Z_p.
/// The default cap is 2 ord_p(d(L)) + 4.
inline DriveResult drive_to_full_norm(const Lattice& l, const Int& p,
                                      std::optional<long> cap_opt = std::nullopt) {
  require(is_normalized(l), errc::not_normalized, "drive needs a normalized lattice");
  long cap = cap_opt ? *cap_opt : 2 * ord_p(l.disc(), p) + 4;
  DriveResult out;
  out.sequence.p = p;
  out.result = l;
  Lattice cur = l;
  long steps = 0;
  while (!norm_image_full(cur, p)) {
    require(steps < cap, errc::cap_exceeded, "watson sequence cap reached");
    auto [next, step] = lambda_normalized(cur, p);
    out.sequence.steps.push_back(step);
    cur = next;
    ++steps;
  }
  out.result = cur;
  out.isotropic_refinement_applicable = !is_anisotropic_lattice(l, p);
  if (out.isotropic_refinement_applicable) {
    // report whether the result is split by the hyperbolic plane: H is
    // unimodular, so splitting is the same as primitive local representation
    IMat h{{Int(0), Int(1)}, {Int(1), Int(0)}};
    long cap_h = ord_p(Int(4) * cur.disc(), p) + 3;
    LocalSearch s = local_search(h, cur.gram(), p, true, cap_h + 4);
    out.hyperbolic_split_achieved = s.verdict == LocalSearch::Verdict::yes;
  }
  return out;
}

/// Lemma-3.3(b) transport: the image of Lambda_{2p}(M) inside Lambda_{2p}(L),
/// coordinates rewritten in the basis of Lambda_{2p}(L).
inline SublatticeEmbedding transform_sublattice(const SublatticeEmbedding& e, const Int& p) {
  const Lattice& l = e.ambient;
  require(is_normalized(l), errc::not_normalized, "ambient must be normalized");
  bool hyp = (p == 2 && scale_ideal(l) == 2) || !norm_image_full(l, p);
  require(hyp, errc::hypothesis_unmet,
          "need s(L) = 2Z at p = 2, or Q(L_p) a proper subset of 2Z_p");

  IMat lam_m = detail::lambda_rows(e.sub_gram(), p);  // rows in the basis of M
  IMat lam_l = detail::lambda_rows(l.gram(), p);      // rows in the basis of L
  IMat image = lam_m * e.coords;                       // sigma(Lambda(M)) in L
  RMat x = solve_right(to_rmat(image), to_rmat(lam_l));
  IMat xi = to_imat(x);  // integral because sigma(Lambda(M)) lies in Lambda(L)
  Lattice ambient = Lattice::from_gram(lam_l * l.gram() * lam_l.transposed());
  return SublatticeEmbedding(ambient, xi);
}

}  // namespace qfkit

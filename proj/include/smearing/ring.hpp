#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace smearing {

// Canonical residue representation is [0, q) everywhere outside the Gaussian
// sampler; residues fit 32 bits so products never overflow 64-bit arithmetic.
using Residue = std::uint64_t;

inline Residue add_mod(Residue a, Residue b, Residue q) {
  const Residue s = a + b;
  return s >= q ? s - q : s;
}

inline Residue sub_mod(Residue a, Residue b, Residue q) { return a >= b ? a - b : a + q - b; }

inline Residue mul_mod(Residue a, Residue b, Residue q) { return (a * b) % q; }

// Horner evaluation of a coefficient vector (ascending powers) at x, mod q.
Residue eval_poly(const std::vector<Residue>& coeffs, Residue x, Residue q);

// Frame of an instance of the quotient ring P_q = Z_q[x]/(f(x)) together with
// a chosen root gamma of f mod q (the evaluation point of the smearing map).
struct RingParams {
  Residue q;
  std::size_t n;
  std::vector<Residue> f_coeffs;  // ascending powers, length n+1, monic
  Residue gamma;

  // Validates q >= 2, n >= 1, coefficient range, monicity and f(gamma) = 0.
  RingParams(Residue q, std::size_t n, std::vector<Residue> f_coeffs, Residue gamma);
};

// Element of P_q as power-basis coefficients c0..c_{n-1}, each in [0, q).
struct PolyModF {
  std::vector<Residue> coeffs;

  PolyModF() = default;
  explicit PolyModF(std::vector<Residue> c) : coeffs(std::move(c)) {}
  static PolyModF zero(std::size_t n) { return PolyModF(std::vector<Residue>(n, 0)); }

  std::size_t size() const { return coeffs.size(); }
  bool operator==(const PolyModF&) const = default;
};

// Coefficient-wise sum mod q.
PolyModF ring_add(const PolyModF& a, const PolyModF& b, const RingParams& params);

// Schoolbook product reduced modulo f(x) and q.
PolyModF ring_mul(const PolyModF& a, const PolyModF& b, const RingParams& params);

// The smearing map pi_gamma: g(x) -> g(gamma) mod q. A ring homomorphism
// P_q -> Z_q whose kernel is the ideal (x - gamma).
Residue smear_map(const PolyModF& g, const RingParams& params);

// All roots of f mod q in ascending order, by exhaustive scan over Z_q.
// An empty result is a valid return; the caller decides whether the
// instance is usable without one.
std::vector<Residue> find_roots(const std::vector<Residue>& f_coeffs, Residue q);

// Smallest r >= 1 with gamma^r = 1 mod q; divides q-1 for prime q.
std::uint64_t mult_order(Residue gamma, Residue q);

}  // namespace smearing

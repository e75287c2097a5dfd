#pragma once

#include <cstdint>
#include <vector>

#include "smearing/ring.hpp"
#include "smearing/rng.hpp"

namespace smearing {

// Probability vector over Z_q = {0,...,q-1}. Entries are non-negative and
// sum to 1 within 1e-9; q = 1 is allowed (single point of mass 1).
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> probs);

  static ProbDist uniform(std::uint64_t q);
  static ProbDist point_mass(std::uint64_t q, std::uint64_t k);

  std::uint64_t q() const { return static_cast<std::uint64_t>(probs_.size()); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const ProbDist&) const = default;

 private:
  std::vector<double> probs_;
};

// Width of the error Gaussian. Exactly one of sigma/beta is given; beta is
// relative to the modulus, sigma = beta / sqrt(2*pi) * q.
class GaussianParams {
 public:
  static GaussianParams from_sigma(double sigma);
  static GaussianParams from_beta(double beta);

  double sigma(std::uint64_t q) const;
  bool from_beta_form() const { return is_beta_; }
  double raw_value() const { return value_; }

 private:
  GaussianParams(double value, bool is_beta) : value_(value), is_beta_(is_beta) {}
  double value_;
  bool is_beta_;
};

// Discrete Gaussian over Z_q: probs[j] proportional to rho(lift(j)) where
// lift(j) is the centered representative in (-q/2, q/2] and
// rho(x) = exp(-pi * x^2 / (2 sigma^2)). Note the pi in the exponent: this
// kernel is narrower than the standard Gaussian at equal sigma.
ProbDist discrete_gaussian_zq(std::uint64_t q, const GaussianParams& params);

// Coefficients of c(x^a) mod x^q - 1: out[a*i mod q] accumulates c[i].
// For a coprime to q this is an index permutation; a = 0 collapses all mass
// onto index 0.
ProbDist pow_substitute(const ProbDist& c, std::uint64_t a);

// Polynomial product mod x^q - 1, i.e. the distribution of a sum of two
// independent draws mod q. Renormalized to damp floating-point drift.
ProbDist cyclic_convolve(const ProbDist& c, const ProbDist& d);

// Distribution of e(gamma) = e_0 + e_1 gamma + ... + e_{n-1} gamma^{n-1} mod q
// when the coefficients e_i are iid with distribution c:
// c * c(x^gamma) * c(x^{gamma^2}) * ... * c(x^{gamma^{n-1}}) mod x^q - 1.
ProbDist mapped_error_dist(const ProbDist& c, const RingParams& params);

// Inverse-CDF sampler over a fixed distribution; cheap repeated draws.
class CdfSampler {
 public:
  explicit CdfSampler(const ProbDist& dist);
  Residue draw(Rng& rng) const;

 private:
  std::vector<double> cum_;
  Residue last_positive_;
};

// count independent draws, deterministic per seed.
std::vector<Residue> sample(const ProbDist& dist, std::size_t count, std::uint64_t seed);

}  // namespace smearing

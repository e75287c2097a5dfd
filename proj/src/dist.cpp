#include "smearing/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace smearing {

namespace {

constexpr double kSumTolerance = 1e-9;

std::vector<double> normalized(std::vector<double> v) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s <= 0.0) throw std::domain_error("ProbDist: total mass must be positive");
  for (double& x : v) x /= s;
  return v;
}

}  // namespace

ProbDist::ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("ProbDist: q must be >= 1");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("ProbDist: entries must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("ProbDist: entries must sum to 1");
  }
}

ProbDist ProbDist::uniform(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("ProbDist: q must be >= 1");
  return ProbDist(std::vector<double>(q, 1.0 / static_cast<double>(q)));
}

ProbDist ProbDist::point_mass(std::uint64_t q, std::uint64_t k) {
  if (k >= q) throw std::invalid_argument("ProbDist: point mass index out of range");
  std::vector<double> v(q, 0.0);
  v[k] = 1.0;
  return ProbDist(std::move(v));
}

GaussianParams GaussianParams::from_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("GaussianParams: sigma must be > 0");
  return GaussianParams(sigma, false);
}

GaussianParams GaussianParams::from_beta(double beta) {
  if (!(beta > 0.0)) throw std::domain_error("GaussianParams: beta must be > 0");
  return GaussianParams(beta, true);
}

double GaussianParams::sigma(std::uint64_t q) const {
  if (!is_beta_) return value_;
  return value_ / std::sqrt(2.0 * std::numbers::pi) * static_cast<double>(q);
}

ProbDist discrete_gaussian_zq(std::uint64_t q, const GaussianParams& params) {
  if (q < 2) throw std::invalid_argument("discrete_gaussian_zq: q must be >= 2");
  const double sigma = params.sigma(q);
  if (!(sigma > 0.0)) throw std::domain_error("discrete_gaussian_zq: sigma must be > 0");

  std::vector<double> v(q);
  for (std::uint64_t j = 0; j < q; ++j) {
    // centered representative in (-q/2, q/2]
    const double lift = (j <= q / 2) ? static_cast<double>(j)
                                     : static_cast<double>(j) - static_cast<double>(q);
    v[j] = std::exp(-std::numbers::pi * lift * lift / (2.0 * sigma * sigma));
  }
  return ProbDist(normalized(std::move(v)));
}

ProbDist pow_substitute(const ProbDist& c, std::uint64_t a) {
  const std::uint64_t q = c.q();
  if (a >= q) throw std::invalid_argument("pow_substitute: exponent multiplier must lie in [0, q)");
  std::vector<double> out(q, 0.0);
  for (std::uint64_t i = 0; i < q; ++i) {
    out[(a * i) % q] += c[i];
  }
  return ProbDist(std::move(out));
}

ProbDist cyclic_convolve(const ProbDist& c, const ProbDist& d) {
  const std::uint64_t q = c.q();
  if (d.q() != q) throw std::invalid_argument("cyclic_convolve: distributions have different q");
  std::vector<double> out(q, 0.0);
  for (std::uint64_t i = 0; i < q; ++i) {
    const double ci = c[i];
    if (ci == 0.0) continue;
    for (std::uint64_t k = 0; k < q; ++k) {
      std::uint64_t j = i + k;
      if (j >= q) j -= q;
      out[j] += ci * d[k];
    }
  }
  return ProbDist(normalized(std::move(out)));
}

ProbDist mapped_error_dist(const ProbDist& c, const RingParams& params) {
  if (c.q() != params.q) {
    throw std::invalid_argument("mapped_error_dist: distribution q does not match ring q");
  }
  ProbDist result = c;
  Residue power = params.gamma % params.q;
  for (std::size_t i = 1; i < params.n; ++i) {
    result = cyclic_convolve(result, pow_substitute(c, power));
    power = mul_mod(power, params.gamma, params.q);
  }
  return result;
}

CdfSampler::CdfSampler(const ProbDist& dist) : cum_(dist.probs().size()), last_positive_(0) {
  double acc = 0.0;
  for (std::size_t i = 0; i < cum_.size(); ++i) {
    acc += dist[i];
    cum_[i] = acc;
    if (dist[i] > 0.0) last_positive_ = static_cast<Residue>(i);
  }
}

Residue CdfSampler::draw(Rng& rng) const {
  const double u = rng.next_double();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) return last_positive_;  // u above the (rounded) total mass
  return static_cast<Residue>(it - cum_.begin());
}

std::vector<Residue> sample(const ProbDist& dist, std::size_t count, std::uint64_t seed) {
  const CdfSampler sampler(dist);
  Rng rng(seed);
  std::vector<Residue> out(count);
  for (auto& r : out) r = sampler.draw(rng);
  return out;
}

}  // namespace smearing

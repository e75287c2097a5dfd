#include "smearing/attack.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smearing {

PlweInstance::PlweInstance(RingParams params_, PolyModF secret_, GaussianParams gaussian_)
    : params(std::move(params_)), secret(std::move(secret_)), gaussian(gaussian_) {
  if (secret.size() != params.n) {
    throw std::invalid_argument("PlweInstance: secret has wrong degree");
  }
  for (Residue c : secret.coeffs) {
    if (c >= params.q) throw std::invalid_argument("PlweInstance: secret not reduced mod q");
  }
}

PlweInstance PlweInstance::with_random_secret(RingParams params, GaussianParams gaussian,
                                              std::uint64_t seed) {
  Rng rng(seed);
  PolyModF s = PolyModF::zero(params.n);
  for (auto& c : s.coeffs) c = rng.below(params.q);
  return PlweInstance(std::move(params), std::move(s), gaussian);
}

DecisionParams::DecisionParams(std::size_t m_, std::uint64_t n_trials_, double alpha_err_,
                               double beta_err_)
    : m(m_), n_trials(n_trials_), alpha_err(alpha_err_), beta_err(beta_err_) {
  if (n_trials == 0 || n_trials % 2 == 0) {
    throw std::invalid_argument("DecisionParams: n_trials must be odd and positive");
  }
}

std::vector<Sample> gen_plwe_samples(const PlweInstance& instance, std::size_t count,
                                     std::uint64_t seed) {
  const RingParams& params = instance.params;
  const CdfSampler error(discrete_gaussian_zq(params.q, instance.gaussian));
  Rng rng(seed);

  std::vector<Sample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PolyModF a = PolyModF::zero(params.n);
    for (auto& c : a.coeffs) c = rng.below(params.q);
    PolyModF e = PolyModF::zero(params.n);
    for (auto& c : e.coeffs) c = error.draw(rng);
    PolyModF b = ring_add(ring_mul(a, instance.secret, params), e, params);
    out.push_back(Sample{std::move(a), std::move(b)});
  }
  return out;
}

std::vector<Sample> gen_uniform_samples(const RingParams& params, std::size_t count,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PolyModF a = PolyModF::zero(params.n);
    for (auto& c : a.coeffs) c = rng.below(params.q);
    PolyModF b = PolyModF::zero(params.n);
    for (auto& c : b.coeffs) c = rng.below(params.q);
    out.push_back(Sample{std::move(a), std::move(b)});
  }
  return out;
}

std::vector<Residue> residuals(std::span<const Sample> samples, const RingParams& params,
                               Residue g) {
  if (g >= params.q) throw std::invalid_argument("residuals: guess must lie in [0, q)");
  std::vector<Residue> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) {
    const Residue bg = smear_map(s.b, params);
    const Residue ag = smear_map(s.a, params);
    out.push_back(sub_mod(bg, mul_mod(g, ag, params.q), params.q));
  }
  return out;
}

namespace {

// True when the m residues starting at `begin` cover all of Z_q.
bool batch_smears(std::span<const Residue> batch, std::uint64_t q,
                  std::vector<std::uint8_t>& seen) {
  std::fill(seen.begin(), seen.end(), 0);
  std::uint64_t covered = 0;
  for (Residue r : batch) {
    if (!seen[r]) {
      seen[r] = 1;
      if (++covered == q) return true;
    }
  }
  return covered == q;
}

}  // namespace

DistDecision smearing_decision(std::span<const Residue> residues, std::uint64_t q,
                               const DecisionParams& dp) {
  const std::size_t needed = dp.m * static_cast<std::size_t>(dp.n_trials);
  if (residues.size() < needed) {
    throw InputExhausted("smearing_decision: needs " + std::to_string(needed) +
                         " residues, got " + std::to_string(residues.size()));
  }
  std::vector<std::uint8_t> seen(q);
  std::uint64_t smeared = 0;
  for (std::uint64_t t = 0; t < dp.n_trials; ++t) {
    smeared += batch_smears(residues.subspan(t * dp.m, dp.m), q, seen);
  }
  return 2 * smeared > dp.n_trials ? DistDecision::Uniform : DistDecision::NonUniform;
}

std::vector<Sample> FixedSampleSource::draw(std::size_t count, std::uint64_t /*cell_seed*/) {
  if (pool_.size() - cursor_ < count) {
    throw InputExhausted("sample pool exhausted: " + std::to_string(pool_.size()) +
                         " samples supplied, " + std::to_string(cursor_ + count) +
                         " needed so far");
  }
  std::vector<Sample> out(pool_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                          pool_.begin() + static_cast<std::ptrdiff_t>(cursor_ + count));
  cursor_ += count;
  return out;
}

AttackReport smearing_attack(SampleSource& source, const RingParams& params,
                             const DecisionParams& dp, std::uint64_t seed) {
  const std::uint64_t q = params.q;
  AttackReport report{Verdict::Inconclusive, std::vector<std::uint64_t>(q, 0), std::nullopt, dp,
                      seed};

  std::vector<std::uint8_t> seen(q);
  for (Residue g = 0; g < q; ++g) {
    for (std::uint64_t t = 0; t < dp.n_trials; ++t) {
      const std::vector<Sample> batch = source.draw(dp.m, derive_seed(seed, g, t));
      const std::vector<Residue> res = residuals(batch, params, g);
      report.per_guess_smear_counts[g] += batch_smears(res, q, seen);
    }
  }

  std::vector<Residue> non_uniform;
  for (Residue g = 0; g < q; ++g) {
    if (2 * report.per_guess_smear_counts[g] < dp.n_trials) non_uniform.push_back(g);
  }
  if (non_uniform.empty()) {
    report.verdict = Verdict::Uniform;
  } else if (non_uniform.size() == 1) {
    report.verdict = Verdict::Plwe;
    report.recovered_s_gamma = non_uniform.front();
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

Verdict gamma1_attack(std::span<const Sample> samples, const RingParams& params, double sigma,
                      double threshold_multiplier) {
  const std::uint64_t q = params.q;
  if (eval_poly(params.f_coeffs, 1, q) != 0) {
    throw std::invalid_argument("gamma1_attack: 1 is not a root of f mod q");
  }
  if (!(sigma > 0.0)) throw std::domain_error("gamma1_attack: sigma must be > 0");

  const double window =
      threshold_multiplier * std::sqrt(static_cast<double>(params.n)) * sigma;

  // b(1) and a(1) once per sample
  std::vector<Residue> a1, b1;
  a1.reserve(samples.size());
  b1.reserve(samples.size());
  for (const Sample& s : samples) {
    a1.push_back(eval_poly(s.a.coeffs, 1, q));
    b1.push_back(eval_poly(s.b.coeffs, 1, q));
  }

  std::vector<Residue> passing;
  for (Residue g = 0; g < q; ++g) {
    bool all_within = true;
    for (std::size_t i = 0; i < a1.size(); ++i) {
      const Residue r = sub_mod(b1[i], mul_mod(g, a1[i], q), q);
      const double centered = (r <= q / 2) ? static_cast<double>(r)
                                           : static_cast<double>(r) - static_cast<double>(q);
      if (std::abs(centered) > window) {
        all_within = false;
        break;
      }
    }
    if (all_within) {
      passing.push_back(g);
      if (passing.size() > 1) break;
    }
  }

  if (passing.empty()) return Verdict::Uniform;
  if (passing.size() == 1) return Verdict::Plwe;
  return Verdict::Inconclusive;
}

SuccessProbs success_probs(double alpha_err, double beta_err, std::uint64_t q) {
  if (!(alpha_err >= 0.0 && alpha_err < 1.0 && beta_err >= 0.0 && beta_err < 1.0)) {
    throw std::domain_error("success_probs: error rates must lie in [0, 1)");
  }
  const double a = alpha_err;
  const double b = beta_err;
  const double qd = static_cast<double>(q);
  SuccessProbs out{};
  out.given_uniform = (1.0 - a) / (1.0 + (qd - 1.0) * a);
  out.given_plwe = (1.0 - a - b + qd * a * b) / (1.0 - a + (qd - 1.0) * a * b);
  return out;
}

}  // namespace smearing

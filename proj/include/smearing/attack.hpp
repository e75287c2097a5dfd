#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "smearing/dist.hpp"
#include "smearing/ring.hpp"

namespace smearing {

// Thrown when a sample or residue source cannot supply the amount of data a
// decision or attack requires.
class InputExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Verdict { Uniform, Plwe, Inconclusive };
enum class DistDecision { Uniform, NonUniform };

// A fixed instance: ring frame, secret s, and error width.
struct PlweInstance {
  RingParams params;
  PolyModF secret;
  GaussianParams gaussian;

  PlweInstance(RingParams params, PolyModF secret, GaussianParams gaussian);

  // Secret drawn uniformly from P_q, deterministic per seed.
  static PlweInstance with_random_secret(RingParams params, GaussianParams gaussian,
                                         std::uint64_t seed);
};

// One pair (a, b) in P_q x P_q; b = a*s + e for instance samples, or uniform.
struct Sample {
  PolyModF a;
  PolyModF b;

  bool operator==(const Sample&) const = default;
};

// Majority-vote decision parameters: m draws per trial, N (odd) trials, and
// the Chebyshev error targets the pair was chosen for. m below q is legal
// but useless (no trial can ever cover Z_q).
struct DecisionParams {
  std::size_t m;
  std::uint64_t n_trials;
  double alpha_err;
  double beta_err;

  DecisionParams(std::size_t m, std::uint64_t n_trials, double alpha_err = 0.05,
                 double beta_err = 0.05);
};

struct AttackReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::uint64_t> per_guess_smear_counts;  // smearing trials out of N, per guess
  std::optional<Residue> recovered_s_gamma;
  DecisionParams params_used;
  std::uint64_t seed = 0;
};

// count samples (a, b = a*s + e): a uniform over P_q, e coefficient-wise from
// the discrete Gaussian. Deterministic per seed.
std::vector<Sample> gen_plwe_samples(const PlweInstance& instance, std::size_t count,
                                     std::uint64_t seed);

// count samples with both a and b uniform over P_q. Deterministic per seed.
std::vector<Sample> gen_uniform_samples(const RingParams& params, std::size_t count,
                                        std::uint64_t seed);

// Per-sample residue (b(gamma) - g * a(gamma)) mod q, order preserving.
// At the correct guess g = s(gamma) on instance samples this is exactly
// e(gamma).
std::vector<Residue> residuals(std::span<const Sample> samples, const RingParams& params,
                               Residue g);

// Majority vote over n_trials batches of m residues each: Uniform iff
// strictly more than half of the batches cover all of Z_q. Consumes the
// first m * n_trials residues; throws InputExhausted on shortfall.
DistDecision smearing_decision(std::span<const Residue> residues, std::uint64_t q,
                               const DecisionParams& dp);

// Supplies fresh samples for each (guess, trial) cell of the attack. The
// attack derives a per-cell seed from its base seed; generator-backed
// sources honor it, fixed pools consume sequentially.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::vector<Sample> draw(std::size_t count, std::uint64_t cell_seed) = 0;
};

class PlweSampleSource final : public SampleSource {
 public:
  explicit PlweSampleSource(PlweInstance instance) : instance_(std::move(instance)) {}
  std::vector<Sample> draw(std::size_t count, std::uint64_t cell_seed) override {
    return gen_plwe_samples(instance_, count, cell_seed);
  }
  const PlweInstance& instance() const { return instance_; }

 private:
  PlweInstance instance_;
};

class UniformSampleSource final : public SampleSource {
 public:
  explicit UniformSampleSource(RingParams params) : params_(std::move(params)) {}
  std::vector<Sample> draw(std::size_t count, std::uint64_t cell_seed) override {
    return gen_uniform_samples(params_, count, cell_seed);
  }

 private:
  RingParams params_;
};

// Hands out consecutive slices of a fixed pool (e.g. samples read from disk);
// ignores cell seeds. Needs q * m * n_trials samples for a full attack.
class FixedSampleSource final : public SampleSource {
 public:
  explicit FixedSampleSource(std::vector<Sample> pool) : pool_(std::move(pool)) {}
  std::vector<Sample> draw(std::size_t count, std::uint64_t cell_seed) override;

 private:
  std::vector<Sample> pool_;
  std::size_t cursor_ = 0;
};

// The full attack: for every guess g in Z_q, a smearing decision on the
// residues b(gamma) - g*a(gamma) over fresh samples per trial. Verdict:
// all guesses uniform -> Uniform; exactly one non-uniform -> Plwe with that
// guess recovered as s(gamma); otherwise Inconclusive (caller may retry with
// larger m, N).
AttackReport smearing_attack(SampleSource& source, const RingParams& params,
                             const DecisionParams& dp, std::uint64_t seed);

// Baseline distinguisher for f(1) = 0 mod q: a guess g passes when every
// centered residual b(1) - g*a(1) lies within threshold_multiplier *
// sqrt(n) * sigma. One passing guess -> Plwe, none -> Uniform, several ->
// Inconclusive.
Verdict gamma1_attack(std::span<const Sample> samples, const RingParams& params, double sigma,
                      double threshold_multiplier = 3.0);

struct SuccessProbs {
  double given_uniform;  // (1-a) / (1+(q-1)a)
  double given_plwe;     // (1-a-b+qab) / (1-a+(q-1)ab)
};

// Closed-form attack success probabilities from per-decision error rates.
SuccessProbs success_probs(double alpha_err, double beta_err, std::uint64_t q);

}  // namespace smearing

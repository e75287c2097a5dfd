#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "smearing/dist.hpp"

namespace smearing {

// Thrown by choose_m when no sample count in range separates the two
// distributions with P_U > 1/2 > P_chi.
class NoSeparatingSampleCount : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The full smearing CDF row P(i, q) for i = 0..m_max. Both recursions produce
// the whole row as a by-product, and parameter selection needs the curve.
struct SmearTable {
  std::uint64_t q = 0;
  std::size_t m_max = 0;
  std::vector<double> values;  // values[i] = P(i, q)
};

// Exact smearing probabilities for the uniform distribution on q symbols,
// via the recursion P(m,q) = P(m-1,q) + P(m-1,q-1) * ((q-1)/q)^{m-1} with
// base cases P(m,q) = 0 for m < q and P(m,1) = 1 for m > 0. O(q*(m_max-q)).
SmearTable uniform_smear_table(std::uint64_t q, std::size_t m_max);

// Exact smearing probabilities for an arbitrary distribution chi, via the
// recursion in q: P_chi(m,q) = sum_k C(m,k) p^k (1-p)^{m-k} P_{chi/q}(m-k,q-1)
// where p is the probability of the last element. Elements are eliminated in
// descending index order. O(q*(m_max-q)^2). Any zero-probability entry makes
// every value exactly 0.
SmearTable nonuniform_smear_table(const ProbDist& chi, std::size_t m_max);

// Probability that m independent uniform draws from [0,q) cover every value.
// P(0,0) is defined as 1 so the function is total.
double p_uniform(std::size_t m, std::uint64_t q);

// Probability that m independent draws from chi cover every value of [0,q).
double p_nonuniform(std::size_t m, const ProbDist& chi);

// Same value through the recursion in m over all subsets of [0,q),
// O(2^q * (m-q)); guarded to q <= 20. Serves as an independent engine to
// cross-check p_nonuniform.
double p_nonuniform_small(std::size_t m, const ProbDist& chi);

// Limit-law approximation P(m,q) ~ exp(-q * exp(-m/q)) (natural log scale).
double er_approx(std::size_t m, std::uint64_t q);

// Expected number of uniform draws until all q values are seen: q * H_q.
double expected_coupons(std::uint64_t q);

// Fraction of trials in which m draws from chi cover all of [0,q);
// deterministic per seed, trials seeded independently.
double mc_smear_estimate(const ProbDist& chi, std::size_t m, std::size_t trials,
                         std::uint64_t seed);

// Smallest m <= m_cap with p_uniform(m,q) > 1/2 and p_nonuniform(m,chi) < 1/2
// (both strict). Throws NoSeparatingSampleCount when the window is empty.
std::size_t choose_m(std::uint64_t q, const ProbDist& chi, std::size_t m_cap);

// The m <= m_cap maximizing p_uniform(m,q) - p_nonuniform(m,chi) subject to
// the same strict sandwich; ties resolve to the smallest m. The decision
// error bounds shrink with the gap, so this is the better attack choice.
std::size_t choose_m_widest_gap(std::uint64_t q, const ProbDist& chi, std::size_t m_cap);

// Smallest odd N whose Chebyshev bounds on the majority-vote decision meet
// both targets: p_u(1-p_u)/(N(p_u-1/2)^2) <= alpha_err and
// p_chi(1-p_chi)/(N(1/2-p_chi)^2) <= beta_err. Requires p_chi < 1/2 < p_u.
std::uint64_t choose_trials(double p_u, double p_chi, double alpha_err, double beta_err);

}  // namespace smearing

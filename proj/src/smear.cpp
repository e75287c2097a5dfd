#include "smearing/smear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <limits>

namespace smearing {

namespace {

// Both table builders fill values[i] = 1 for every i when q == 0 (covering an
// empty set is vacuous) so the recursions are total.
SmearTable degenerate_table(std::uint64_t q, std::size_t m_max) {
  SmearTable t{q, m_max, std::vector<double>(m_max + 1, 0.0)};
  if (q == 0) {
    std::fill(t.values.begin(), t.values.end(), 1.0);
  } else if (q == 1) {
    std::fill(t.values.begin() + 1, t.values.end(), 1.0);
  }
  return t;
}

}  // namespace

SmearTable uniform_smear_table(std::uint64_t q, std::size_t m_max) {
  if (q <= 1) return degenerate_table(q, m_max);
  SmearTable t{q, m_max, std::vector<double>(m_max + 1, 0.0)};
  if (m_max < q) return t;

  const std::size_t width = m_max - static_cast<std::size_t>(q);  // extra draws past q

  // row[d] = P(j + d, j); row 1 is all ones.
  std::vector<double> row(width + 1, 1.0), next(width + 1, 0.0);
  for (std::uint64_t j = 2; j <= q; ++j) {
    const double ratio = static_cast<double>(j - 1) / static_cast<double>(j);
    // P(j+d, j) = P(j+d-1, j) + P(j+d-1, j-1) * ratio^{j+d-1}; the first
    // term vanishes at d = 0 since P(j-1, j) = 0.
    double pw = std::pow(ratio, static_cast<double>(j - 1));
    next[0] = row[0] * pw;
    for (std::size_t d = 1; d <= width; ++d) {
      pw *= ratio;
      next[d] = next[d - 1] + row[d] * pw;
    }
    row.swap(next);
  }

  for (std::size_t d = 0; d <= width; ++d) t.values[q + d] = row[d];
  return t;
}

SmearTable nonuniform_smear_table(const ProbDist& chi, std::size_t m_max) {
  const std::uint64_t q = chi.q();
  if (q <= 1) return degenerate_table(q, m_max);
  SmearTable t{q, m_max, std::vector<double>(m_max + 1, 0.0)};
  if (m_max < q) return t;
  for (std::uint64_t k = 0; k < q; ++k) {
    if (chi[k] == 0.0) return t;  // smearing impossible, exactly 0
  }

  const std::size_t width = m_max - static_cast<std::size_t>(q);

  // prefix[j] = total mass of the first j entries; element j conditioned on
  // the first j elements has probability chi[j-1] / prefix[j].
  std::vector<double> prefix(q + 1, 0.0);
  for (std::uint64_t j = 1; j <= q; ++j) prefix[j] = prefix[j - 1] + chi[j - 1];

  // log k! for the binomial pmf anchor
  std::vector<double> logfact(m_max + 1, 0.0);
  for (std::size_t i = 1; i <= m_max; ++i) {
    logfact[i] = logfact[i - 1] + std::log(static_cast<double>(i));
  }

  std::vector<double> row(width + 1, 1.0), next(width + 1, 0.0);
  for (std::uint64_t j = 2; j <= q; ++j) {
    const double p = chi[j - 1] / prefix[j];
    const double omp = 1.0 - p;
    if (!(omp > 0.0)) {
      // The first j-1 entries carry no representable mass; covering them is
      // impossible at double precision.
      std::fill(next.begin(), next.end(), 0.0);
      row.swap(next);
      continue;
    }
    const double lp = std::log(p);
    const double lomp = std::log1p(-p);
    const double ratio = p / omp;
    for (std::size_t d = 0; d <= width; ++d) {
      const std::size_t i = static_cast<std::size_t>(j) + d;
      const std::size_t kmax = d + 1;
      // Sum over k = number of draws landing on element j, weighted by the
      // binomial pmf Bin(i, p). The pmf recurrence is anchored at the mode so
      // tail underflow at k = 0 cannot wipe out large interior terms.
      std::size_t k0 = static_cast<std::size_t>(static_cast<double>(i + 1) * p);
      k0 = std::clamp<std::size_t>(k0, 1, kmax);
      const double id = static_cast<double>(i);
      const double k0d = static_cast<double>(k0);
      const double anchor = std::exp(logfact[i] - logfact[k0] - logfact[i - k0] +
                                     k0d * lp + (id - k0d) * lomp);
      double acc = 0.0;
      double term = anchor;
      for (std::size_t k = k0; k >= 1; --k) {
        acc += term * row[d - k + 1];
        term *= static_cast<double>(k) / (static_cast<double>(i - k + 1) * ratio);
      }
      term = anchor;
      for (std::size_t k = k0 + 1; k <= kmax; ++k) {
        term *= ratio * static_cast<double>(i - k + 1) / static_cast<double>(k);
        acc += term * row[d - k + 1];
      }
      next[d] = acc;
    }
    row.swap(next);
  }

  for (std::size_t d = 0; d <= width; ++d) t.values[q + d] = row[d];
  return t;
}

double p_uniform(std::size_t m, std::uint64_t q) {
  return uniform_smear_table(q, m).values[m];
}

double p_nonuniform(std::size_t m, const ProbDist& chi) {
  return nonuniform_smear_table(chi, m).values[m];
}

double p_nonuniform_small(std::size_t m, const ProbDist& chi) {
  const std::uint64_t q = chi.q();
  if (q > 20) throw std::invalid_argument("p_nonuniform_small: q > 20 exceeds subset capacity");
  if (m < q) return 0.0;
  if (q <= 1) return 1.0;
  for (std::uint64_t k = 0; k < q; ++k) {
    if (chi[k] == 0.0) return 0.0;
  }

  const std::size_t n_masks = std::size_t{1} << q;
  const std::size_t width = m - static_cast<std::size_t>(q);

  // mass of every subset, peeling the lowest set bit
  std::vector<double> mass(n_masks, 0.0);
  for (std::size_t mask = 1; mask < n_masks; ++mask) {
    const unsigned low = static_cast<unsigned>(std::countr_zero(mask));
    mass[mask] = mass[mask & (mask - 1)] + chi[low];
  }

  // vals[mask][d] = P(draws cover subset `mask` within popcount(mask)+d draws
  // conditioned on all draws landing in mask). Recursion in the number of
  // draws: either coverage happened a draw earlier, or the last draw supplies
  // the final missing element.
  std::vector<double> vals(n_masks * (width + 1), 0.0);
  auto at = [&](std::size_t mask, std::size_t d) -> double& {
    return vals[mask * (width + 1) + d];
  };

  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    const int s = std::popcount(mask);
    if (s <= 1) {
      // empty set: vacuously covered; singleton: any first draw covers it
      for (std::size_t d = 0; d <= width; ++d) at(mask, d) = 1.0;
      continue;
    }
    for (std::size_t d = 0; d <= width; ++d) {
      const double i = static_cast<double>(s) + static_cast<double>(d);
      double acc = d > 0 ? at(mask, d - 1) : 0.0;
      for (std::size_t rest = mask; rest != 0; rest &= rest - 1) {
        const unsigned k = static_cast<unsigned>(std::countr_zero(rest));
        const double pk = chi[k] / mass[mask];
        acc += pk * std::pow(1.0 - pk, i - 1.0) * at(mask ^ (std::size_t{1} << k), d);
      }
      at(mask, d) = acc;
    }
  }

  return at(n_masks - 1, width);
}

double er_approx(std::size_t m, std::uint64_t q) {
  const double qd = static_cast<double>(q);
  return std::exp(-qd * std::exp(-static_cast<double>(m) / qd));
}

double expected_coupons(std::uint64_t q) {
  double h = 0.0;
  for (std::uint64_t i = q; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return static_cast<double>(q) * h;
}

double mc_smear_estimate(const ProbDist& chi, std::size_t m, std::size_t trials,
                         std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("mc_smear_estimate: trials must be >= 1");
  const std::uint64_t q = chi.q();
  const CdfSampler sampler(chi);
  std::vector<std::uint8_t> seen(q);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    std::fill(seen.begin(), seen.end(), 0);
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Residue r = sampler.draw(rng);
      if (!seen[r]) {
        seen[r] = 1;
        if (++covered == q) break;
      }
    }
    hits += (covered == q);
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

namespace {

bool strict_sandwich(double pu, double pchi) { return pu > 0.5 && pchi < 0.5; }

}  // namespace

std::size_t choose_m(std::uint64_t q, const ProbDist& chi, std::size_t m_cap) {
  if (chi.q() != q) throw std::invalid_argument("choose_m: chi dimension does not match q");
  const SmearTable u = uniform_smear_table(q, m_cap);
  const SmearTable c = nonuniform_smear_table(chi, m_cap);
  for (std::size_t m = 0; m <= m_cap; ++m) {
    if (strict_sandwich(u.values[m], c.values[m])) return m;
  }
  throw NoSeparatingSampleCount("choose_m: no m <= " + std::to_string(m_cap) +
                                " with P_U > 1/2 > P_chi");
}

std::size_t choose_m_widest_gap(std::uint64_t q, const ProbDist& chi, std::size_t m_cap) {
  if (chi.q() != q) throw std::invalid_argument("choose_m_widest_gap: chi dimension mismatch");
  const SmearTable u = uniform_smear_table(q, m_cap);
  const SmearTable c = nonuniform_smear_table(chi, m_cap);
  std::size_t best = 0;
  double best_gap = -1.0;
  for (std::size_t m = 0; m <= m_cap; ++m) {
    if (!strict_sandwich(u.values[m], c.values[m])) continue;
    const double gap = u.values[m] - c.values[m];
    if (gap > best_gap) {
      best_gap = gap;
      best = m;
    }
  }
  if (best_gap < 0.0) {
    throw NoSeparatingSampleCount("choose_m_widest_gap: no m <= " + std::to_string(m_cap) +
                                  " with P_U > 1/2 > P_chi");
  }
  return best;
}

std::uint64_t choose_trials(double p_u, double p_chi, double alpha_err, double beta_err) {
  if (!(p_chi < 0.5 && 0.5 < p_u)) {
    throw std::domain_error("choose_trials: requires p_chi < 1/2 < p_u");
  }
  if (!(alpha_err > 0.0 && alpha_err < 1.0 && beta_err > 0.0 && beta_err < 1.0)) {
    throw std::domain_error("choose_trials: error targets must lie in (0, 1)");
  }
  const double du = p_u - 0.5;
  const double dc = 0.5 - p_chi;
  const double n1 = p_u * (1.0 - p_u) / (alpha_err * du * du);
  const double n2 = p_chi * (1.0 - p_chi) / (beta_err * dc * dc);
  const double need = std::max(n1, n2);

  auto satisfies = [&](std::uint64_t n) {
    const double nd = static_cast<double>(n);
    return p_u * (1.0 - p_u) <= alpha_err * nd * du * du &&
           p_chi * (1.0 - p_chi) <= beta_err * nd * dc * dc;
  };

  std::uint64_t n = need <= 1.0 ? 1 : static_cast<std::uint64_t>(std::ceil(need));
  if (n % 2 == 0) ++n;
  while (n > 2 && satisfies(n - 2)) n -= 2;  // undo float slop in the ceiling
  while (!satisfies(n)) n += 2;
  return n;
}

}  // namespace smearing

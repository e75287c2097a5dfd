#include "smearing/ring.hpp"

#include <stdexcept>
#include <string>

namespace smearing {

namespace {

void check_len(const PolyModF& p, const RingParams& params, const char* op) {
  if (p.size() != params.n) {
    throw std::invalid_argument(std::string(op) + ": operand has " +
                                std::to_string(p.size()) + " coefficients, ring degree is " +
                                std::to_string(params.n));
  }
}

}  // namespace

Residue eval_poly(const std::vector<Residue>& coeffs, Residue x, Residue q) {
  Residue acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = add_mod(mul_mod(acc, x % q, q), *it % q, q);
  }
  return acc;
}

RingParams::RingParams(Residue q_, std::size_t n_, std::vector<Residue> f, Residue gamma_)
    : q(q_), n(n_), f_coeffs(std::move(f)), gamma(gamma_) {
  if (q < 2) throw std::invalid_argument("RingParams: q must be >= 2");
  if (q > 0xFFFFFFFFULL) throw std::invalid_argument("RingParams: q must fit in 32 bits");
  if (n < 1) throw std::invalid_argument("RingParams: degree n must be >= 1");
  if (f_coeffs.size() != n + 1) {
    throw std::invalid_argument("RingParams: f must have n+1 coefficients");
  }
  for (Residue c : f_coeffs) {
    if (c >= q) throw std::invalid_argument("RingParams: f coefficients must lie in [0, q)");
  }
  if (f_coeffs.back() != 1) throw std::invalid_argument("RingParams: f must be monic");
  if (gamma >= q) throw std::invalid_argument("RingParams: gamma must lie in [0, q)");
  if (eval_poly(f_coeffs, gamma, q) != 0) {
    throw std::invalid_argument("RingParams: gamma is not a root of f mod q");
  }
}

PolyModF ring_add(const PolyModF& a, const PolyModF& b, const RingParams& params) {
  check_len(a, params, "ring_add");
  check_len(b, params, "ring_add");
  PolyModF out = PolyModF::zero(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    out.coeffs[i] = add_mod(a.coeffs[i], b.coeffs[i], params.q);
  }
  return out;
}

PolyModF ring_mul(const PolyModF& a, const PolyModF& b, const RingParams& params) {
  check_len(a, params, "ring_mul");
  check_len(b, params, "ring_mul");
  const std::size_t n = params.n;
  const Residue q = params.q;

  std::vector<Residue> prod(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      prod[i + j] = add_mod(prod[i + j], mul_mod(a.coeffs[i], b.coeffs[j], q), q);
    }
  }

  // Long division by the monic f: eliminate degrees 2n-2 .. n.
  for (std::size_t d = prod.size(); d-- > n;) {
    const Residue c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      prod[d - n + i] = sub_mod(prod[d - n + i], mul_mod(c, params.f_coeffs[i], q), q);
    }
  }

  prod.resize(n);
  return PolyModF(std::move(prod));
}

Residue smear_map(const PolyModF& g, const RingParams& params) {
  check_len(g, params, "smear_map");
  return eval_poly(g.coeffs, params.gamma, params.q);
}

std::vector<Residue> find_roots(const std::vector<Residue>& f_coeffs, Residue q) {
  std::vector<Residue> roots;
  for (Residue r = 0; r < q; ++r) {
    if (eval_poly(f_coeffs, r, q) == 0) roots.push_back(r);
  }
  return roots;
}

std::uint64_t mult_order(Residue gamma, Residue q) {
  if (q < 2) throw std::invalid_argument("mult_order: q must be >= 2");
  if (gamma % q == 0) throw std::domain_error("mult_order: 0 has no multiplicative order");
  const Residue g = gamma % q;
  Residue acc = g;
  std::uint64_t r = 1;
  while (acc != 1) {
    if (r >= q) {
      // Only possible when gamma is not invertible mod q (q not prime).
      throw std::domain_error("mult_order: element has no finite order mod q");
    }
    acc = mul_mod(acc, g, q);
    ++r;
  }
  return r;
}

}  // namespace smearing

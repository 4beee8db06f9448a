#include "pbda/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "pbda/errors.hpp"

namespace pbda {

namespace {

// Binomial coefficients stay exactly representable in a double up to here,
// which lets small m be summed without logarithms.
constexpr std::uint64_t kXiDirectLimit = 50;

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

double clamp_prob(double v) {
  if (v < kProbEps) return kProbEps;
  if (v > 1.0 - kProbEps) return 1.0 - kProbEps;
  return v;
}

double xi_direct(std::uint64_t m) {
  const double md = static_cast<double>(m);
  double binom = 1.0;
  double sum = 0.0;
  for (std::uint64_t k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * static_cast<double>(m - k + 1) / static_cast<double>(k);
    const double kd = static_cast<double>(k);
    // std::pow(0, 0) == 1 matches the 0^0 = 1 convention.
    sum += binom * std::pow(kd / md, kd) * std::pow(1.0 - kd / md, md - kd);
  }
  return sum;
}

double xi_log_domain(std::uint64_t m) {
  const double md = static_cast<double>(m);
  const double log_fact_m = std::lgamma(md + 1.0);
  // k = 0 and k = m contribute exactly one each.
  double sum = 2.0;
  for (std::uint64_t k = 1; k < m; ++k) {
    const double kd = static_cast<double>(k);
    const double log_term = log_fact_m - std::lgamma(kd + 1.0) - std::lgamma(md - kd + 1.0) +
                            kd * std::log(kd / md) + (md - kd) * std::log1p(-kd / md);
    sum += std::exp(log_term);
  }
  return sum;
}

}  // namespace

double phi(double a) {
  if (a > kPhiClamp) return 0.0;
  if (a < -kPhiClamp) return 1.0;
  return 0.5 * std::erfc(a / std::numbers::sqrt2);
}

double phi_dis(double a) { return 2.0 * phi(a) * phi(-a); }

double phi_prime(double a) {
  return -std::exp(-0.5 * a * a) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
}

double phi_dis_prime(double a) { return 2.0 * phi_prime(a) * (phi(-a) - phi(a)); }

double kl_bernoulli(double q, double p) {
  if (!is_probability(q) || !is_probability(p)) {
    throw DomainError("kl_bernoulli: arguments must lie in [0, 1]");
  }
  if ((p == 0.0 || p == 1.0) && q != p) {
    throw DomainError("kl_bernoulli: divergence is infinite at p in {0, 1}");
  }
  if (q == p) return 0.0;

  const double pc = clamp_prob(p);
  if (q == 0.0) return -std::log1p(-pc);
  if (q == 1.0) return -std::log(pc);

  const double qc = clamp_prob(q);
  return qc * std::log(qc / pc) + (1.0 - qc) * (std::log1p(-qc) - std::log1p(-pc));
}

double kl_inverse_sup(double q, double c) {
  if (!is_probability(q)) throw DomainError("kl_inverse_sup: q must lie in [0, 1]");
  if (!(c >= 0.0)) throw DomainError("kl_inverse_sup: budget must be nonnegative");
  if (q == 1.0) return 1.0;

  double hi = 1.0 - kProbEps;
  if (q >= hi) return q;
  if (kl_bernoulli(q, hi) <= c) return hi;

  // Invariant: kl(q || lo) <= c < kl(q || hi).
  double lo = q;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (kl_bernoulli(q, mid) <= c) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double xi(std::uint64_t m) {
  if (m == 0) throw DomainError("xi: m must be positive");
  if (m <= kXiDirectLimit) return xi_direct(m);
  if (!xi_is_exact(m)) return 2.0 * std::sqrt(static_cast<double>(m));
  return xi_log_domain(m);
}

}  // namespace pbda

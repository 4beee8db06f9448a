#pragma once

#include <cstdint>

// Scalar functions shared by every bound in the library. All functions are
// pure and thread-safe.

namespace pbda {

/// Margins beyond this magnitude are clamped: phi is exactly 0 or 1 there.
inline constexpr double kPhiClamp = 40.0;

/// Probabilities fed to logarithms are clamped to [kProbEps, 1 - kProbEps].
inline constexpr double kProbEps = 1e-12;

/// Largest m for which xi(m) is summed exactly; beyond it 2*sqrt(m) is used.
inline constexpr std::uint64_t kXiExactLimit = 1'000'000;

/// Gaussian tail probability: 1/2 [1 - erf(a / sqrt 2)].
double phi(double a);

/// Probability that two independent Gaussian-posterior draws disagree on a
/// point with normalized margin a: 2 phi(a) phi(-a).
double phi_dis(double a);

double phi_prime(double a);
double phi_dis_prime(double a);

/// Binary KL divergence kl(q || p), with 0 ln 0 = 0.
/// Throws DomainError when q or p leave [0, 1], or when p is an endpoint
/// that q does not match (the divergence is infinite).
double kl_bernoulli(double q, double p);

/// sup { eps in [q, 1) : kl(q || eps) <= c }, by bisection.
///
/// kl(q || .) is increasing on [q, 1), so this is the root of
/// kl(q || eps) = c. When even eps = 1 - kProbEps stays within budget the
/// result is clamped to 1 - kProbEps; q = 1 returns 1.
/// Throws DomainError for c < 0 or q outside [0, 1].
double kl_inverse_sup(double q, double c);

/// Normalizer of the PAC-Bayes confidence term,
///   xi(m) = sum_k C(m,k) (k/m)^k (1 - k/m)^(m-k),
/// with 0^0 = 1. Exact for m <= kXiExactLimit, the 2 sqrt(m) envelope above.
/// Throws DomainError for m = 0.
double xi(std::uint64_t m);

/// True when xi(m) is an exact summation rather than the envelope.
constexpr bool xi_is_exact(std::uint64_t m) { return m <= kXiExactLimit; }

}  // namespace pbda

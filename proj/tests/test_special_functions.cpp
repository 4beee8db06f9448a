#include <gtest/gtest.h>

#include <cmath>

#include "pbda/errors.hpp"
#include "pbda/special_functions.hpp"

using namespace pbda;

namespace {

double central_difference(double (*f)(double), double a, double h = 1e-5) {
  return (f(a + h) - f(a - h)) / (2.0 * h);
}

}  // namespace

TEST(Phi, ReferenceValues) {
  EXPECT_EQ(phi(0.0), 0.5);
  EXPECT_NEAR(phi(1.0), 0.158655253931457, 1e-12);
  EXPECT_NEAR(phi(-1.0), 0.841344746068543, 1e-12);
  EXPECT_NEAR(phi(3.0), 0.00134989803163009, 1e-15);
}

TEST(Phi, Complement) {
  for (double a = -45.0; a <= 45.0; a += 0.37) {
    EXPECT_NEAR(phi(a) + phi(-a), 1.0, 1e-12) << "a=" << a;
  }
}

TEST(Phi, ClampedTails) {
  EXPECT_EQ(phi(50.0), 0.0);
  EXPECT_EQ(phi(-50.0), 1.0);
  EXPECT_EQ(phi_dis(60.0), 0.0);
}

TEST(Phi, Decreasing) {
  double prev = phi(-10.0);
  for (double a = -9.9; a <= 10.0; a += 0.1) {
    const double cur = phi(a);
    EXPECT_LE(cur, prev);
    prev = cur;
  }
}

TEST(PhiDis, ReferenceValuesAndSymmetry) {
  EXPECT_EQ(phi_dis(0.0), 0.5);
  EXPECT_NEAR(phi_dis(1.0), 0.2669675287, 1e-9);
  for (double a = 0.0; a < 8.0; a += 0.25) {
    EXPECT_DOUBLE_EQ(phi_dis(a), phi_dis(-a));
    EXPECT_LE(phi_dis(a), 0.5);
    EXPECT_GE(phi_dis(a), 0.0);
  }
}

TEST(PhiPrime, MatchesFiniteDifferences) {
  EXPECT_NEAR(phi_prime(0.0), -0.3989423, 1e-7);
  for (double a = -4.0; a <= 4.0; a += 0.3) {
    EXPECT_NEAR(phi_prime(a), central_difference(phi, a), 1e-8) << "a=" << a;
    EXPECT_NEAR(phi_dis_prime(a), central_difference(phi_dis, a), 1e-8) << "a=" << a;
  }
  EXPECT_EQ(phi_dis_prime(0.0), 0.0);
}

TEST(KlBernoulli, ReferenceValues) {
  EXPECT_NEAR(kl_bernoulli(0.1, 0.5), 0.368064, 1e-6);
  EXPECT_NEAR(kl_bernoulli(0.0, 0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(kl_bernoulli(1.0, 0.25), std::log(4.0), 1e-15);
  for (double q : {0.0, 0.01, 0.3, 0.5, 0.99, 1.0}) EXPECT_EQ(kl_bernoulli(q, q), 0.0);
}

TEST(KlBernoulli, NonNegativeAndIncreasingAboveQ) {
  for (double q : {0.05, 0.2, 0.5, 0.7}) {
    double prev = 0.0;
    for (double p = q + 0.01; p < 0.999; p += 0.01) {
      const double v = kl_bernoulli(q, p);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(KlBernoulli, DomainErrors) {
  EXPECT_THROW(kl_bernoulli(-0.1, 0.5), DomainError);
  EXPECT_THROW(kl_bernoulli(0.5, 1.5), DomainError);
  EXPECT_THROW(kl_bernoulli(0.5, 1.0), DomainError);
  EXPECT_THROW(kl_bernoulli(0.5, 0.0), DomainError);
  EXPECT_THROW(kl_bernoulli(std::nan(""), 0.5), DomainError);
}

TEST(KlInverse, ReferenceValue) {
  EXPECT_NEAR(kl_inverse_sup(0.0, std::log(2.0)), 0.5, 1e-10);
}

TEST(KlInverse, RoundTrip) {
  for (double q : {0.0, 0.02, 0.1, 0.25, 0.5, 0.8, 0.95}) {
    for (double c : {1e-6, 1e-3, 0.01, 0.1, 0.5, 2.0}) {
      const double eps = kl_inverse_sup(q, c);
      EXPECT_GE(eps, q);
      if (eps < 1.0 - kProbEps) {
        EXPECT_NEAR(kl_bernoulli(q, eps), c, 1e-8) << "q=" << q << " c=" << c;
      }
    }
  }
}

TEST(KlInverse, MonotoneInBudget) {
  double prev = 0.2;
  for (double c = 0.0; c < 3.0; c += 0.05) {
    const double eps = kl_inverse_sup(0.2, c);
    EXPECT_GE(eps, prev);
    prev = eps;
  }
}

TEST(KlInverse, EdgeCases) {
  EXPECT_EQ(kl_inverse_sup(0.3, 0.0), 0.3);
  EXPECT_EQ(kl_inverse_sup(1.0, 0.5), 1.0);
  EXPECT_EQ(kl_inverse_sup(0.5, 1000.0), 1.0 - kProbEps);
  EXPECT_THROW(kl_inverse_sup(0.5, -1e-3), DomainError);
  EXPECT_THROW(kl_inverse_sup(1.2, 0.1), DomainError);
}

TEST(Xi, SmallValuesAreExact) {
  EXPECT_EQ(xi(1), 2.0);
  EXPECT_EQ(xi(2), 2.5);
  EXPECT_NEAR(xi(3), 2.0 + 24.0 / 27.0, 1e-14);
}

TEST(Xi, Envelope) {
  for (std::uint64_t m : {5ULL, 10ULL, 50ULL, 51ULL, 300ULL, 1000ULL, 100000ULL}) {
    const double v = xi(m);
    const double s = std::sqrt(static_cast<double>(m));
    EXPECT_GE(v, s) << m;
    EXPECT_LE(v, 2.0 * s) << m;
  }
  // Known asymptotics: xi(m) ~ sqrt(pi m / 2).
  EXPECT_NEAR(xi(100000) / std::sqrt(M_PI * 100000 / 2.0), 1.0, 1e-2);
}

TEST(Xi, ContinuousAcrossSummationMethods) {
  const double a = xi(50), b = xi(51);
  EXPECT_GT(b, a);
  EXPECT_LT(b - a, 0.2);
}

TEST(Xi, LargeArgumentsUseEnvelope) {
  EXPECT_TRUE(xi_is_exact(1'000'000));
  EXPECT_FALSE(xi_is_exact(1'000'001));
  EXPECT_EQ(xi(4'000'000), 4000.0);
  EXPECT_THROW(xi(0), DomainError);
}

TEST(KlInverse, RecoversTheArgument) {
  for (double q : {0.0, 0.1, 0.5, 0.87}) {
    for (double p : {0.9, 0.99, 0.999999, 1.0 - 1e-9}) {
      if (p <= q) continue;
      EXPECT_NEAR(kl_inverse_sup(q, kl_bernoulli(q, p)), p, 1e-8) << "q=" << q << " p=" << p;
    }
  }
}

#include <gtest/gtest.h>

#include <cmath>

#include "pbda/errors.hpp"
#include "pbda/gibbs_linear.hpp"
#include "pbda/special_functions.hpp"
#include "test_util.hpp"

using namespace pbda;
using namespace pbda::testing;

TEST(Margin, ScaleInvariantInX) {
  const Vector w = gaussian_vector(3, 1.0, 1);
  const Vector x = gaussian_vector(3, 1.0, 2);
  EXPECT_NEAR(margin(w, x), margin(w, 3.5 * x), 1e-14);
  EXPECT_NEAR(margin(w, x), w.dot(x) / x.norm(), 1e-14);
}

TEST(Margin, Errors) {
  EXPECT_THROW(margin(Vector::Ones(2), Vector::Zero(2)), DegenerateInput);
  EXPECT_THROW(margin(Vector::Ones(2), Vector::Ones(3)), DimensionError);
}

TEST(GibbsRisk, ZeroWeightsGiveOneHalf) {
  const PairedSample p = random_paired(20, 3, 4);
  const Vector w = Vector::Zero(3);
  EXPECT_EQ(gibbs_risk(w, p.source()), 0.5);
  EXPECT_EQ(disagreement_hat(w, p), 0.0);
  EXPECT_EQ(adaptation_loss_hat(w, p), 0.5);
  EXPECT_EQ(bstar(w, p), 0.5);
}

TEST(GibbsRisk, MatchesMarginFormula) {
  const LabeledSample s = random_labeled(30, 2, 5);
  const Vector w = gaussian_vector(2, 2.0, 6);
  double expected = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    expected += phi(sign_of(s.label(i)) * margin(w, s.point(i).transpose()));
  }
  EXPECT_NEAR(gibbs_risk(w, s), expected / 30.0, 1e-15);
}

TEST(GibbsRisk, RangesAndDecomposition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PairedSample p = random_paired(25, 4, seed);
    const Vector w = gaussian_vector(4, 0.5 + seed, seed + 100);
    const double r = gibbs_risk(w, p.source());
    const double d = disagreement_hat(w, p);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
    EXPECT_GE(d, -0.5);
    EXPECT_LE(d, 0.5);
    EXPECT_EQ(adaptation_loss_hat(w, p), r + d);
    const double b = bstar(w, p);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
    EXPECT_DOUBLE_EQ(b, 0.5 * (r + d) + 0.25);
  }
}

TEST(Disagreement, VanishesWhenDomainsCoincide) {
  const LabeledSample s = random_labeled(15, 3, 8);
  const PairedSample p(s, s.inputs());
  EXPECT_NEAR(disagreement_hat(gaussian_vector(3, 1.0, 9), p), 0.0, 1e-15);
}

TEST(Predict, TieGoesToPositive) {
  Vector w(2);
  w << 1.0, -1.0;
  Vector x(2);
  x << 2.0, 2.0;
  EXPECT_EQ(predict(w, x), Label::positive);
  x << 1.0, 2.0;
  EXPECT_EQ(predict(w, x), Label::negative);
}

TEST(ErrorRate, PerfectAndInverted) {
  const LabeledSample s = random_labeled(40, 2, 10);
  Vector w(2);
  w << 1.0, 0.3;
  const double e = error_rate(w, s);
  EXPECT_NEAR(error_rate(-w, s), 1.0 - e, 1e-15);
}

TEST(MonteCarlo, MatchesClosedForms) {
  const std::uint64_t n = 200'000;
  const double tol = 3.5 / std::sqrt(static_cast<double>(n)) + 1e-3;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PairedSample p = random_paired(20, 2 + seed, seed);
    const Vector w = gaussian_vector(2 + seed, 1.5, seed + 50);
    EXPECT_NEAR(mc_gibbs_risk(w, p.source(), n, 1), gibbs_risk(w, p.source()), tol);
    EXPECT_NEAR(mc_disagreement(w, p, n, 2), disagreement_hat(w, p), tol);
    EXPECT_NEAR(mc_adaptation_loss(w, p, n, 3), adaptation_loss_hat(w, p), tol);
  }
}

TEST(MonteCarlo, DeterministicPerSeed) {
  const PairedSample p = random_paired(10, 2, 3);
  const Vector w = gaussian_vector(2, 1.0, 4);
  EXPECT_EQ(mc_disagreement(w, p, 1000, 5), mc_disagreement(w, p, 1000, 5));
  EXPECT_NE(mc_gibbs_risk(w, p.source(), 1000, 5), mc_gibbs_risk(w, p.source(), 1000, 6));
  EXPECT_THROW(mc_gibbs_risk(w, p.source(), 0, 1), DomainError);
}

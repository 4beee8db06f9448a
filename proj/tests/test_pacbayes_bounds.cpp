#include <gtest/gtest.h>

#include <cmath>

#include "pbda/errors.hpp"
#include "pbda/pacbayes_bounds.hpp"
#include "pbda/special_functions.hpp"
#include "test_util.hpp"

using namespace pbda;
using namespace pbda::testing;

TEST(BoundInputs, Validation) {
  EXPECT_THROW(make_bound_inputs(BoundKind::dapbgd, 0, 0.05, 1.0), DomainError);
  EXPECT_THROW(make_bound_inputs(BoundKind::dapbgd, 10, 0.0, 1.0), DomainError);
  EXPECT_THROW(make_bound_inputs(BoundKind::dapbgd, 10, 1.5, 1.0), DomainError);
  EXPECT_THROW(make_bound_inputs(BoundKind::pbgd, 10, 0.05, -1.0), DomainError);
  const BoundInputs da = make_bound_inputs(BoundKind::dapbgd, 10, 0.05, 2.0);
  const BoundInputs pb = make_bound_inputs(BoundKind::pbgd, 10, 0.05, 2.0);
  EXPECT_NEAR(da.complexity_rhs, (2.0 + std::log(xi(10) / 0.05)) / 10.0, 1e-15);
  EXPECT_NEAR(pb.complexity_rhs, (1.0 + std::log(xi(10) / 0.05)) / 10.0, 1e-15);
}

TEST(DaObjective, InvertsTheBudget) {
  const PairedSample p = random_paired(50, 3, 1);
  const Vector w = gaussian_vector(3, 1.0, 2);
  const ObjectiveReport r = dapbgd_objective(w, p, 0.05);
  EXPECT_DOUBLE_EQ(r.bstar, bstar(w, p));
  EXPECT_DOUBLE_EQ(r.norm_sq, w.squaredNorm());
  EXPECT_NEAR(r.kl_budget, (w.squaredNorm() + std::log(xi(50) / 0.05)) / 50.0, 1e-15);
  EXPECT_GE(r.objective, r.bstar);
  EXPECT_NEAR(kl_bernoulli(r.bstar, r.objective), r.kl_budget, 1e-9);
  EXPECT_EQ(r.gradient.size(), 3);
}

TEST(DaObjective, SmallerDeltaLoosensTheBound) {
  const PairedSample p = random_paired(30, 2, 3);
  const Vector w = gaussian_vector(2, 1.0, 4);
  EXPECT_LT(dapbgd_objective(w, p, 0.1).objective, dapbgd_objective(w, p, 0.01).objective);
}

TEST(PbgdBound, AtZero) {
  const LabeledSample s = random_labeled(40, 2, 5);
  EXPECT_NEAR(pbgd_bound(Vector::Zero(2), s, 0.05),
              kl_inverse_sup(0.5, std::log(xi(40) / 0.05) / 40.0), 1e-15);
}

class GradientProbe : public ::testing::TestWithParam<std::tuple<int, int, int>> {};

TEST_P(GradientProbe, MatchesCentralDifferences) {
  const auto [d, m, seed] = GetParam();
  const PairedSample p = random_paired(m, d, static_cast<std::uint64_t>(seed));
  const Vector w = gaussian_vector(d, 0.8, static_cast<std::uint64_t>(seed) + 1000);
  const double delta = 0.05;

  const Vector da = dapbgd_gradient(w, p, delta);
  const Vector da_fd = central_difference(
      [&](const Vector& v) { return dapbgd_objective(v, p, delta).objective; }, w);
  EXPECT_LT(relative_error(da, da_fd), 1e-4);

  const Vector pb = pbgd_gradient(w, p.source(), delta);
  const Vector pb_fd =
      central_difference([&](const Vector& v) { return pbgd_bound(v, p.source(), delta); }, w);
  EXPECT_LT(relative_error(pb, pb_fd), 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Probes, GradientProbe,
                         ::testing::Combine(::testing::Values(2, 5), ::testing::Values(10, 50),
                                            ::testing::Values(1, 2, 3)));

TEST(BoundObjective, ReportMatchesFreeFunctions) {
  const PairedSample p = random_paired(20, 3, 6);
  const Vector w = gaussian_vector(3, 1.0, 7);
  const BoundObjective obj(BoundKind::dapbgd, primal_design(p), 0.05);
  const ObjectiveReport r = obj.report(w);
  EXPECT_NEAR(r.objective, dapbgd_objective(w, p, 0.05).objective, 1e-14);
  EXPECT_NEAR((r.gradient - dapbgd_gradient(w, p, 0.05)).norm(), 0.0, 1e-12);

  const BoundObjective pb(BoundKind::pbgd, primal_design(p.source()), 0.05);
  EXPECT_NEAR(pb.value(w), pbgd_bound(w, p.source(), 0.05), 1e-14);
  EXPECT_TRUE(std::isnan(pb.report(w).disagreement));
}

TEST(BoundObjective, DegenerateGradientWhenTheBoundSaturates) {
  // With a huge budget the inverted value sits at its clamp and the implicit
  // gradient is 0/0.
  const PairedSample p = random_paired(1, 2, 8);
  const BoundObjective obj(BoundKind::dapbgd, primal_design(p), 1e-10);
  const Vector w = Vector::Zero(2);
  const ObjectiveReport r = obj.report(w);
  EXPECT_EQ(r.objective, 1.0 - kProbEps);
  EXPECT_EQ(r.gradient.size(), 0);
  EXPECT_THROW(obj.gradient(obj.margins(w), r, w), DegenerateGradient);
}

TEST(BoundObjective, DimensionChecks) {
  const PairedSample p = random_paired(5, 2, 9);
  EXPECT_THROW(dapbgd_objective(Vector::Zero(3), p, 0.05), DimensionError);
}

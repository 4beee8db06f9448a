#pragma once

#include <cstdint>

#include "pbda/dataset.hpp"

// Quantities averaged over the Gaussian posterior rho_w = N(w, I) on linear
// classifiers h_v(x) = sgn(v . x). Every closed form depends on the data only
// through normalized margins w . x / |x|, so each estimator has a
// margin-level core that the kernel module reuses.

namespace pbda {

using WeightVector = Vector;

/// w . x / |x|. Throws DegenerateInput for x = 0, DimensionError on mismatch.
double margin(const WeightVector& w, const Eigen::Ref<const Vector>& x);

/// Per-row normalized margins of `points` (the MarginStats of a sample).
Vector normalized_margins(const WeightVector& w, const Matrix& points);

// Margin-level cores. Summation is sequential in sample order.

/// mean_i phi(y_i a_i).
double gibbs_risk_from_margins(const Vector& margins, const std::vector<Label>& labels);
/// mean_i [phi_dis(b_i) - phi_dis(a_i)] with a = source, b = target margins.
double disagreement_from_margins(const Vector& source_margins, const Vector& target_margins);
/// Affine map of an adaptation loss in [-1/2, 3/2] onto [0, 1].
double bstar_from_loss(double adaptation_loss);

/// Exact Gibbs risk of G_{rho_w} on the empirical distribution of `sample`.
double gibbs_risk(const WeightVector& w, const LabeledSample& sample);

/// Empirical domain disagreement on the pairs; lies in [-1/2, 1/2].
double disagreement_hat(const WeightVector& w, const PairedSample& paired);

/// Empirical adaptation loss, computed as
///   gibbs_risk(w, source) + disagreement_hat(w, paired)
/// so that the decomposition holds bit-for-bit.
double adaptation_loss_hat(const WeightVector& w, const PairedSample& paired);

/// adaptation_loss_hat / 2 + 1/4, always in [0, 1].
double bstar(const WeightVector& w, const PairedSample& paired);

/// sgn(w . x), with a tie at exactly zero resolved to +1.
Label predict(const WeightVector& w, const Eigen::Ref<const Vector>& x);
double error_rate(const WeightVector& w, const LabeledSample& sample);

// Monte-Carlo oracles. Each trial draws v = w + N(0, I) (two independent
// draws for the pairwise quantities) and averages the 0/1 losses over the
// whole sample. Deterministic for a fixed seed.

double mc_gibbs_risk(const WeightVector& w, const LabeledSample& sample, std::uint64_t n_draws,
                     std::uint64_t seed);
double mc_disagreement(const WeightVector& w, const PairedSample& paired, std::uint64_t n_draws,
                       std::uint64_t seed);
double mc_adaptation_loss(const WeightVector& w, const PairedSample& paired,
                          std::uint64_t n_draws, std::uint64_t seed);

}  // namespace pbda

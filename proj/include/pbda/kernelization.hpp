#pragma once

#include <cstdint>

#include "pbda/dataset.hpp"
#include "pbda/pacbayes_bounds.hpp"

namespace pbda {

enum class KernelKind { linear, gaussian };

struct KernelConfig {
  KernelKind kind = KernelKind::gaussian;
  /// k(x, x') = exp(-gamma |x - x'|^2); ignored by the linear kernel.
  double gamma = 1.0;
  /// Optional eps * I added to the anchor Gram matrix in the KL term.
  double ridge = 0.0;

  /// Throws DomainError for gamma <= 0 (gaussian) or ridge < 0.
  void validate() const;
  double operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;
};

/// Classifier h(x) = sgn(sum_i alpha_i k(a_i, x)) over stored anchors a_i.
struct DualWeights {
  Vector alpha;
  Matrix anchors;  ///< one anchor per row
};

/// K_ij = k(x_i, x_j) over the rows of `points`.
Matrix gram(const Matrix& points, const KernelConfig& config);
/// K_ij = k(x_i, a_j) between rows of `points` and rows of `anchors`.
Matrix cross_gram(const Matrix& points, const Matrix& anchors, const KernelConfig& config);

/// (sum_i alpha_i k(a_i, x)) / sqrt(k(x, x)): the feature-space counterpart
/// of w . x / |x|. Throws DegenerateInput when k_xx <= 0.
double dual_margin(const DualWeights& dw, const Eigen::Ref<const Vector>& kernel_column,
                   double k_xx);

/// alpha' K alpha, the squared feature-space norm of the expansion.
double dual_norm_sq(const DualWeights& dw, const Matrix& anchor_gram);

/// Normalized dual margins of arbitrary points.
Vector dual_margins(const DualWeights& dw, const KernelConfig& config, const Matrix& points);
Label dual_predict(const DualWeights& dw, const KernelConfig& config,
                   const Eigen::Ref<const Vector>& x);

/// Source anchors followed by target anchors: every point of <S,T>.
Matrix paired_anchors(const PairedSample& paired);

/// Design whose parameter is alpha: rows k(a, x) / sqrt(k(x, x)), metric
/// K_AA + ridge I.
LinearDesign dual_design(const LabeledSample& source, const Matrix& anchors,
                         const KernelConfig& config);
LinearDesign dual_design(const PairedSample& paired, const Matrix& anchors,
                         const KernelConfig& config);

/// DA bound with alpha as the free parameter (anchors taken from `dw`).
ObjectiveReport dual_dapbgd_objective(const DualWeights& dw, const PairedSample& paired,
                                      const KernelConfig& config, double delta);
/// Gradient of the DA bound with respect to alpha:
///   prefactor [4 K alpha + log-term * sum_i (weighted normalized kernel columns)].
Vector dual_gradient(const DualWeights& dw, const PairedSample& paired,
                     const KernelConfig& config, double delta);

double dual_pbgd_bound(const DualWeights& dw, const LabeledSample& source,
                       const KernelConfig& config, double delta);
Vector dual_pbgd_gradient(const DualWeights& dw, const LabeledSample& source,
                          const KernelConfig& config, double delta);

// Monte-Carlo oracles for kernel classifiers. The posterior N(w, I) lives in
// feature space, so each trial samples one example uniformly and draws the
// posterior's projections onto the (normalized) feature vectors involved,
// which are jointly Gaussian with correlation k(x, x') / sqrt(k(x,x) k(x',x')).

double mc_dual_gibbs_risk(const DualWeights& dw, const KernelConfig& config,
                          const LabeledSample& sample, std::uint64_t n_draws, std::uint64_t seed);
double mc_dual_disagreement(const DualWeights& dw, const KernelConfig& config,
                            const PairedSample& paired, std::uint64_t n_draws,
                            std::uint64_t seed);
double mc_dual_adaptation_loss(const DualWeights& dw, const KernelConfig& config,
                               const PairedSample& paired, std::uint64_t n_draws,
                               std::uint64_t seed);

}  // namespace pbda

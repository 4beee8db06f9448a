#pragma once

#include <optional>

#include "pbda/dataset.hpp"
#include "pbda/gibbs_linear.hpp"
#include "pbda/kernelization.hpp"

namespace pbda {

/// A trained posterior centre: either a primal weight vector or a kernel
/// expansion. All quantities are computed through normalized margins, so the
/// two representations share every estimator.
class Classifier {
 public:
  Classifier() = default;
  static Classifier primal(WeightVector w);
  static Classifier dual(KernelConfig config, DualWeights weights);

  bool is_dual() const { return kernel_.has_value(); }
  Eigen::Index input_dim() const;
  /// w for primal models, alpha for dual ones.
  const Vector& weights() const { return weights_.alpha; }
  const Matrix& anchors() const { return weights_.anchors; }
  const std::optional<KernelConfig>& kernel() const { return kernel_; }
  DualWeights dual_weights() const { return weights_; }

  Vector margins(const Matrix& points) const;
  Label predict(const Eigen::Ref<const Vector>& x) const;
  double error_rate(const LabeledSample& sample) const;
  double gibbs_risk(const LabeledSample& sample) const;
  double disagreement(const PairedSample& paired) const;
  double adaptation_loss(const PairedSample& paired) const;
  /// |w|^2 in input or feature space.
  double norm_sq() const;

 private:
  std::optional<KernelConfig> kernel_;
  DualWeights weights_;  // anchors empty for primal models
};

}  // namespace pbda

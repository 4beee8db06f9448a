#include "pbda/classifier.hpp"

#include "pbda/errors.hpp"

namespace pbda {

Classifier Classifier::primal(WeightVector w) {
  Classifier c;
  c.weights_.alpha = std::move(w);
  return c;
}

Classifier Classifier::dual(KernelConfig config, DualWeights weights) {
  config.validate();
  if (weights.alpha.size() != weights.anchors.rows()) {
    throw DimensionError("dual classifier: |alpha| must equal the anchor count");
  }
  Classifier c;
  c.kernel_ = config;
  c.weights_ = std::move(weights);
  return c;
}

Eigen::Index Classifier::input_dim() const {
  return is_dual() ? weights_.anchors.cols() : weights_.alpha.size();
}

Vector Classifier::margins(const Matrix& points) const {
  if (is_dual()) return dual_margins(weights_, *kernel_, points);
  return normalized_margins(weights_.alpha, points);
}

Label Classifier::predict(const Eigen::Ref<const Vector>& x) const {
  if (is_dual()) return dual_predict(weights_, *kernel_, x);
  return pbda::predict(weights_.alpha, x);
}

double Classifier::error_rate(const LabeledSample& sample) const {
  if (!is_dual()) return pbda::error_rate(weights_.alpha, sample);
  if (sample.empty()) throw DimensionError("error rate of an empty sample");
  // sqrt(k(x,x)) > 0 never changes a sign, so normalized margins decide.
  const Vector mg = margins(sample.points());
  Eigen::Index errors = 0;
  for (Eigen::Index i = 0; i < mg.size(); ++i) {
    const Label predicted = mg[i] >= 0.0 ? Label::positive : Label::negative;
    if (predicted != sample.label(i)) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(sample.size());
}

double Classifier::gibbs_risk(const LabeledSample& sample) const {
  return gibbs_risk_from_margins(margins(sample.points()), sample.labels());
}

double Classifier::disagreement(const PairedSample& paired) const {
  return disagreement_from_margins(margins(paired.source().points()),
                                   margins(paired.target().points()));
}

double Classifier::adaptation_loss(const PairedSample& paired) const {
  return gibbs_risk(paired.source()) + disagreement(paired);
}

double Classifier::norm_sq() const {
  if (!is_dual()) return weights_.alpha.squaredNorm();
  Matrix g = gram(weights_.anchors, *kernel_);
  if (kernel_->ridge > 0.0) g.diagonal().array() += kernel_->ridge;
  return dual_norm_sq(weights_, g);
}

}  // namespace pbda

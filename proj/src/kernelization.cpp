#include "pbda/kernelization.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pbda/errors.hpp"
#include "pbda/special_functions.hpp"

namespace pbda {

namespace {

Matrix normalized_cross_gram(const Matrix& points, const Matrix& anchors,
                             const KernelConfig& config) {
  Matrix k = cross_gram(points, anchors, config);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double kxx = config(points.row(i).transpose(), points.row(i).transpose());
    if (!(kxx > 0.0)) throw DegenerateInput("kernel self-similarity must be positive");
    k.row(i) /= std::sqrt(kxx);
  }
  return k;
}

Matrix anchor_metric(const Matrix& anchors, const KernelConfig& config) {
  Matrix g = gram(anchors, config);
  if (config.ridge > 0.0) g.diagonal().array() += config.ridge;
  return g;
}

void check_anchors(const DualWeights& dw, Eigen::Index d) {
  if (dw.alpha.size() != dw.anchors.rows()) {
    throw DimensionError("dual weights: |alpha| must equal the anchor count");
  }
  if (dw.anchors.cols() != d) throw DimensionError("anchor dimension mismatch");
}

// Correlation of the posterior's projections on two normalized feature vectors.
double feature_correlation(const KernelConfig& config, const Eigen::Ref<const Vector>& x,
                           const Eigen::Ref<const Vector>& y) {
  const double r = config(x, y) / std::sqrt(config(x, x) * config(y, y));
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

void KernelConfig::validate() const {
  if (kind == KernelKind::gaussian && !(gamma > 0.0)) {
    throw DomainError("gaussian kernel needs gamma > 0");
  }
  if (!(ridge >= 0.0)) throw DomainError("kernel ridge must be nonnegative");
}

double KernelConfig::operator()(const Eigen::Ref<const Vector>& x,
                                const Eigen::Ref<const Vector>& y) const {
  if (kind == KernelKind::linear) return x.dot(y);
  return std::exp(-gamma * (x - y).squaredNorm());
}

Matrix gram(const Matrix& points, const KernelConfig& config) {
  config.validate();
  const Eigen::Index n = points.rows();
  if (n == 0) throw DimensionError("gram matrix of an empty point set");
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      k(i, j) = config(points.row(i).transpose(), points.row(j).transpose());
      k(j, i) = k(i, j);
    }
  }
  return k;
}

Matrix cross_gram(const Matrix& points, const Matrix& anchors, const KernelConfig& config) {
  config.validate();
  if (points.cols() != anchors.cols()) throw DimensionError("cross_gram: dimension mismatch");
  Matrix k(points.rows(), anchors.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < anchors.rows(); ++j) {
      k(i, j) = config(points.row(i).transpose(), anchors.row(j).transpose());
    }
  }
  return k;
}

double dual_margin(const DualWeights& dw, const Eigen::Ref<const Vector>& kernel_column,
                   double k_xx) {
  if (!(k_xx > 0.0)) throw DegenerateInput("dual_margin: k(x, x) must be positive");
  if (kernel_column.size() != dw.alpha.size()) {
    throw DimensionError("dual_margin: kernel column length must equal |alpha|");
  }
  return dw.alpha.dot(kernel_column) / std::sqrt(k_xx);
}

double dual_norm_sq(const DualWeights& dw, const Matrix& anchor_gram) {
  if (anchor_gram.rows() != dw.alpha.size() || anchor_gram.cols() != dw.alpha.size()) {
    throw DimensionError("dual_norm_sq: Gram matrix must be |alpha| x |alpha|");
  }
  return dw.alpha.dot(anchor_gram * dw.alpha);
}

Vector dual_margins(const DualWeights& dw, const KernelConfig& config, const Matrix& points) {
  check_anchors(dw, points.cols());
  return normalized_cross_gram(points, dw.anchors, config) * dw.alpha;
}

Label dual_predict(const DualWeights& dw, const KernelConfig& config,
                   const Eigen::Ref<const Vector>& x) {
  check_anchors(dw, x.size());
  double score = 0.0;
  for (Eigen::Index i = 0; i < dw.anchors.rows(); ++i) {
    score += dw.alpha[i] * config(dw.anchors.row(i).transpose(), x);
  }
  return score >= 0.0 ? Label::positive : Label::negative;
}

Matrix paired_anchors(const PairedSample& paired) {
  Matrix anchors(2 * paired.m(), paired.dim());
  anchors << paired.source().points(), paired.target().points();
  return anchors;
}

LinearDesign dual_design(const LabeledSample& source, const Matrix& anchors,
                         const KernelConfig& config) {
  return LinearDesign{normalized_cross_gram(source.points(), anchors, config),
                      Matrix(0, anchors.rows()), source.labels(), anchor_metric(anchors, config)};
}

LinearDesign dual_design(const PairedSample& paired, const Matrix& anchors,
                         const KernelConfig& config) {
  return LinearDesign{normalized_cross_gram(paired.source().points(), anchors, config),
                      normalized_cross_gram(paired.target().points(), anchors, config),
                      paired.source().labels(), anchor_metric(anchors, config)};
}

ObjectiveReport dual_dapbgd_objective(const DualWeights& dw, const PairedSample& paired,
                                      const KernelConfig& config, double delta) {
  check_anchors(dw, paired.dim());
  return BoundObjective(BoundKind::dapbgd, dual_design(paired, dw.anchors, config), delta)
      .report(dw.alpha);
}

Vector dual_gradient(const DualWeights& dw, const PairedSample& paired,
                     const KernelConfig& config, double delta) {
  check_anchors(dw, paired.dim());
  const BoundObjective objective(BoundKind::dapbgd, dual_design(paired, dw.anchors, config),
                                 delta);
  const auto mg = objective.margins(dw.alpha);
  return objective.gradient(mg, objective.evaluate(mg), objective.design().metric * dw.alpha);
}

double dual_pbgd_bound(const DualWeights& dw, const LabeledSample& source,
                       const KernelConfig& config, double delta) {
  check_anchors(dw, source.dim());
  return BoundObjective(BoundKind::pbgd, dual_design(source, dw.anchors, config), delta)
      .value(dw.alpha);
}

Vector dual_pbgd_gradient(const DualWeights& dw, const LabeledSample& source,
                          const KernelConfig& config, double delta) {
  check_anchors(dw, source.dim());
  const BoundObjective objective(BoundKind::pbgd, dual_design(source, dw.anchors, config), delta);
  const auto mg = objective.margins(dw.alpha);
  return objective.gradient(mg, objective.evaluate(mg), objective.design().metric * dw.alpha);
}

double mc_dual_gibbs_risk(const DualWeights& dw, const KernelConfig& config,
                          const LabeledSample& sample, std::uint64_t n_draws,
                          std::uint64_t seed) {
  if (n_draws < 1) throw DomainError("Monte-Carlo estimators need n_draws >= 1");
  const Vector margins = dual_margins(dw, config, sample.points());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, sample.size() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < n_draws; ++t) {
    const Eigen::Index i = pick(rng);
    const bool positive = margins[i] + gauss(rng) >= 0.0;
    errors += positive != (sample.label(i) == Label::positive);
  }
  return static_cast<double>(errors) / static_cast<double>(n_draws);
}

namespace {

double mc_dual_pairwise(const DualWeights& dw, const KernelConfig& config,
                        const PairedSample& paired, std::uint64_t n_draws, std::uint64_t seed,
                        double source_error_weight) {
  if (n_draws < 1) throw DomainError("Monte-Carlo estimators need n_draws >= 1");
  const Vector ms = dual_margins(dw, config, paired.source().points());
  const Vector mt = dual_margins(dw, config, paired.target().points());
  Vector corr(paired.m());
  for (Eigen::Index i = 0; i < paired.m(); ++i) {
    corr[i] = feature_correlation(config, paired.source().point(i).transpose(),
                                  paired.target().point(i).transpose());
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, paired.m() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double total = 0.0;
  for (std::uint64_t t = 0; t < n_draws; ++t) {
    const Eigen::Index i = pick(rng);
    const double r = corr[i];
    const double r_perp = std::sqrt(std::max(0.0, 1.0 - r * r));
    bool src[2], tgt[2];
    for (int h = 0; h < 2; ++h) {
      const double g1 = gauss(rng);
      const double g2 = gauss(rng);
      src[h] = ms[i] + g1 >= 0.0;
      tgt[h] = mt[i] + r * g1 + r_perp * g2 >= 0.0;
    }
    const bool truth = paired.source().label(i) == Label::positive;
    total += source_error_weight * (src[0] != truth) + (tgt[0] != tgt[1]) - (src[0] != src[1]);
  }
  return total / static_cast<double>(n_draws);
}

}  // namespace

double mc_dual_disagreement(const DualWeights& dw, const KernelConfig& config,
                            const PairedSample& paired, std::uint64_t n_draws,
                            std::uint64_t seed) {
  return mc_dual_pairwise(dw, config, paired, n_draws, seed, 0.0);
}

double mc_dual_adaptation_loss(const DualWeights& dw, const KernelConfig& config,
                               const PairedSample& paired, std::uint64_t n_draws,
                               std::uint64_t seed) {
  return mc_dual_pairwise(dw, config, paired, n_draws, seed, 1.0);
}

}  // namespace pbda

#include "pbda/pacbayes_bounds.hpp"

#include <cmath>
#include <limits>

#include "pbda/errors.hpp"
#include "pbda/special_functions.hpp"

namespace pbda {

namespace {

double kl_weight(BoundKind kind) { return kind == BoundKind::dapbgd ? 1.0 : 0.5; }

Matrix normalized_rows(const Matrix& points) {
  const Vector norms = points.rowwise().norm();
  if (norms.size() > 0 && !(norms.minCoeff() > 0.0)) {
    throw DegenerateInput("primal design: zero input vector");
  }
  return norms.cwiseInverse().asDiagonal() * points;
}

bool near_endpoint(double v) { return v <= kDegeneracyTol || v >= 1.0 - kDegeneracyTol; }

}  // namespace

BoundInputs make_bound_inputs(BoundKind kind, Eigen::Index m, double delta, double norm_sq) {
  if (m < 1) throw DomainError("bound needs m >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  if (!(norm_sq >= 0.0)) throw DomainError("squared norm must be nonnegative");
  const auto md = static_cast<std::uint64_t>(m);
  const double rhs =
      (kl_weight(kind) * norm_sq + std::log(xi(md) / delta)) / static_cast<double>(m);
  return BoundInputs{m, delta, norm_sq, rhs};
}

BoundObjective::BoundObjective(BoundKind kind, LinearDesign design, double delta)
    : kind_(kind), design_(std::move(design)), delta_(delta) {
  const Eigen::Index p = design_.source.cols();
  if (design_.source.rows() < 1) throw DimensionError("bound needs m >= 1");
  if (static_cast<Eigen::Index>(design_.labels.size()) != design_.source.rows()) {
    throw DimensionError("label count does not match the source design");
  }
  if (design_.metric.rows() != p || design_.metric.cols() != p) {
    throw DimensionError("metric must be p x p");
  }
  if (kind_ == BoundKind::dapbgd &&
      (design_.target.rows() != design_.source.rows() || design_.target.cols() != p)) {
    throw DimensionError("target design must match the source design");
  }
  // Validates delta and caches ln(xi(m)/delta).
  confidence_term_ = make_bound_inputs(kind_, m(), delta_, 0.0).complexity_rhs *
                     static_cast<double>(m());
}

BoundObjective::Margins BoundObjective::margins(const Vector& theta) const {
  if (theta.size() != dim()) throw DimensionError("parameter dimension mismatch");
  Margins out;
  out.source = design_.source * theta;
  if (kind_ == BoundKind::dapbgd) out.target = design_.target * theta;
  out.norm_sq = theta.dot(design_.metric * theta);
  return out;
}

ObjectiveReport BoundObjective::evaluate(const Margins& margins) const {
  ObjectiveReport r;
  // Rounding can push a PSD quadratic form a hair below zero.
  r.norm_sq = std::max(margins.norm_sq, 0.0);
  r.kl_budget = (kl_weight(kind_) * r.norm_sq + confidence_term_) / static_cast<double>(m());
  r.source_risk = gibbs_risk_from_margins(margins.source, design_.labels);
  if (kind_ == BoundKind::dapbgd) {
    r.disagreement = disagreement_from_margins(margins.source, margins.target);
    r.bstar = bstar_from_loss(r.source_risk + r.disagreement);
  } else {
    r.disagreement = std::numeric_limits<double>::quiet_NaN();
    r.bstar = r.source_risk;
  }
  r.objective = kl_inverse_sup(r.bstar, r.kl_budget);
  return r;
}

Vector BoundObjective::gradient(const Margins& margins, const ObjectiveReport& report,
                                const Vector& metric_theta) const {
  const double q = report.bstar;
  const double b = report.objective;
  if (b - q < kDegeneracyTol || near_endpoint(q) || near_endpoint(b)) {
    throw DegenerateGradient("bound gradient is 0/0 at this point");
  }
  const double md = static_cast<double>(m());
  const double log_term = std::log(b * (1.0 - q) / (q * (1.0 - b)));

  // Per-example weights on the normalized design rows.
  Vector source_weights(m());
  for (Eigen::Index i = 0; i < m(); ++i) {
    const double y = sign_of(design_.labels[static_cast<std::size_t>(i)]);
    source_weights[i] = phi_prime(y * margins.source[i]) * y;
    if (kind_ == BoundKind::dapbgd) source_weights[i] -= phi_dis_prime(margins.source[i]);
  }
  Vector data_term = design_.source.transpose() * source_weights;

  if (kind_ == BoundKind::dapbgd) {
    const Vector target_weights = margins.target.unaryExpr([](double a) { return phi_dis_prime(a); });
    data_term.noalias() += design_.target.transpose() * target_weights;
    const double prefactor = b * (1.0 - b) / (2.0 * md * (b - q));
    return prefactor * (4.0 * metric_theta + log_term * data_term);
  }
  const double prefactor = b * (1.0 - b) / (md * (b - q));
  return prefactor * (metric_theta + log_term * data_term);
}

ObjectiveReport BoundObjective::report(const Vector& theta) const {
  const Margins mg = margins(theta);
  ObjectiveReport r = evaluate(mg);
  try {
    r.gradient = gradient(mg, r, design_.metric * theta);
  } catch (const DegenerateGradient&) {
    r.gradient.resize(0);
  }
  return r;
}

LinearDesign primal_design(const LabeledSample& source) {
  const Eigen::Index d = source.dim();
  return LinearDesign{normalized_rows(source.points()), Matrix(0, d), source.labels(),
                      Matrix::Identity(d, d)};
}

LinearDesign primal_design(const PairedSample& paired) {
  const Eigen::Index d = paired.dim();
  return LinearDesign{normalized_rows(paired.source().points()),
                      normalized_rows(paired.target().points()), paired.source().labels(),
                      Matrix::Identity(d, d)};
}

double pbgd_bound(const WeightVector& w, const LabeledSample& source, double delta) {
  return BoundObjective(BoundKind::pbgd, primal_design(source), delta).value(w);
}

Vector pbgd_gradient(const WeightVector& w, const LabeledSample& source, double delta) {
  const BoundObjective objective(BoundKind::pbgd, primal_design(source), delta);
  const auto mg = objective.margins(w);
  return objective.gradient(mg, objective.evaluate(mg), w);
}

ObjectiveReport dapbgd_objective(const WeightVector& w, const PairedSample& paired,
                                 double delta) {
  return BoundObjective(BoundKind::dapbgd, primal_design(paired), delta).report(w);
}

Vector dapbgd_gradient(const WeightVector& w, const PairedSample& paired, double delta) {
  const BoundObjective objective(BoundKind::dapbgd, primal_design(paired), delta);
  const auto mg = objective.margins(w);
  return objective.gradient(mg, objective.evaluate(mg), w);
}

}  // namespace pbda

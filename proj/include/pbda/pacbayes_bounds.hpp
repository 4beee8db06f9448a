#pragma once

#include "pbda/dataset.hpp"
#include "pbda/gibbs_linear.hpp"

namespace pbda {

enum class BoundKind {
  pbgd,    ///< kl(R_S || R) <= (|w|^2 / 2 + ln(xi(m)/delta)) / m
  dapbgd,  ///< kl(B*_ST || B*) <= (|w|^2 + ln(xi(m)/delta)) / m
};

/// Gradients are rejected within this distance of a 0/0 state.
inline constexpr double kDegeneracyTol = 1e-12;

/// Right-hand side of a kl bound.
struct BoundInputs {
  Eigen::Index m = 1;
  double delta = 0.05;
  double w_norm_sq = 0.0;
  double complexity_rhs = 0.0;
};

/// Throws DomainError unless m >= 1, 0 < delta <= 1 and norm_sq >= 0.
BoundInputs make_bound_inputs(BoundKind kind, Eigen::Index m, double delta, double norm_sq);

/// Everything a trainer audits at one point of the parameter space.
/// For BoundKind::pbgd, `bstar` holds the empirical Gibbs risk (the quantity
/// that is kl-inverted) and `disagreement` is NaN.
struct ObjectiveReport {
  double objective = 0.0;
  double bstar = 0.0;
  double source_risk = 0.0;
  double disagreement = 0.0;
  double kl_budget = 0.0;
  double norm_sq = 0.0;
  /// Empty when the gradient is degenerate at this point.
  Vector gradient;
};

/// A bound over a parameter vector theta in which every normalized margin is
/// a linear function of theta and the KL term is the quadratic form
/// theta' G theta. Primal weights use rows x / |x| and G = I; kernel
/// expansions use normalized kernel columns and the anchor Gram matrix.
struct LinearDesign {
  Matrix source;  ///< m x p
  Matrix target;  ///< m x p, or 0 x p for BoundKind::pbgd
  std::vector<Label> labels;
  Matrix metric;  ///< p x p
};

class BoundObjective {
 public:
  struct Margins {
    Vector source;
    Vector target;
    double norm_sq = 0.0;
  };

  BoundObjective(BoundKind kind, LinearDesign design, double delta);

  BoundKind kind() const { return kind_; }
  Eigen::Index m() const { return design_.source.rows(); }
  Eigen::Index dim() const { return design_.source.cols(); }
  double delta() const { return delta_; }
  const LinearDesign& design() const { return design_; }

  Margins margins(const Vector& theta) const;

  /// Objective terms from precomputed margins; gradient left empty.
  ObjectiveReport evaluate(const Margins& margins) const;
  double value(const Vector& theta) const { return evaluate(margins(theta)).objective; }

  /// Implicit-function gradient of the kl-inverted bound.
  /// `metric_theta` is G theta. Throws DegenerateGradient when the objective
  /// is within kDegeneracyTol of the inverted quantity, or either touches
  /// {0, 1}.
  Vector gradient(const Margins& margins, const ObjectiveReport& report,
                  const Vector& metric_theta) const;

  /// Full report including the gradient when it exists.
  ObjectiveReport report(const Vector& theta) const;

 private:
  BoundKind kind_;
  LinearDesign design_;
  double delta_;
  double confidence_term_;  // ln(xi(m) / delta)
};

/// Primal design: rows x / |x|, identity metric.
LinearDesign primal_design(const LabeledSample& source);
LinearDesign primal_design(const PairedSample& paired);

double pbgd_bound(const WeightVector& w, const LabeledSample& source, double delta);
Vector pbgd_gradient(const WeightVector& w, const LabeledSample& source, double delta);

/// sup { eps : kl(B*_ST || eps) <= (|w|^2 + ln(xi(m)/delta)) / m } with audit.
ObjectiveReport dapbgd_objective(const WeightVector& w, const PairedSample& paired,
                                 double delta);
Vector dapbgd_gradient(const WeightVector& w, const PairedSample& paired, double delta);

}  // namespace pbda

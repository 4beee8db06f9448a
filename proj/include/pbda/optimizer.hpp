#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pbda/classifier.hpp"
#include "pbda/pacbayes_bounds.hpp"

namespace pbda {

struct TrainConfig {
  double delta = 0.05;
  int max_iters = 2000;
  double grad_tol = 1e-6;
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  int restarts = 3;
  std::uint64_t seed = 0;

  /// Throws DomainError on out-of-range hyperparameters.
  void validate() const;
};

/// One row of the audit trace. Row 0 is the initial point; later rows are
/// accepted steps. For PBGD `bstar` is the empirical Gibbs risk and
/// `disagreement` is NaN.
struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double bstar = 0.0;
  double source_risk = 0.0;
  double disagreement = 0.0;
  double kl_budget = 0.0;
  /// Fraction of source points on the wrong side of h_theta.
  double source_error = 0.0;
  double step = 0.0;
  double grad_norm = 0.0;
};

struct MinimizeResult {
  Vector theta;
  std::vector<IterationRecord> trace;
  bool converged = false;
  int iterations = 0;
};

struct TrainReport {
  BoundKind algorithm = BoundKind::dapbgd;
  Classifier model;
  std::vector<IterationRecord> trace;  ///< trace of the selected restart
  bool converged = false;
  int iterations = 0;
  int best_restart = 0;
  std::vector<double> restart_objectives;

  double final_objective() const { return trace.back().objective; }
};

/// Backtracking (Armijo) gradient descent on a bound from `init`.
///
/// Each iteration tries the previous accepted step divided by the backtrack
/// factor, starting from step_init. Stops when the gradient norm drops below
/// grad_tol, when the objective improves by less than 1e-10 (relative) over
/// 10 iterations, or when no step above 1e-20 satisfies the Armijo condition.
/// A degenerate gradient is handled by jittering theta by 1e-8 Gaussian
/// noise, at most 5 times per iteration.
MinimizeResult minimize(const BoundObjective& objective, const Vector& init,
                        const TrainConfig& config, std::uint64_t jitter_seed);

/// Best of config.restarts runs: restart 0 starts at zero, restart k >= 1 at a
/// seeded Gaussian direction scaled to norm 0.1 (in the KL metric).
TrainReport train(BoundKind kind, const BoundObjective& objective, const TrainConfig& config);

TrainReport train_pbgd(const LabeledSample& source, const TrainConfig& config,
                       const std::optional<KernelConfig>& kernel = std::nullopt);
/// Kernel training with explicit anchors (default anchors: the source points).
TrainReport train_pbgd(const LabeledSample& source, const TrainConfig& config,
                       const KernelConfig& kernel, const Matrix& anchors);

/// Target inputs enter only through the unlabeled half of `paired`.
TrainReport train_dapbgd(const PairedSample& paired, const TrainConfig& config,
                         const std::optional<KernelConfig>& kernel = std::nullopt);
/// Kernel training with explicit anchors (default anchors: all 2m points).
TrainReport train_dapbgd(const PairedSample& paired, const TrainConfig& config,
                         const KernelConfig& kernel, const Matrix& anchors);

inline const std::vector<double> kDefaultGammaGrid = {0.1, 0.5, 1.0, 2.0, 5.0};

struct GridSelection {
  TrainReport best;
  double gamma = 0.0;
  std::vector<double> final_objectives;  ///< one per grid point
};

/// Trains one Gaussian-kernel model per gamma and keeps the one with the
/// lowest final bound. No target labels are involved.
GridSelection select_gamma_pbgd(const LabeledSample& source, const TrainConfig& config,
                                const std::vector<double>& gammas = kDefaultGammaGrid);
GridSelection select_gamma_dapbgd(const PairedSample& paired, const TrainConfig& config,
                                  const std::vector<double>& gammas = kDefaultGammaGrid);

}  // namespace pbda

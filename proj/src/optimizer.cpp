#include "pbda/optimizer.hpp"

#include <cmath>
#include <random>

#include "pbda/errors.hpp"

namespace pbda {

namespace {

constexpr double kMinStep = 1e-20;
constexpr double kJitter = 1e-8;
constexpr int kMaxJitters = 5;
constexpr int kStallWindow = 10;
constexpr double kStallTol = 1e-10;
constexpr double kInitNorm = 0.1;

IterationRecord record(int iteration, const ObjectiveReport& r,
                       const BoundObjective::Margins& margins,
                       const std::vector<Label>& labels, double step) {
  Eigen::Index errors = 0;
  for (Eigen::Index i = 0; i < margins.source.size(); ++i) {
    const Label predicted = margins.source[i] >= 0.0 ? Label::positive : Label::negative;
    if (predicted != labels[static_cast<std::size_t>(i)]) ++errors;
  }
  const double source_error =
      static_cast<double>(errors) / static_cast<double>(margins.source.size());
  return IterationRecord{iteration,      r.objective, r.bstar,      r.source_risk,
                         r.disagreement, r.kl_budget, source_error, step,
                         0.0};
}

Vector random_init(const BoundObjective& objective, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector theta(objective.dim());
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = gauss(rng);
  const double norm_sq = theta.dot(objective.design().metric * theta);
  if (!(norm_sq > 0.0)) return Vector::Zero(objective.dim());
  return theta * (kInitNorm / std::sqrt(norm_sq));
}

}  // namespace

void TrainConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  if (max_iters < 0) throw DomainError("max_iters must be >= 0");
  if (!(grad_tol >= 0.0)) throw DomainError("grad_tol must be >= 0");
  if (!(step_init > 0.0)) throw DomainError("step_init must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw DomainError("backtrack_factor must lie in (0, 1)");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw DomainError("armijo_c must lie in (0, 1)");
  if (restarts < 1) throw DomainError("restarts must be >= 1");
}

MinimizeResult minimize(const BoundObjective& objective, const Vector& init,
                        const TrainConfig& config, std::uint64_t jitter_seed) {
  config.validate();
  const LinearDesign& design = objective.design();
  const bool has_target = objective.kind() == BoundKind::dapbgd;
  std::mt19937_64 jitter_rng(jitter_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  MinimizeResult result;
  result.theta = init;
  // Margins and G theta are carried along the iterates instead of being
  // recomputed: a trial step then costs O(m + p).
  auto margins = objective.margins(result.theta);
  Vector metric_theta = design.metric * result.theta;
  ObjectiveReport current = objective.evaluate(margins);
  result.trace.push_back(record(0, current, margins, design.labels, 0.0));

  double step = config.step_init;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    Vector grad;
    for (int attempt = 0;; ++attempt) {
      try {
        grad = objective.gradient(margins, current, metric_theta);
        break;
      } catch (const DegenerateGradient&) {
        if (attempt == kMaxJitters) return result;
        for (Eigen::Index j = 0; j < result.theta.size(); ++j) {
          result.theta[j] += kJitter * gauss(jitter_rng);
        }
        margins = objective.margins(result.theta);
        metric_theta = design.metric * result.theta;
        current = objective.evaluate(margins);
      }
    }
    const double grad_norm_sq = grad.squaredNorm();
    result.trace.back().grad_norm = std::sqrt(grad_norm_sq);
    if (std::sqrt(grad_norm_sq) < config.grad_tol) {
      result.converged = true;
      break;
    }

    const Vector source_dir = design.source * grad;
    const Vector target_dir = has_target ? Vector(design.target * grad) : Vector();
    const Vector metric_dir = design.metric * grad;
    const double cross = grad.dot(metric_theta);
    const double curvature = grad.dot(metric_dir);

    BoundObjective::Margins trial;
    ObjectiveReport trial_report;
    bool accepted = false;
    for (double s = step; s >= kMinStep; s *= config.backtrack_factor) {
      trial.source = margins.source - s * source_dir;
      if (has_target) trial.target = margins.target - s * target_dir;
      trial.norm_sq = margins.norm_sq - 2.0 * s * cross + s * s * curvature;
      trial_report = objective.evaluate(trial);
      if (trial_report.objective <= current.objective - config.armijo_c * s * grad_norm_sq) {
        step = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No representable descent step remains: numerically stationary.
      result.converged = true;
      break;
    }

    result.theta -= step * grad;
    metric_theta -= step * metric_dir;
    margins = std::move(trial);
    current = trial_report;
    result.trace.push_back(record(iter, current, margins, design.labels, step));
    result.iterations = iter;
    step /= config.backtrack_factor;

    const auto n = result.trace.size();
    if (n > kStallWindow) {
      const double before = result.trace[n - 1 - kStallWindow].objective;
      if (before - current.objective <= kStallTol * std::abs(before)) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

TrainReport train(BoundKind kind, const BoundObjective& objective, const TrainConfig& config) {
  config.validate();
  if (objective.kind() != kind) throw DomainError("train: bound kind mismatch");
  TrainReport report;
  report.algorithm = kind;
  MinimizeResult best;
  for (int r = 0; r < config.restarts; ++r) {
    const auto ur = static_cast<std::uint64_t>(r);
    const Vector init = r == 0 ? Vector(Vector::Zero(objective.dim()))
                               : random_init(objective, derive_seed(config.seed, ur));
    MinimizeResult run = minimize(objective, init, config, derive_seed(config.seed, 1000 + ur));
    const double final_objective = run.trace.back().objective;
    report.restart_objectives.push_back(final_objective);
    if (r == 0 || final_objective < best.trace.back().objective) {
      best = std::move(run);
      report.best_restart = r;
    }
  }
  report.trace = std::move(best.trace);
  report.converged = best.converged;
  report.iterations = best.iterations;
  report.model = Classifier::primal(std::move(best.theta));
  return report;
}

TrainReport train_pbgd(const LabeledSample& source, const TrainConfig& config,
                       const std::optional<KernelConfig>& kernel) {
  if (source.empty()) throw DimensionError("train_pbgd: empty sample");
  if (kernel) return train_pbgd(source, config, *kernel, source.points());
  const BoundObjective objective(BoundKind::pbgd, primal_design(source), config.delta);
  return train(BoundKind::pbgd, objective, config);
}

TrainReport train_pbgd(const LabeledSample& source, const TrainConfig& config,
                       const KernelConfig& kernel, const Matrix& anchors) {
  const BoundObjective objective(BoundKind::pbgd, dual_design(source, anchors, kernel),
                                 config.delta);
  TrainReport report = train(BoundKind::pbgd, objective, config);
  report.model = Classifier::dual(kernel, DualWeights{report.model.weights(), anchors});
  return report;
}

TrainReport train_dapbgd(const PairedSample& paired, const TrainConfig& config,
                         const std::optional<KernelConfig>& kernel) {
  if (kernel) return train_dapbgd(paired, config, *kernel, paired_anchors(paired));
  const BoundObjective objective(BoundKind::dapbgd, primal_design(paired), config.delta);
  return train(BoundKind::dapbgd, objective, config);
}

TrainReport train_dapbgd(const PairedSample& paired, const TrainConfig& config,
                         const KernelConfig& kernel, const Matrix& anchors) {
  const BoundObjective objective(BoundKind::dapbgd, dual_design(paired, anchors, kernel),
                                 config.delta);
  TrainReport report = train(BoundKind::dapbgd, objective, config);
  report.model = Classifier::dual(kernel, DualWeights{report.model.weights(), anchors});
  return report;
}

namespace {

template <typename TrainFn>
GridSelection select_gamma(const std::vector<double>& gammas, TrainFn&& train_one) {
  if (gammas.empty()) throw DomainError("gamma grid must be nonempty");
  GridSelection selection;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    TrainReport report = train_one(KernelConfig{KernelKind::gaussian, gammas[g], 0.0});
    const double objective = report.final_objective();
    selection.final_objectives.push_back(objective);
    if (g == 0 || objective < selection.best.final_objective()) {
      selection.best = std::move(report);
      selection.gamma = gammas[g];
    }
  }
  return selection;
}

}  // namespace

GridSelection select_gamma_pbgd(const LabeledSample& source, const TrainConfig& config,
                                const std::vector<double>& gammas) {
  return select_gamma(gammas, [&](const KernelConfig& k) { return train_pbgd(source, config, k); });
}

GridSelection select_gamma_dapbgd(const PairedSample& paired, const TrainConfig& config,
                                  const std::vector<double>& gammas) {
  return select_gamma(gammas,
                      [&](const KernelConfig& k) { return train_dapbgd(paired, config, k); });
}

}  // namespace pbda

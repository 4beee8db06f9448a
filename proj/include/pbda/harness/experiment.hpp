#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pbda/dataset.hpp"
#include "pbda/optimizer.hpp"

namespace pbda::harness {

struct ExperimentConfig {
  std::vector<double> angles = {20.0, 30.0, 40.0, 50.0};
  int n_per_class = 150;
  double noise_std = 0.05;
  /// Labeled target test points per class, used for scoring only.
  int test_per_class = 500;
  std::uint64_t data_seed = 1;
  std::uint64_t pair_seed = 2;
  std::uint64_t optimizer_seed = 3;
  std::vector<BoundKind> algorithms = {BoundKind::pbgd, BoundKind::dapbgd};
  std::vector<double> gammas = kDefaultGammaGrid;
  int repeats = 1;
  int threads = 1;
  /// Record measured wall time in results.csv (otherwise 0, keeping the
  /// file byte-for-byte reproducible).
  bool timing = false;
  TrainConfig train;

  void validate() const;
};

/// Data of one (repeat, angle) task. The source draw does not depend on the
/// angle; target and test draws are rotated copies of fresh moons draws.
struct AngleData {
  LabeledSample source;
  UnlabeledSample target;
  LabeledSample test;
  PairedSample paired;
};
AngleData make_angle_data(const ExperimentConfig& config, int repeat, double angle);

/// One results.csv row, averaged over repeats.
struct ResultRow {
  std::string algorithm;
  double angle = 0.0;
  double target_accuracy = 0.0;  ///< percent
  double source_gibbs_risk = 0.0;
  double disagreement = 0.0;
  double bound_value = 0.0;
  double wall_time_ms = 0.0;
};

/// Outcome of one (algorithm, angle, repeat) cell after gamma selection.
struct CellOutcome {
  BoundKind algorithm = BoundKind::dapbgd;
  double angle = 0.0;
  int repeat = 0;
  double gamma = 0.0;
  std::vector<double> grid_objectives;
  double target_accuracy = 0.0;
  double source_gibbs_risk = 0.0;
  double disagreement = 0.0;
  double bound_value = 0.0;
  double wall_time_ms = 0.0;
  bool converged = false;
  Classifier model;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;    ///< sorted by (algorithm, angle)
  std::vector<CellOutcome> cells; ///< sorted by (algorithm, angle, repeat)
};

/// Runs every (algorithm, angle, repeat, gamma) training job, on up to
/// config.threads threads. Results do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes results.csv, tradeoff.csv, selection.csv and, per angle,
/// boundary_<angle>.csv / boundary_<angle>.svg (models of repeat 0).
void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::filesystem::path& out_dir);

inline constexpr const char* kResultsHeader =
    "algorithm,angle,target_accuracy,source_gibbs_risk,disagreement,bound_value,wall_time_ms";

}  // namespace pbda::harness

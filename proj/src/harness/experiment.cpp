#include "pbda/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <thread>

#include "pbda/errors.hpp"
#include "pbda/harness/model_io.hpp"
#include "pbda/harness/svg.hpp"

namespace pbda::harness {

namespace {

struct Job {
  std::size_t algorithm = 0;
  std::size_t angle = 0;
  int repeat = 0;
  std::size_t gamma = 0;
};

struct JobOutcome {
  TrainReport report;
  double wall_time_ms = 0.0;
};

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (angles.empty()) throw DomainError("experiment needs at least one angle");
  if (algorithms.empty()) throw DomainError("experiment needs at least one algorithm");
  if (gammas.empty()) throw DomainError("experiment needs a nonempty gamma grid");
  for (double g : gammas) {
    if (!(g > 0.0)) throw DomainError("gamma values must be positive");
  }
  if (n_per_class < 1 || test_per_class < 1) throw DomainError("sample sizes must be >= 1");
  if (!(noise_std >= 0.0)) throw DomainError("noise must be >= 0");
  if (repeats < 1) throw DomainError("repeats must be >= 1");
  if (threads < 1) throw DomainError("threads must be >= 1");
  train.validate();
}

AngleData make_angle_data(const ExperimentConfig& config, int repeat, double angle) {
  const auto r = static_cast<std::uint64_t>(repeat);
  LabeledSample source =
      generate_moons(config.n_per_class, config.noise_std, derive_seed(config.data_seed, 3 * r));
  UnlabeledSample target = rotate(
      generate_moons(config.n_per_class, config.noise_std, derive_seed(config.data_seed, 3 * r + 1))
          .inputs(),
      angle);
  LabeledSample test = rotate(generate_moons(config.test_per_class, config.noise_std,
                                             derive_seed(config.data_seed, 3 * r + 2)),
                              angle);
  PairedSample paired = pair(source, target, derive_seed(config.pair_seed, r));
  return AngleData{std::move(source), std::move(target), std::move(test), std::move(paired)};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_angles = config.angles.size();
  const auto n_repeats = static_cast<std::size_t>(config.repeats);

  std::vector<AngleData> data;
  for (std::size_t a = 0; a < n_angles; ++a) {
    for (int r = 0; r < config.repeats; ++r) {
      data.push_back(make_angle_data(config, r, config.angles[a]));
    }
  }
  const auto data_for = [&](const Job& job) -> const AngleData& {
    return data[job.angle * n_repeats + static_cast<std::size_t>(job.repeat)];
  };

  std::vector<Job> jobs;
  for (std::size_t alg = 0; alg < config.algorithms.size(); ++alg) {
    for (std::size_t a = 0; a < n_angles; ++a) {
      for (int r = 0; r < config.repeats; ++r) {
        for (std::size_t g = 0; g < config.gammas.size(); ++g) jobs.push_back({alg, a, r, g});
      }
    }
  }

  std::vector<JobOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const AngleData& d = data_for(job);
      TrainConfig tc = config.train;
      tc.seed = derive_seed(config.optimizer_seed, static_cast<std::uint64_t>(job.repeat));
      const KernelConfig kernel{KernelKind::gaussian, config.gammas[job.gamma], 0.0};
      const auto start = std::chrono::steady_clock::now();
      outcomes[j].report = config.algorithms[job.algorithm] == BoundKind::pbgd
                               ? train_pbgd(d.source, tc, kernel)
                               : train_dapbgd(d.paired, tc, kernel);
      outcomes[j].wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
    }
  };
  const int n_threads = std::min<int>(config.threads, static_cast<int>(jobs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  // Gamma selection per cell; jobs of one cell are contiguous in grid order.
  ExperimentResult result;
  const std::size_t n_gammas = config.gammas.size();
  for (std::size_t first = 0; first < jobs.size(); first += n_gammas) {
    const Job& job = jobs[first];
    CellOutcome cell;
    cell.algorithm = config.algorithms[job.algorithm];
    cell.angle = config.angles[job.angle];
    cell.repeat = job.repeat;
    std::size_t best = first;
    for (std::size_t g = 0; g < n_gammas; ++g) {
      const double objective = outcomes[first + g].report.final_objective();
      cell.grid_objectives.push_back(objective);
      cell.wall_time_ms += outcomes[first + g].wall_time_ms;
      if (objective < outcomes[best].report.final_objective()) best = first + g;
    }
    const TrainReport& chosen = outcomes[best].report;
    const AngleData& d = data_for(job);
    cell.gamma = config.gammas[best - first];
    cell.model = chosen.model;
    cell.converged = chosen.converged;
    cell.bound_value = chosen.final_objective();
    cell.target_accuracy = 100.0 * (1.0 - cell.model.error_rate(d.test));
    cell.source_gibbs_risk = cell.model.gibbs_risk(d.paired.source());
    cell.disagreement = cell.model.disagreement(d.paired);
    if (!config.timing) cell.wall_time_ms = 0.0;
    result.cells.push_back(std::move(cell));
  }

  std::sort(result.cells.begin(), result.cells.end(), [](const CellOutcome& a, const CellOutcome& b) {
    const auto ka = std::make_tuple(algorithm_name(a.algorithm), a.angle, a.repeat);
    const auto kb = std::make_tuple(algorithm_name(b.algorithm), b.angle, b.repeat);
    return ka < kb;
  });

  for (std::size_t c = 0; c < result.cells.size(); c += n_repeats) {
    ResultRow row;
    row.algorithm = algorithm_name(result.cells[c].algorithm);
    row.angle = result.cells[c].angle;
    for (std::size_t r = 0; r < n_repeats; ++r) {
      const CellOutcome& cell = result.cells[c + r];
      row.target_accuracy += cell.target_accuracy;
      row.source_gibbs_risk += cell.source_gibbs_risk;
      row.disagreement += cell.disagreement;
      row.bound_value += cell.bound_value;
      row.wall_time_ms += cell.wall_time_ms;
    }
    const double n = static_cast<double>(n_repeats);
    row.target_accuracy /= n;
    row.source_gibbs_risk /= n;
    row.disagreement /= n;
    row.bound_value /= n;
    row.wall_time_ms /= n;
    result.rows.push_back(row);
  }
  return result;
}

void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IOError("cannot create " + out_dir.string() + ": " + ec.message());

  {
    auto out = open_csv(out_dir / "results.csv");
    out << kResultsHeader << '\n';
    for (const auto& r : result.rows) {
      out << r.algorithm << ',' << format_shortest(r.angle) << ','
          << format_shortest(r.target_accuracy) << ',' << format_shortest(r.source_gibbs_risk)
          << ',' << format_shortest(r.disagreement) << ',' << format_shortest(r.bound_value)
          << ',' << format_shortest(r.wall_time_ms) << '\n';
    }
  }
  {
    auto out = open_csv(out_dir / "tradeoff.csv");
    out << "algorithm,angle,source_gibbs_risk,disagreement\n";
    for (const auto& r : result.rows) {
      out << r.algorithm << ',' << format_shortest(r.angle) << ','
          << format_shortest(r.source_gibbs_risk) << ',' << format_shortest(r.disagreement)
          << '\n';
    }
  }
  {
    auto out = open_csv(out_dir / "selection.csv");
    out << "algorithm,angle,repeat,gamma,final_objective,selected\n";
    for (const auto& cell : result.cells) {
      for (std::size_t g = 0; g < config.gammas.size(); ++g) {
        out << algorithm_name(cell.algorithm) << ',' << format_shortest(cell.angle) << ','
            << cell.repeat << ',' << format_shortest(config.gammas[g]) << ','
            << format_shortest(cell.grid_objectives[g]) << ','
            << (config.gammas[g] == cell.gamma ? 1 : 0) << '\n';
      }
    }
  }

  // Boundaries of repeat 0, one file per angle with one column per algorithm.
  std::vector<double> angles = config.angles;
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  for (double angle : angles) {
    const AngleData d = make_angle_data(config, 0, angle);
    std::vector<std::string> names;
    std::vector<const Classifier*> models;
    for (const auto& cell : result.cells) {
      if (cell.angle == angle && cell.repeat == 0) {
        names.push_back(algorithm_name(cell.algorithm));
        models.push_back(&cell.model);
      }
    }
    Matrix all(d.source.size() + d.target.size(), 2);
    all << d.source.points(), d.target.points();
    const BoundaryGrid grid = make_boundary_grid(all, names, models);
    const std::string stem = "boundary_" + format_shortest(angle);
    save_boundary_csv(grid, out_dir / (stem + ".csv"));
    const auto shaded = std::find(names.begin(), names.end(), "dapbgd");
    const std::size_t which = shaded == names.end() ? 0 : static_cast<std::size_t>(shaded - names.begin());
    save_boundary_svg(grid, which, d.source, d.target,
                      names[which] + " decision at " + format_shortest(angle) + " degrees",
                      out_dir / (stem + ".svg"));
  }
}

}  // namespace pbda::harness

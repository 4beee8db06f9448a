// pbda: command-line front end for PAC-Bayesian domain adaptation.
//
//   pbda generate   --angle 30 --n 150 --noise 0.05 --seed 1 --out data/
//   pbda train      --source data/source.csv --target data/target.csv --out run/
//   pbda evaluate   --model run/model.txt --source ... --target ... --test ...
//   pbda experiment --out results/ --repeats 5
//   pbda mc-check   --model run/model.txt --source ... --target ...
//
// Exit codes: 0 ok, 2 usage, 3 IO, 4 non-convergence under --strict,
// 5 verification failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pbda/errors.hpp"
#include "pbda/harness/experiment.hpp"
#include "pbda/harness/mc_check.hpp"
#include "pbda/harness/model_io.hpp"
#include "pbda/kernelization.hpp"

namespace fs = std::filesystem;
using namespace pbda;
using harness::format_shortest;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIO = 3;
constexpr int kExitNonConvergence = 4;
constexpr int kExitVerification = 5;

// Streams derived from --seed by the train / evaluate / mc-check commands.
constexpr std::uint64_t kPairStream = 1;
constexpr std::uint64_t kOptimizerStream = 2;

struct Globals {
  std::uint64_t seed = 1;
  double delta = 0.05;
  std::string out = ".";
  bool strict = false;
  int threads = 1;
};

struct TrainFlags {
  int max_iters = TrainConfig{}.max_iters;
  int restarts = TrainConfig{}.restarts;
  double grad_tol = TrainConfig{}.grad_tol;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-iters", max_iters, "Iteration cap per restart")->capture_default_str();
    cmd->add_option("--restarts", restarts, "Random restarts (restart 0 starts at zero)")
        ->capture_default_str();
    cmd->add_option("--grad-tol", grad_tol, "Gradient-norm stopping tolerance")
        ->capture_default_str();
  }
  TrainConfig config(const Globals& g, std::uint64_t seed) const {
    TrainConfig c;
    c.delta = g.delta;
    c.max_iters = max_iters;
    c.restarts = restarts;
    c.grad_tol = grad_tol;
    c.seed = seed;
    c.validate();
    return c;
  }
};

fs::path output_dir(const Globals& g) {
  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IOError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::string percent(double fraction) { return format_shortest(100.0 * fraction); }

// ---- generate -------------------------------------------------------------

struct GenerateFlags {
  double angle = 0.0;
  int n = 150;
  double noise = 0.05;
  int test_n = 0;
};

int run_generate(const Globals& g, const GenerateFlags& f) {
  harness::ExperimentConfig config;
  config.n_per_class = f.n;
  config.noise_std = f.noise;
  config.test_per_class = f.test_n > 0 ? f.test_n : 1;
  config.data_seed = g.seed;
  if (f.n < 1) throw DomainError("--n must be >= 1");
  if (!(f.noise >= 0.0)) throw DomainError("--noise must be >= 0");
  const harness::AngleData data = harness::make_angle_data(config, 0, f.angle);

  const fs::path dir = output_dir(g);
  save_csv(data.source, dir / "source.csv");
  save_csv(data.target, dir / "target.csv");
  std::cout << "wrote " << (dir / "source.csv").string() << " (" << data.source.size()
            << " rows) and " << (dir / "target.csv").string() << " (" << data.target.size()
            << " rows)\n";
  if (f.test_n > 0) {
    save_csv(data.test, dir / "test.csv");
    std::cout << "wrote " << (dir / "test.csv").string() << " (" << data.test.size()
              << " rows)\n";
  }
  return 0;
}

// ---- train ----------------------------------------------------------------

struct ModelFlags {
  std::string algo = "dapbgd";
  std::string kernel = "gaussian";
  std::string gamma = "auto";
  std::string source;
  std::string target;
  TrainFlags train;
};

std::vector<double> gamma_grid(const std::string& gamma) {
  if (gamma == "auto") return kDefaultGammaGrid;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(gamma, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != gamma.size() || !(v > 0.0)) {
    throw DomainError("--gamma must be 'auto' or a positive number, got '" + gamma + "'");
  }
  return {v};
}

int run_train(const Globals& g, const ModelFlags& f) {
  const BoundKind kind = harness::parse_algorithm(f.algo);
  if (f.kernel != "gaussian" && f.kernel != "linear") {
    throw DomainError("--kernel must be gaussian or linear");
  }
  const TrainConfig config = f.train.config(g, derive_seed(g.seed, kOptimizerStream));
  const LabeledSample source = load_labeled_csv(f.source);
  std::optional<PairedSample> paired;
  if (kind == BoundKind::dapbgd) {
    if (f.target.empty()) throw DomainError("dapbgd training needs --target");
    paired.emplace(pair(source, load_unlabeled_csv(f.target), derive_seed(g.seed, kPairStream)));
  }

  TrainReport report;
  if (f.kernel == "linear") {
    report = kind == BoundKind::pbgd ? train_pbgd(source, config) : train_dapbgd(*paired, config);
  } else {
    const std::vector<double> grid = gamma_grid(f.gamma);
    const GridSelection sel = kind == BoundKind::pbgd
                                  ? select_gamma_pbgd(source, config, grid)
                                  : select_gamma_dapbgd(*paired, config, grid);
    if (grid.size() > 1) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::cout << "gamma=" << format_shortest(grid[i])
                  << " final_bound=" << format_shortest(sel.final_objectives[i])
                  << (grid[i] == sel.gamma ? "  <- selected" : "") << '\n';
      }
    }
    report = sel.best;
  }

  const fs::path dir = output_dir(g);
  harness::save_model({kind, g.delta, report.model}, dir / "model.txt");
  harness::save_trace_csv(report.trace, dir / "trace.csv");
  const IterationRecord& last = report.trace.back();
  std::cout << harness::algorithm_name(kind) << ": bound=" << format_shortest(last.objective)
            << " source_error=" << percent(last.source_error) << "% iterations="
            << report.iterations << " converged=" << (report.converged ? "yes" : "no") << '\n';
  if (g.strict && !report.converged) {
    std::cerr << "error: optimizer did not converge within " << config.max_iters
              << " iterations\n";
    return kExitNonConvergence;
  }
  return 0;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateFlags {
  std::string model;
  std::string source;
  std::string target;
  std::string test;
};

double bound_of(const harness::ModelFile& file, const LabeledSample& source,
                const std::optional<PairedSample>& paired) {
  const Classifier& c = file.model;
  if (file.algorithm == BoundKind::pbgd) {
    return c.is_dual() ? dual_pbgd_bound(c.dual_weights(), source, *c.kernel(), file.delta)
                       : pbgd_bound(c.weights(), source, file.delta);
  }
  if (!paired) return std::nan("");
  return c.is_dual()
             ? dual_dapbgd_objective(c.dual_weights(), *paired, *c.kernel(), file.delta).objective
             : dapbgd_objective(c.weights(), *paired, file.delta).objective;
}

int run_evaluate(const Globals& g, const EvaluateFlags& f) {
  const harness::ModelFile file = harness::load_model(f.model);
  const Classifier& c = file.model;
  const LabeledSample source = load_labeled_csv(f.source);
  std::optional<PairedSample> paired;
  if (!f.target.empty()) {
    paired.emplace(pair(source, load_unlabeled_csv(f.target), derive_seed(g.seed, kPairStream)));
  }

  std::vector<std::pair<std::string, double>> rows;
  const double bound = bound_of(file, source, paired);
  if (!std::isnan(bound)) rows.emplace_back("bound_value", bound);
  rows.emplace_back("source_error", c.error_rate(source));
  rows.emplace_back("source_gibbs_risk", c.gibbs_risk(source));
  if (paired) {
    rows.emplace_back("disagreement", c.disagreement(*paired));
    rows.emplace_back("adaptation_loss", c.adaptation_loss(*paired));
  }
  if (!f.test.empty()) {
    rows.emplace_back("target_accuracy", 100.0 * (1.0 - c.error_rate(load_labeled_csv(f.test))));
  }

  const fs::path path = output_dir(g) / "evaluation.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << "quantity,value\n";
  for (const auto& [name, value] : rows) {
    out << name << ',' << format_shortest(value) << '\n';
    std::cout << name << " = " << format_shortest(value) << '\n';
  }
  if (!out) throw IOError("write failed for " + path.string());
  return 0;
}

// ---- experiment -----------------------------------------------------------

struct ExperimentFlags {
  std::vector<double> angles = harness::ExperimentConfig{}.angles;
  int n = 150;
  double noise = 0.05;
  int test_n = 500;
  std::vector<std::string> algos = {"pbgd", "dapbgd"};
  std::vector<double> gammas = kDefaultGammaGrid;
  int repeats = 1;
  bool timing = false;
  TrainFlags train;
};

int run_experiment(const Globals& g, const ExperimentFlags& f) {
  harness::ExperimentConfig config;
  config.angles = f.angles;
  config.n_per_class = f.n;
  config.noise_std = f.noise;
  config.test_per_class = f.test_n;
  config.data_seed = g.seed;
  config.pair_seed = g.seed + 1;
  config.optimizer_seed = g.seed + 2;
  config.algorithms.clear();
  for (const auto& a : f.algos) config.algorithms.push_back(harness::parse_algorithm(a));
  config.gammas = f.gammas;
  config.repeats = f.repeats;
  config.threads = g.threads;
  config.timing = f.timing;
  config.train = f.train.config(g, 0);

  const harness::ExperimentResult result = harness::run_experiment(config);
  const fs::path dir = output_dir(g);
  harness::write_experiment(config, result, dir);

  std::cout << "algorithm  angle  target_acc  source_risk  disagreement  bound\n";
  for (const auto& r : result.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-9s  %5g  %9.2f%%  %11.4f  %12.4f  %.4f\n",
                  r.algorithm.c_str(), r.angle, r.target_accuracy, r.source_gibbs_risk,
                  r.disagreement, r.bound_value);
    std::cout << line;
  }
  std::cout << "results written to " << dir.string() << '\n';

  int unconverged = 0;
  for (const auto& cell : result.cells) unconverged += cell.converged ? 0 : 1;
  if (g.strict && unconverged > 0) {
    std::cerr << "error: " << unconverged << " selected model(s) did not converge\n";
    return kExitNonConvergence;
  }
  return 0;
}

// ---- mc-check -------------------------------------------------------------

struct McFlags {
  std::string model;
  std::string source;
  std::string target;
  std::uint64_t draws = harness::kReferenceDraws;
};

int run_mc_check(const Globals& g, const McFlags& f) {
  const harness::ModelFile file = harness::load_model(f.model);
  const LabeledSample source = load_labeled_csv(f.source);
  std::optional<UnlabeledSample> target;
  if (!f.target.empty()) target = load_unlabeled_csv(f.target);
  if (f.draws < 1) throw DomainError("--draws must be >= 1");

  // The pairing must match the one used by train/evaluate with the same seed.
  const harness::McReport report = harness::mc_check(file.model, source, target, f.draws, g.seed);
  harness::save_mc_report(report, output_dir(g) / "mc_check.csv");
  std::cout << harness::format_mc_report(report);
  if (!report.all_pass()) {
    std::cerr << "error: Monte-Carlo verification failed\n";
    return kExitVerification;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAC-Bayesian domain adaptation (PBGD / DA-PBGD) on rotated two-moons data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read option=value lines from a file (flags take precedence)");

  Globals g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--delta", g.delta, "Confidence parameter of the bound")
      ->check(CLI::Validator(
          [](std::string& v) {
            double d = 0.0;
            if (!CLI::detail::lexical_cast(v, d) || !(d > 0.0 && d <= 1.0)) {
              return std::string("delta must lie in (0, 1]");
            }
            return std::string();
          },
          "in (0,1]"))
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_flag("--strict", g.strict, "Exit 4 when the optimizer does not converge");
  app.add_option("--threads", g.threads, "Worker threads for experiment sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  GenerateFlags gen;
  CLI::App* generate = app.add_subcommand("generate", "Write source.csv and rotated target.csv");
  generate->add_option("--angle", gen.angle, "Target rotation in degrees")->capture_default_str();
  generate->add_option("--n", gen.n, "Points per class")->capture_default_str();
  generate->add_option("--noise", gen.noise, "Gaussian noise std")->capture_default_str();
  generate->add_option("--with-test", gen.test_n,
                       "Also write a labeled rotated test.csv with this many points per class");

  ModelFlags tf;
  CLI::App* train = app.add_subcommand("train", "Train PBGD or DA-PBGD; writes model.txt and trace.csv");
  train->add_option("--algo", tf.algo, "pbgd or dapbgd")
      ->check(CLI::IsMember({"pbgd", "dapbgd"}))
      ->capture_default_str();
  train->add_option("--kernel", tf.kernel, "gaussian (dual weights) or linear (primal weights)")
      ->check(CLI::IsMember({"gaussian", "linear"}))
      ->capture_default_str();
  train->add_option("--gamma", tf.gamma, "Gaussian kernel width, or 'auto' for grid selection")
      ->capture_default_str();
  train->add_option("--source", tf.source, "Labeled source CSV")->required();
  train->add_option("--target", tf.target, "Unlabeled target CSV (dapbgd only)");
  tf.train.add_to(train);

  EvaluateFlags ef;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Bound, risks and accuracies of a saved model");
  evaluate->add_option("--model", ef.model, "Model file")->required();
  evaluate->add_option("--source", ef.source, "Labeled source CSV")->required();
  evaluate->add_option("--target", ef.target, "Unlabeled target CSV");
  evaluate->add_option("--test", ef.test, "Labeled target test CSV (scoring only)");

  ExperimentFlags xf;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Angle sweep: results, trade-off and boundary files");
  experiment->add_option("--angles", xf.angles, "Rotation angles in degrees")
      ->delimiter(',')
      ->capture_default_str();
  experiment->add_option("--n", xf.n, "Training points per class")->capture_default_str();
  experiment->add_option("--noise", xf.noise, "Gaussian noise std")->capture_default_str();
  experiment->add_option("--test-n", xf.test_n, "Test points per class")->capture_default_str();
  experiment->add_option("--algos", xf.algos, "Algorithms to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"pbgd", "dapbgd"}))
      ->capture_default_str();
  experiment->add_option("--gammas", xf.gammas, "Gaussian kernel grid")
      ->delimiter(',')
      ->capture_default_str();
  experiment->add_option("--repeats", xf.repeats, "Independent repetitions to average")
      ->capture_default_str();
  experiment->add_flag("--timing", xf.timing,
                       "Record wall times in results.csv (otherwise 0 for reproducible files)");
  xf.train.add_to(experiment);

  McFlags mf;
  CLI::App* mc = app.add_subcommand("mc-check", "Check closed forms against Monte-Carlo estimates");
  mc->add_option("--model", mf.model, "Model file")->required();
  mc->add_option("--source", mf.source, "Labeled source CSV")->required();
  mc->add_option("--target", mf.target, "Unlabeled target CSV (enables pairwise checks)");
  mc->add_option("--draws", mf.draws, "Monte-Carlo draws")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIO;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return run_generate(g, gen);
    if (*train) return run_train(g, tf);
    if (*evaluate) return run_evaluate(g, ef);
    if (*experiment) return run_experiment(g, xf);
    if (*mc) return run_mc_check(g, mf);
  } catch (const pbda::IOError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIO;
  } catch (const pbda::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIO;
  } catch (const pbda::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pbda::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}

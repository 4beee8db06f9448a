#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pbda/errors.hpp"
#include "pbda/harness/experiment.hpp"
#include "pbda/harness/mc_check.hpp"
#include "pbda/harness/model_io.hpp"
#include "pbda/harness/svg.hpp"
#include "test_util.hpp"

using namespace pbda;
using namespace pbda::harness;
using namespace pbda::testing;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pbda_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ExperimentConfig tiny_experiment() {
  ExperimentConfig c;
  c.angles = {10.0, 30.0};
  c.n_per_class = 15;
  c.test_per_class = 50;
  c.gammas = {1.0, 5.0};
  c.train.max_iters = 100;
  c.train.restarts = 1;
  return c;
}

}  // namespace

TEST(ModelIo, PrimalRoundTrip) {
  const fs::path dir = temp_dir("primal");
  const ModelFile file{BoundKind::pbgd, 0.1, Classifier::primal(gaussian_vector(3, 1.0, 1))};
  save_model(file, dir / "m.txt");
  const ModelFile back = load_model(dir / "m.txt");
  EXPECT_EQ(back.algorithm, BoundKind::pbgd);
  EXPECT_EQ(back.delta, 0.1);
  EXPECT_FALSE(back.model.is_dual());
  EXPECT_EQ(back.model.weights(), file.model.weights());
}

TEST(ModelIo, DualRoundTrip) {
  const fs::path dir = temp_dir("dual");
  const Matrix anchors = gaussian_points(5, 2, 2);
  const KernelConfig k{KernelKind::gaussian, 0.3, 1e-4};
  const ModelFile file{BoundKind::dapbgd, 0.05,
                       Classifier::dual(k, DualWeights{gaussian_vector(5, 1.0, 3), anchors})};
  save_model(file, dir / "m.txt");
  const ModelFile back = load_model(dir / "m.txt");
  ASSERT_TRUE(back.model.is_dual());
  EXPECT_EQ(back.model.kernel()->gamma, 0.3);
  EXPECT_EQ(back.model.kernel()->ridge, 1e-4);
  EXPECT_EQ(back.model.anchors(), anchors);
  EXPECT_EQ(back.model.weights(), file.model.weights());
  const Matrix probe = gaussian_points(10, 2, 4);
  EXPECT_EQ(back.model.margins(probe), file.model.margins(probe));
}

TEST(ModelIo, Errors) {
  const fs::path dir = temp_dir("model_errors");
  EXPECT_THROW(load_model(dir / "missing.txt"), IOError);
  std::ofstream(dir / "bad.txt") << "format=pbda-model\nversion=1\nalgorithm=pbgd\n"
                                     "representation=primal\ndelta=0.05\ninput_dim=2\n"
                                     "weights=2\n[weights]\n0.5\nnope\n";
  try {
    load_model(dir / "bad.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 10u);
  }
  std::ofstream(dir / "short.txt") << "format=pbda-model\nversion=1\nalgorithm=pbgd\n";
  EXPECT_THROW(load_model(dir / "short.txt"), ParseError);
  std::ofstream(dir / "algo.txt") << "format=pbda-model\nversion=1\nalgorithm=svm\n";
  EXPECT_THROW(load_model(dir / "algo.txt"), Error);
}

TEST(TraceCsv, HeaderAndEmptyDisagreementForPbgd) {
  const fs::path dir = temp_dir("trace");
  const TrainConfig c{.max_iters = 5, .restarts = 1};
  const TrainReport r = train_pbgd(random_labeled(20, 2, 5), c);
  save_trace_csv(r.trace, dir / "trace.csv");
  const auto rows = lines(dir / "trace.csv");
  ASSERT_EQ(rows.size(), r.trace.size() + 1);
  EXPECT_EQ(rows[0],
            "iteration,objective,bstar,source_risk,disagreement,kl_budget,source_error,step,"
            "grad_norm");
  EXPECT_NE(rows[1].find(",,"), std::string::npos);
}

TEST(FormatShortest, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 97.6, 1e-300, -2.5}) EXPECT_EQ(std::stod(format_shortest(v)), v);
  EXPECT_EQ(format_shortest(30.0), "30");
}

TEST(Boundary, GridCsvAndSvg) {
  const fs::path dir = temp_dir("boundary");
  const LabeledSample s = generate_moons(10, 0.05, 1);
  const UnlabeledSample t = rotate(generate_moons(10, 0.05, 2).inputs(), 30.0);
  const Classifier c = Classifier::primal(Vector::Ones(2));
  const BoundaryGrid grid = make_boundary_grid(s.points(), {"pbgd"}, {&c});
  EXPECT_EQ(grid.resolution, 200);
  const Eigen::Vector2d lo = s.points().colwise().minCoeff(), hi = s.points().colwise().maxCoeff();
  EXPECT_NEAR(grid.x_max - grid.x_min, 1.2 * (hi.x() - lo.x()), 1e-12);
  EXPECT_NEAR(grid.y_min, lo.y() - 0.1 * (hi.y() - lo.y()), 1e-12);

  save_boundary_csv(grid, dir / "b.csv");
  const auto rows = lines(dir / "b.csv");
  ASSERT_EQ(rows.size(), 40001u);
  EXPECT_EQ(rows[0], "x1,x2,pbgd");

  save_boundary_svg(grid, 0, s, t, "test", dir / "b.svg");
  const std::string svg = slurp(dir / "b.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("#d9f2d9"), std::string::npos);
  EXPECT_NE(svg.find("#f9dded"), std::string::npos);
  EXPECT_NE(svg.find("#2ca02c"), std::string::npos);
  EXPECT_NE(svg.find("#e377c2"), std::string::npos);
  EXPECT_NE(svg.find("#8c8c8c"), std::string::npos);
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1)) {
    ++circles;
  }
  EXPECT_EQ(circles, 40u);
  EXPECT_THROW(save_boundary_svg(grid, 1, s, t, "x", dir / "c.svg"), DomainError);
}

TEST(Experiment, AngleDataHidesTargetLabels) {
  const ExperimentConfig c = tiny_experiment();
  const AngleData d = make_angle_data(c, 0, 30.0);
  EXPECT_EQ(d.source.size(), 30);
  EXPECT_EQ(d.target.size(), 30);
  EXPECT_EQ(d.test.size(), 100);
  EXPECT_EQ(d.paired.m(), 30);
  // Same source draw at every angle.
  EXPECT_EQ(make_angle_data(c, 0, 10.0).source, d.source);
  EXPECT_FALSE(make_angle_data(c, 1, 30.0).source == d.source);
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig c;
  c.angles.clear();
  EXPECT_THROW(c.validate(), DomainError);
  c = ExperimentConfig{};
  c.algorithms.clear();
  EXPECT_THROW(c.validate(), DomainError);
  c = ExperimentConfig{};
  c.repeats = 0;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(Experiment, OutputsAndThreadIndependence) {
  const fs::path one = temp_dir("exp1"), two = temp_dir("exp2");
  ExperimentConfig c = tiny_experiment();
  const ExperimentResult r1 = run_experiment(c);
  write_experiment(c, r1, one);
  c.threads = 3;
  write_experiment(c, run_experiment(c), two);

  const auto rows = lines(one / "results.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], kResultsHeader);
  EXPECT_EQ(rows[1].substr(0, 10), "dapbgd,10,");
  EXPECT_EQ(rows[2].substr(0, 10), "dapbgd,30,");
  EXPECT_EQ(rows[3].substr(0, 8), "pbgd,10,");
  EXPECT_EQ(rows[4].substr(0, 8), "pbgd,30,");
  for (const auto& row : r1.rows) {
    EXPECT_GE(row.target_accuracy, 0.0);
    EXPECT_LE(row.target_accuracy, 100.0);
    EXPECT_EQ(row.wall_time_ms, 0.0);
  }
  EXPECT_EQ(lines(one / "tradeoff.csv")[0], "algorithm,angle,source_gibbs_risk,disagreement");
  EXPECT_EQ(lines(one / "selection.csv").size(), 1u + 2 * 2 * 2);

  for (const char* name : {"results.csv", "tradeoff.csv", "selection.csv", "boundary_10.csv",
                           "boundary_30.csv", "boundary_10.svg", "boundary_30.svg"}) {
    ASSERT_TRUE(fs::exists(one / name)) << name;
    EXPECT_EQ(slurp(one / name), slurp(two / name)) << name;
  }
  EXPECT_EQ(lines(one / "boundary_30.csv")[0], "x1,x2,dapbgd,pbgd");
}

TEST(Experiment, SelectedGammaHasTheLowestBound) {
  const ExperimentResult r = run_experiment(tiny_experiment());
  for (const auto& cell : r.cells) {
    const double best = *std::min_element(cell.grid_objectives.begin(), cell.grid_objectives.end());
    EXPECT_EQ(cell.bound_value, best);
  }
}

TEST(McCheck, ZeroModelHasExactClosedForms) {
  const LabeledSample s = generate_moons(10, 0.05, 1);
  const UnlabeledSample t = rotate(generate_moons(10, 0.05, 2).inputs(), 30.0);
  const McReport r = mc_check(Classifier::primal(Vector::Zero(2)), s, t, 20'000, 3);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[0].closed_form, 0.5);
  EXPECT_EQ(r.entries[1].closed_form, 0.0);
  EXPECT_EQ(r.entries[2].closed_form, 0.5);
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(r.widened);
}

TEST(McCheck, FewDrawsAreWidenedAndDeterministic) {
  const LabeledSample s = generate_moons(10, 0.05, 1);
  const Classifier c = Classifier::primal(gaussian_vector(2, 1.0, 5));
  const McReport a = mc_check(c, s, std::nullopt, 100, 9);
  const McReport b = mc_check(c, s, std::nullopt, 100, 9);
  ASSERT_EQ(a.entries.size(), 1u);
  EXPECT_TRUE(a.widened);
  EXPECT_EQ(a.entries[0].tolerance, mc_tolerance(100));
  EXPECT_EQ(a.entries[0].monte_carlo, b.entries[0].monte_carlo);
  EXPECT_NE(format_mc_report(a).find("widened"), std::string::npos);
  EXPECT_FALSE(mc_check(c, s, std::nullopt, kReferenceDraws, 9).widened);
}

TEST(McCheck, FailureIsReported) {
  McReport r;
  r.entries.push_back({"gibbs_risk", 0.2, 0.3, 0.01, false});
  EXPECT_FALSE(r.all_pass());
  EXPECT_NE(format_mc_report(r).find("FAIL gibbs_risk"), std::string::npos);
}

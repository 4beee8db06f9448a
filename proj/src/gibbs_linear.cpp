#include "pbda/gibbs_linear.hpp"

#include <random>
#include <string>

#include "pbda/errors.hpp"
#include "pbda/special_functions.hpp"

namespace pbda {

namespace {

void check_dim(const WeightVector& w, Eigen::Index d) {
  if (w.size() != d) {
    throw DimensionError("weight dimension " + std::to_string(w.size()) +
                         " does not match data dimension " + std::to_string(d));
  }
}

void check_draws(std::uint64_t n_draws) {
  if (n_draws < 1) throw DomainError("Monte-Carlo estimators need n_draws >= 1");
}

void draw_posterior(const WeightVector& w, std::mt19937_64& rng,
                    std::normal_distribution<double>& gauss, Vector& v) {
  for (Eigen::Index j = 0; j < w.size(); ++j) v[j] = w[j] + gauss(rng);
}

// Sign pattern of h_v over the rows of `points`: true means label +1.
void predict_rows(const Matrix& points, const Vector& v, Vector& scores,
                  std::vector<char>& positive) {
  scores.noalias() = points * v;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    positive[static_cast<std::size_t>(i)] = scores[i] >= 0.0;
  }
}

}  // namespace

double margin(const WeightVector& w, const Eigen::Ref<const Vector>& x) {
  check_dim(w, x.size());
  const double norm = x.norm();
  if (!(norm > 0.0)) throw DegenerateInput("margin: zero input vector");
  return w.dot(x) / norm;
}

Vector normalized_margins(const WeightVector& w, const Matrix& points) {
  check_dim(w, points.cols());
  const Vector norms = points.rowwise().norm();
  if (norms.size() > 0 && !(norms.minCoeff() > 0.0)) {
    throw DegenerateInput("normalized_margins: zero input vector");
  }
  return (points * w).cwiseQuotient(norms);
}

double gibbs_risk_from_margins(const Vector& margins, const std::vector<Label>& labels) {
  if (margins.size() == 0) throw DimensionError("gibbs risk of an empty sample");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    sum += phi(sign_of(labels[static_cast<std::size_t>(i)]) * margins[i]);
  }
  return sum / static_cast<double>(margins.size());
}

double disagreement_from_margins(const Vector& source_margins, const Vector& target_margins) {
  if (source_margins.size() != target_margins.size() || source_margins.size() == 0) {
    throw DimensionError("disagreement needs equally many nonempty source and target margins");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < source_margins.size(); ++i) {
    sum += phi_dis(target_margins[i]) - phi_dis(source_margins[i]);
  }
  return sum / static_cast<double>(source_margins.size());
}

double bstar_from_loss(double adaptation_loss) { return 0.5 * adaptation_loss + 0.25; }

double gibbs_risk(const WeightVector& w, const LabeledSample& sample) {
  return gibbs_risk_from_margins(normalized_margins(w, sample.points()), sample.labels());
}

double disagreement_hat(const WeightVector& w, const PairedSample& paired) {
  return disagreement_from_margins(normalized_margins(w, paired.source().points()),
                                   normalized_margins(w, paired.target().points()));
}

double adaptation_loss_hat(const WeightVector& w, const PairedSample& paired) {
  return gibbs_risk(w, paired.source()) + disagreement_hat(w, paired);
}

double bstar(const WeightVector& w, const PairedSample& paired) {
  return bstar_from_loss(adaptation_loss_hat(w, paired));
}

Label predict(const WeightVector& w, const Eigen::Ref<const Vector>& x) {
  check_dim(w, x.size());
  if (!(x.norm() > 0.0)) throw DegenerateInput("predict: zero input vector");
  return w.dot(x) >= 0.0 ? Label::positive : Label::negative;
}

double error_rate(const WeightVector& w, const LabeledSample& sample) {
  check_dim(w, sample.dim());
  if (sample.empty()) throw DimensionError("error rate of an empty sample");
  const Vector scores = sample.points() * w;
  Eigen::Index errors = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const Label predicted = scores[i] >= 0.0 ? Label::positive : Label::negative;
    if (predicted != sample.label(i)) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(sample.size());
}

double mc_gibbs_risk(const WeightVector& w, const LabeledSample& sample, std::uint64_t n_draws,
                     std::uint64_t seed) {
  check_draws(n_draws);
  check_dim(w, sample.dim());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index n = sample.size();
  Vector v(w.size()), scores(n);
  std::vector<char> positive(static_cast<std::size_t>(n));

  double total = 0.0;
  for (std::uint64_t t = 0; t < n_draws; ++t) {
    draw_posterior(w, rng, gauss, v);
    predict_rows(sample.points(), v, scores, positive);
    Eigen::Index errors = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool truth = sample.label(i) == Label::positive;
      if (static_cast<bool>(positive[static_cast<std::size_t>(i)]) != truth) ++errors;
    }
    total += static_cast<double>(errors) / static_cast<double>(n);
  }
  return total / static_cast<double>(n_draws);
}

namespace {

// Shared trial loop for the pairwise estimators. Returns the mean over trials
// of (1/m) sum_i [source_error_weight * I(h1(x^s) != y) + I(h1(x^t) != h2(x^t))
//                 - I(h1(x^s) != h2(x^s))].
double mc_pairwise(const WeightVector& w, const PairedSample& paired, std::uint64_t n_draws,
                   std::uint64_t seed, double source_error_weight) {
  check_draws(n_draws);
  check_dim(w, paired.dim());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index m = paired.m();
  const auto mm = static_cast<std::size_t>(m);
  Vector v1(w.size()), v2(w.size()), scores(m);
  std::vector<char> s1(mm), s2(mm), t1(mm), t2(mm);

  double total = 0.0;
  for (std::uint64_t t = 0; t < n_draws; ++t) {
    draw_posterior(w, rng, gauss, v1);
    draw_posterior(w, rng, gauss, v2);
    predict_rows(paired.source().points(), v1, scores, s1);
    predict_rows(paired.source().points(), v2, scores, s2);
    predict_rows(paired.target().points(), v1, scores, t1);
    predict_rows(paired.target().points(), v2, scores, t2);
    long long count = 0;
    long long source_errors = 0;
    for (std::size_t i = 0; i < mm; ++i) {
      count += (t1[i] != t2[i]) - (s1[i] != s2[i]);
      const bool truth = paired.source().label(static_cast<Eigen::Index>(i)) == Label::positive;
      source_errors += static_cast<bool>(s1[i]) != truth;
    }
    total += (static_cast<double>(count) + source_error_weight * static_cast<double>(source_errors)) /
             static_cast<double>(m);
  }
  return total / static_cast<double>(n_draws);
}

}  // namespace

double mc_disagreement(const WeightVector& w, const PairedSample& paired, std::uint64_t n_draws,
                       std::uint64_t seed) {
  return mc_pairwise(w, paired, n_draws, seed, 0.0);
}

double mc_adaptation_loss(const WeightVector& w, const PairedSample& paired,
                          std::uint64_t n_draws, std::uint64_t seed) {
  return mc_pairwise(w, paired, n_draws, seed, 1.0);
}

}  // namespace pbda

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pbda/classifier.hpp"
#include "pbda/dataset.hpp"

namespace pbda::harness {

inline constexpr std::uint64_t kReferenceDraws = 1'000'000;

/// 3.5 / sqrt(n) + 1e-3.
double mc_tolerance(std::uint64_t n_draws);

struct McEntry {
  std::string quantity;
  double closed_form = 0.0;
  double monte_carlo = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct McReport {
  std::uint64_t n_draws = 0;
  std::uint64_t seed = 0;
  /// Fewer draws than the reference count, so the tolerance is wider.
  bool widened = false;
  std::vector<McEntry> entries;

  bool all_pass() const;
};

/// Closed form against Monte Carlo for the Gibbs risk on `source` and, when
/// a target sample is given, for the disagreement and adaptation loss on the
/// pairs drawn from (source, target) with `seed`.
McReport mc_check(const Classifier& model, const LabeledSample& source,
                  const std::optional<UnlabeledSample>& target, std::uint64_t n_draws,
                  std::uint64_t seed);

/// Header quantity,closed_form,monte_carlo,abs_error,tolerance,tolerance_mode,result.
void save_mc_report(const McReport& report, const std::filesystem::path& path);
std::string format_mc_report(const McReport& report);

}  // namespace pbda::harness

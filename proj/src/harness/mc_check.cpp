#include "pbda/harness/mc_check.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pbda/errors.hpp"
#include "pbda/harness/model_io.hpp"

namespace pbda::harness {

namespace {

McEntry entry(std::string name, double closed, double mc, double tol) {
  return McEntry{std::move(name), closed, mc, tol, std::abs(closed - mc) <= tol};
}

}  // namespace

double mc_tolerance(std::uint64_t n_draws) {
  if (n_draws == 0) throw DomainError("n_draws must be >= 1");
  return 3.5 / std::sqrt(static_cast<double>(n_draws)) + 1e-3;
}

bool McReport::all_pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return !entries.empty();
}

McReport mc_check(const Classifier& model, const LabeledSample& source,
                  const std::optional<UnlabeledSample>& target, std::uint64_t n_draws,
                  std::uint64_t seed) {
  McReport report;
  report.n_draws = n_draws;
  report.seed = seed;
  report.widened = n_draws < kReferenceDraws;
  const double tol = mc_tolerance(n_draws);

  const std::uint64_t risk_seed = derive_seed(seed, 0);
  const double risk_mc =
      model.is_dual()
          ? mc_dual_gibbs_risk(model.dual_weights(), *model.kernel(), source, n_draws, risk_seed)
          : mc_gibbs_risk(model.weights(), source, n_draws, risk_seed);
  report.entries.push_back(entry("gibbs_risk", model.gibbs_risk(source), risk_mc, tol));
  if (!target) return report;

  const PairedSample paired = pair(source, *target, derive_seed(seed, 1));
  const std::uint64_t dis_seed = derive_seed(seed, 2);
  const std::uint64_t loss_seed = derive_seed(seed, 3);
  double dis_mc = 0.0, loss_mc = 0.0;
  if (model.is_dual()) {
    dis_mc = mc_dual_disagreement(model.dual_weights(), *model.kernel(), paired, n_draws, dis_seed);
    loss_mc =
        mc_dual_adaptation_loss(model.dual_weights(), *model.kernel(), paired, n_draws, loss_seed);
  } else {
    dis_mc = mc_disagreement(model.weights(), paired, n_draws, dis_seed);
    loss_mc = mc_adaptation_loss(model.weights(), paired, n_draws, loss_seed);
  }
  report.entries.push_back(entry("disagreement", model.disagreement(paired), dis_mc, tol));
  report.entries.push_back(entry("adaptation_loss", model.adaptation_loss(paired), loss_mc, tol));
  return report;
}

void save_mc_report(const McReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << "quantity,closed_form,monte_carlo,abs_error,tolerance,tolerance_mode,result\n";
  for (const auto& e : report.entries) {
    out << e.quantity << ',' << format_shortest(e.closed_form) << ','
        << format_shortest(e.monte_carlo) << ','
        << format_shortest(std::abs(e.closed_form - e.monte_carlo)) << ','
        << format_shortest(e.tolerance) << ',' << (report.widened ? "widened" : "standard") << ','
        << (e.pass ? "pass" : "fail") << '\n';
  }
  if (!out) throw IOError("write failed for " + path.string());
}

std::string format_mc_report(const McReport& report) {
  std::ostringstream s;
  s << "draws=" << report.n_draws << " seed=" << report.seed;
  if (report.widened) s << " (widened tolerance: fewer than " << kReferenceDraws << " draws)";
  s << '\n';
  for (const auto& e : report.entries) {
    s << (e.pass ? "PASS " : "FAIL ") << e.quantity << " closed=" << format_shortest(e.closed_form)
      << " mc=" << format_shortest(e.monte_carlo)
      << " |diff|=" << format_shortest(std::abs(e.closed_form - e.monte_carlo))
      << " tol=" << format_shortest(e.tolerance) << '\n';
  }
  return s.str();
}

}  // namespace pbda::harness

#include "pbda/harness/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pbda/errors.hpp"

namespace pbda::harness {

namespace {

double parse_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError("malformed number '" + text + "'", line);
  }
  return v;
}

long parse_count(const std::map<std::string, std::string>& keys, const std::string& key) {
  const auto it = keys.find(key);
  if (it == keys.end()) throw ParseError("missing key '" + key + "'", 0);
  long v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
    throw ParseError("key '" + key + "' must be a nonnegative integer", 0);
  }
  return v;
}

const std::string& require(const std::map<std::string, std::string>& keys,
                           const std::string& key) {
  const auto it = keys.find(key);
  if (it == keys.end()) throw ParseError("missing key '" + key + "'", 0);
  return it->second;
}

}  // namespace

std::string algorithm_name(BoundKind kind) {
  return kind == BoundKind::dapbgd ? "dapbgd" : "pbgd";
}

BoundKind parse_algorithm(const std::string& name) {
  if (name == "dapbgd") return BoundKind::dapbgd;
  if (name == "pbgd") return BoundKind::pbgd;
  throw DomainError("unknown algorithm '" + name + "' (expected pbgd or dapbgd)");
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  const Classifier& c = file.model;
  out << "format=pbda-model\nversion=1\n";
  out << "algorithm=" << algorithm_name(file.algorithm) << '\n';
  out << "representation=" << (c.is_dual() ? "dual" : "primal") << '\n';
  if (c.is_dual()) {
    const KernelConfig& k = *c.kernel();
    out << "kernel=" << (k.kind == KernelKind::gaussian ? "gaussian" : "linear") << '\n';
    out << "gamma=" << format_exact(k.gamma) << '\n';
    out << "ridge=" << format_exact(k.ridge) << '\n';
  }
  out << "delta=" << format_exact(file.delta) << '\n';
  out << "input_dim=" << c.input_dim() << '\n';
  out << "weights=" << c.weights().size() << '\n';
  if (c.is_dual()) out << "anchors=" << c.anchors().rows() << '\n';
  out << "[weights]\n";
  for (Eigen::Index i = 0; i < c.weights().size(); ++i) out << format_exact(c.weights()[i]) << '\n';
  if (c.is_dual()) {
    out << "[anchors]\n";
    for (Eigen::Index i = 0; i < c.anchors().rows(); ++i) {
      for (Eigen::Index j = 0; j < c.anchors().cols(); ++j) {
        if (j > 0) out << ',';
        out << format_exact(c.anchors()(i, j));
      }
      out << '\n';
    }
  }
  if (!out) throw IOError("write failed for " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());

  std::map<std::string, std::string> keys;
  std::vector<std::pair<std::size_t, std::string>> weight_lines, anchor_lines;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      section = line;
      if (section != "[weights]" && section != "[anchors]") {
        throw ParseError("unknown section " + section, line_no);
      }
      continue;
    }
    if (section == "[weights]") {
      weight_lines.emplace_back(line_no, line);
    } else if (section == "[anchors]") {
      anchor_lines.emplace_back(line_no, line);
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
      keys[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }

  if (require(keys, "format") != "pbda-model" || require(keys, "version") != "1") {
    throw ParseError("not a version 1 pbda model file", 1);
  }
  ModelFile file;
  file.algorithm = parse_algorithm(require(keys, "algorithm"));
  file.delta = parse_double(require(keys, "delta"), 0);
  const long dim = parse_count(keys, "input_dim");
  const long n_weights = parse_count(keys, "weights");
  if (static_cast<long>(weight_lines.size()) != n_weights) {
    throw ParseError("weight count does not match the [weights] section", line_no);
  }
  Vector weights(n_weights);
  for (long i = 0; i < n_weights; ++i) {
    const auto& [ln, text] = weight_lines[static_cast<std::size_t>(i)];
    weights[i] = parse_double(text, ln);
  }

  const std::string& representation = require(keys, "representation");
  if (representation == "primal") {
    if (n_weights != dim) throw ParseError("primal weights must have input_dim entries", 0);
    file.model = Classifier::primal(std::move(weights));
    return file;
  }
  if (representation != "dual") throw ParseError("representation must be primal or dual", 0);

  KernelConfig kernel;
  const std::string& kind = require(keys, "kernel");
  if (kind == "gaussian") {
    kernel.kind = KernelKind::gaussian;
  } else if (kind == "linear") {
    kernel.kind = KernelKind::linear;
  } else {
    throw ParseError("kernel must be gaussian or linear", 0);
  }
  kernel.gamma = parse_double(require(keys, "gamma"), 0);
  kernel.ridge = parse_double(require(keys, "ridge"), 0);

  const long n_anchors = parse_count(keys, "anchors");
  if (static_cast<long>(anchor_lines.size()) != n_anchors) {
    throw ParseError("anchor count does not match the [anchors] section", line_no);
  }
  Matrix anchors(n_anchors, dim);
  for (long i = 0; i < n_anchors; ++i) {
    const auto& [ln, text] = anchor_lines[static_cast<std::size_t>(i)];
    std::stringstream row(text);
    std::string field;
    long j = 0;
    while (std::getline(row, field, ',')) {
      if (j >= dim) throw ParseError("anchor has more than input_dim coordinates", ln);
      anchors(i, j++) = parse_double(field, ln);
    }
    if (j != dim) throw ParseError("anchor has fewer than input_dim coordinates", ln);
  }
  file.model = Classifier::dual(kernel, DualWeights{std::move(weights), std::move(anchors)});
  return file;
}

void save_trace_csv(const std::vector<IterationRecord>& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << "iteration,objective,bstar,source_risk,disagreement,kl_budget,source_error,step,"
         "grad_norm\n";
  for (const auto& r : trace) {
    out << r.iteration << ',' << format_shortest(r.objective) << ',' << format_shortest(r.bstar)
        << ',' << format_shortest(r.source_risk) << ','
        << (std::isnan(r.disagreement) ? std::string() : format_shortest(r.disagreement)) << ','
        << format_shortest(r.kl_budget) << ',' << format_shortest(r.source_error) << ','
        << format_shortest(r.step) << ',' << format_shortest(r.grad_norm) << '\n';
  }
  if (!out) throw IOError("write failed for " + path.string());
}

}  // namespace pbda::harness

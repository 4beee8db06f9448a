#include "pbda/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "pbda/errors.hpp"

namespace pbda {

namespace {

constexpr double kMinNorm = 1e-9;

void check_points(const Matrix& points) {
  if (points.rows() > 0 && points.cols() == 0) {
    throw DimensionError("sample points must have dimension >= 1");
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (!points.row(i).allFinite()) {
      throw DegenerateInput("sample point " + std::to_string(i) + " is not finite");
    }
    if (points.row(i).norm() == 0.0) {
      throw DegenerateInput("sample point " + std::to_string(i) + " is the zero vector");
    }
  }
}

Matrix rotate_points(const Matrix& points, double angle_degrees) {
  if (points.cols() != 2) throw DimensionError("rotate: only defined for d = 2");
  const double rad = angle_degrees * std::numbers::pi / 180.0;
  Eigen::Matrix2d r;
  r << std::cos(rad), -std::sin(rad), std::sin(rad), std::cos(rad);
  return points * r.transpose();
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw so the permutation does not depend on
  // the standard library's shuffle implementation.
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

std::string header_line(Eigen::Index d) {
  std::string h;
  for (Eigen::Index j = 0; j < d; ++j) h += "x" + std::to_string(j + 1) + ",";
  h += "label";
  return h;
}

void write_rows(const Matrix& points, const std::vector<Label>* labels,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << header_line(points.cols()) << '\n';
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) out << format_exact(points(i, j)) << ',';
    if (labels != nullptr) {
      out << ((*labels)[static_cast<std::size_t>(i)] == Label::positive ? "+1" : "-1");
    }
    out << '\n';
  }
  if (!out) throw IOError("write failed for " + path.string());
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_number(std::string_view field, std::size_t line_no) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("malformed number '" + std::string(field) + "'", line_no);
  }
  return v;
}

struct ParsedCsv {
  Matrix points;
  std::vector<Label> labels;
};

ParsedCsv read_csv(const std::filesystem::path& path, bool labeled) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("missing header", line_no);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  const Eigen::Index d = static_cast<Eigen::Index>(header.size()) - 1;
  if (d < 1 || line != header_line(d)) {
    throw ParseError("header must be x1,...,xd,label", line_no);
  }

  std::vector<double> values;
  ParsedCsv parsed;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (static_cast<Eigen::Index>(fields.size()) != d + 1) {
      throw ParseError("expected " + std::to_string(d + 1) + " fields", line_no);
    }
    double norm_sq = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double v = parse_number(fields[static_cast<std::size_t>(j)], line_no);
      if (!std::isfinite(v)) throw ParseError("non-finite coordinate", line_no);
      norm_sq += v * v;
      values.push_back(v);
    }
    if (norm_sq == 0.0) throw ParseError("zero vector is not a valid point", line_no);

    const std::string_view label = fields.back();
    if (labeled) {
      if (label == "+1" || label == "1") {
        parsed.labels.push_back(Label::positive);
      } else if (label == "-1") {
        parsed.labels.push_back(Label::negative);
      } else {
        throw ParseError("label must be +1 or -1", line_no);
      }
    } else if (!label.empty()) {
      throw ParseError("unlabeled file must leave the label column empty", line_no);
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(values.size()) / d;
  parsed.points = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, d);
  return parsed;
}

}  // namespace

UnlabeledSample::UnlabeledSample(Matrix points) : points_(std::move(points)) {
  check_points(points_);
}

LabeledSample::LabeledSample(Matrix points, std::vector<Label> labels)
    : inputs_(std::move(points)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(labels_.size()) != inputs_.size()) {
    throw DimensionError("label count does not match point count");
  }
}

PairedSample::PairedSample(LabeledSample source, UnlabeledSample target)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_.size() < 1) throw DimensionError("paired sample needs m >= 1");
  if (source_.size() != target_.size()) {
    throw DimensionError("paired sample needs equal source and target counts");
  }
  if (source_.dim() != target_.dim()) {
    throw DimensionError("source and target dimensions differ");
  }
}

LabeledSample generate_moons(int n_per_class, double noise_std, std::uint64_t seed,
                             const MoonsGeometry& geometry) {
  if (n_per_class < 1) throw DomainError("generate_moons: n_per_class must be >= 1");
  if (!(noise_std >= 0.0)) throw DomainError("generate_moons: noise_std must be >= 0");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> arc(0.0, std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);

  const Eigen::Index n = 2 * static_cast<Eigen::Index>(n_per_class);
  Matrix points(n, 2);
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool upper = i < n_per_class;
    Eigen::Vector2d p;
    // Resample until the point is safely away from the origin.
    do {
      const double t = arc(rng);
      if (upper) {
        p << geometry.radius * std::cos(t), geometry.radius * std::sin(t);
      } else {
        p << geometry.horizontal_offset - geometry.radius * std::cos(t),
            geometry.vertical_offset - geometry.radius * std::sin(t);
      }
      if (noise_std > 0.0) {
        const double nx = noise(rng);
        const double ny = noise(rng);
        p += noise_std * Eigen::Vector2d(nx, ny);
      }
    } while (p.norm() < kMinNorm);
    points.row(i) = p.transpose();
    labels[static_cast<std::size_t>(i)] = upper ? Label::positive : Label::negative;
  }
  return LabeledSample(std::move(points), std::move(labels));
}

LabeledSample rotate(const LabeledSample& sample, double angle_degrees) {
  return LabeledSample(rotate_points(sample.points(), angle_degrees), sample.labels());
}

UnlabeledSample rotate(const UnlabeledSample& sample, double angle_degrees) {
  return UnlabeledSample(rotate_points(sample.points(), angle_degrees));
}

PairedSample pair(const LabeledSample& source, const UnlabeledSample& target,
                  std::uint64_t seed) {
  if (source.empty() || target.empty()) throw DimensionError("pair: samples must be nonempty");
  if (source.dim() != target.dim()) throw DimensionError("pair: dimensions differ");

  const Eigen::Index m = std::min(source.size(), target.size());
  const auto s_idx = shuffled_indices(source.size(), derive_seed(seed, 0));
  const auto t_idx = shuffled_indices(target.size(), derive_seed(seed, 1));

  Matrix xs(m, source.dim());
  Matrix xt(m, source.dim());
  std::vector<Label> ys(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto si = s_idx[static_cast<std::size_t>(i)];
    xs.row(i) = source.point(si);
    ys[static_cast<std::size_t>(i)] = source.label(si);
    xt.row(i) = target.point(t_idx[static_cast<std::size_t>(i)]);
  }
  return PairedSample(LabeledSample(std::move(xs), std::move(ys)), UnlabeledSample(std::move(xt)));
}

void save_csv(const LabeledSample& sample, const std::filesystem::path& path) {
  write_rows(sample.points(), &sample.labels(), path);
}

void save_csv(const UnlabeledSample& sample, const std::filesystem::path& path) {
  write_rows(sample.points(), nullptr, path);
}

LabeledSample load_labeled_csv(const std::filesystem::path& path) {
  auto parsed = read_csv(path, true);
  return LabeledSample(std::move(parsed.points), std::move(parsed.labels));
}

UnlabeledSample load_unlabeled_csv(const std::filesystem::path& path) {
  return UnlabeledSample(read_csv(path, false).points);
}

std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace pbda

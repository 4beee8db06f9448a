#include "pbda/harness/svg.hpp"

#include <cstdio>
#include <fstream>

#include "pbda/errors.hpp"
#include "pbda/harness/model_io.hpp"

namespace pbda::harness {

namespace {

constexpr int kCanvas = 600;
constexpr const char* kRegionPositive = "#d9f2d9";
constexpr const char* kRegionNegative = "#f9dded";
constexpr const char* kSourcePositive = "#2ca02c";
constexpr const char* kSourceNegative = "#e377c2";
constexpr const char* kTarget = "#8c8c8c";

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

BoundaryGrid make_boundary_grid(const Matrix& points, const std::vector<std::string>& names,
                                const std::vector<const Classifier*>& classifiers,
                                int resolution, double padding) {
  if (points.cols() != 2) throw DimensionError("boundary grids need 2-D data");
  if (points.rows() == 0) throw DimensionError("boundary grid of an empty point set");
  if (names.size() != classifiers.size()) throw DimensionError("one name per classifier");
  if (resolution < 1) throw DomainError("grid resolution must be positive");

  BoundaryGrid grid;
  grid.resolution = resolution;
  grid.names = names;
  const Eigen::Vector2d lo = points.colwise().minCoeff();
  const Eigen::Vector2d hi = points.colwise().maxCoeff();
  const Eigen::Vector2d pad = 0.5 * padding * (hi - lo);
  grid.x_min = lo.x() - pad.x();
  grid.x_max = hi.x() + pad.x();
  grid.y_min = lo.y() - pad.y();
  grid.y_max = hi.y() + pad.y();

  Matrix cells(static_cast<Eigen::Index>(resolution) * resolution, 2);
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const Eigen::Index i = static_cast<Eigen::Index>(row) * resolution + col;
      cells(i, 0) = grid.x_at(col);
      cells(i, 1) = grid.y_at(row);
    }
  }
  for (const Classifier* c : classifiers) {
    // Normalized margins have the sign of the raw score; grid cells can hit
    // the origin only for a linear model, where the tie rule gives +1.
    std::vector<Label> labels(static_cast<std::size_t>(cells.rows()), Label::positive);
    for (Eigen::Index i = 0; i < cells.rows(); ++i) {
      if (cells.row(i).norm() > 0.0) labels[static_cast<std::size_t>(i)] = c->predict(cells.row(i).transpose());
    }
    grid.predictions.push_back(std::move(labels));
  }
  return grid;
}

void save_boundary_csv(const BoundaryGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << "x1,x2";
  for (const auto& name : grid.names) out << ',' << name;
  out << '\n';
  for (int row = 0; row < grid.resolution; ++row) {
    for (int col = 0; col < grid.resolution; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * grid.resolution + col;
      out << format_shortest(grid.x_at(col)) << ',' << format_shortest(grid.y_at(row));
      for (const auto& preds : grid.predictions) {
        out << ',' << (preds[i] == Label::positive ? "+1" : "-1");
      }
      out << '\n';
    }
  }
  if (!out) throw IOError("write failed for " + path.string());
}

void save_boundary_svg(const BoundaryGrid& grid, std::size_t which, const LabeledSample& source,
                       const UnlabeledSample& target, const std::string& title,
                       const std::filesystem::path& path) {
  if (which >= grid.predictions.size()) throw DomainError("no such classifier in the grid");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");

  const double sx = kCanvas / (grid.x_max - grid.x_min);
  const double sy = kCanvas / (grid.y_max - grid.y_min);
  const auto px = [&](double x) { return (x - grid.x_min) * sx; };
  const auto py = [&](double y) { return kCanvas - (y - grid.y_min) * sy; };
  const double cell_w = static_cast<double>(kCanvas) / grid.resolution;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kCanvas
      << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n"
      << "<title>" << title << "</title>\n<g id=\"regions\" shape-rendering=\"crispEdges\">\n";

  // One rectangle per horizontal run of equal predictions.
  const auto& preds = grid.predictions[which];
  for (int row = 0; row < grid.resolution; ++row) {
    const double top = kCanvas - (row + 1) * cell_w;
    int start = 0;
    for (int col = 1; col <= grid.resolution; ++col) {
      const std::size_t base = static_cast<std::size_t>(row) * grid.resolution;
      if (col < grid.resolution && preds[base + col] == preds[base + start]) continue;
      out << "<rect x=\"" << fixed(start * cell_w) << "\" y=\"" << fixed(top) << "\" width=\""
          << fixed((col - start) * cell_w) << "\" height=\"" << fixed(cell_w) << "\" fill=\""
          << (preds[base + start] == Label::positive ? kRegionPositive : kRegionNegative)
          << "\"/>\n";
      start = col;
    }
  }
  out << "</g>\n<g id=\"target\" fill=\"" << kTarget << "\">\n";
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    out << "<circle cx=\"" << fixed(px(target.points()(i, 0))) << "\" cy=\""
        << fixed(py(target.points()(i, 1))) << "\" r=\"3\"/>\n";
  }
  out << "</g>\n<g id=\"source\">\n";
  for (Eigen::Index i = 0; i < source.size(); ++i) {
    out << "<circle cx=\"" << fixed(px(source.points()(i, 0))) << "\" cy=\""
        << fixed(py(source.points()(i, 1))) << "\" r=\"3\" fill=\""
        << (source.label(i) == Label::positive ? kSourcePositive : kSourceNegative) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  if (!out) throw IOError("write failed for " + path.string());
}

}  // namespace pbda::harness

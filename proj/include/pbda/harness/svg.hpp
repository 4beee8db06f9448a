#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pbda/classifier.hpp"
#include "pbda/dataset.hpp"

namespace pbda::harness {

/// Predictions of one or more classifiers on a regular 2-D grid.
struct BoundaryGrid {
  int resolution = 200;
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
  std::vector<std::string> names;
  /// predictions[c][row * resolution + col]; row 0 is the bottom (smallest y).
  std::vector<std::vector<Label>> predictions;

  double x_at(int col) const { return x_min + (col + 0.5) * (x_max - x_min) / resolution; }
  double y_at(int row) const { return y_min + (row + 0.5) * (y_max - y_min) / resolution; }
};

/// Grid over the bounding box of `points` enlarged by `padding` of its extent
/// (split evenly between both sides).
BoundaryGrid make_boundary_grid(const Matrix& points, const std::vector<std::string>& names,
                                const std::vector<const Classifier*>& classifiers,
                                int resolution = 200, double padding = 0.2);

/// Header x1,x2,<name>... with +1 / -1 predictions.
void save_boundary_csv(const BoundaryGrid& grid, const std::filesystem::path& path);

/// SVG 1.1: the two decision regions of classifier `which`, source points in
/// green (+1) and pink (-1), target points in grey.
void save_boundary_svg(const BoundaryGrid& grid, std::size_t which, const LabeledSample& source,
                       const UnlabeledSample& target, const std::string& title,
                       const std::filesystem::path& path);

}  // namespace pbda::harness

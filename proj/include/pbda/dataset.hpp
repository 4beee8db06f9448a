#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace pbda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Label : int { negative = -1, positive = 1 };

inline double sign_of(Label y) { return static_cast<double>(static_cast<int>(y)); }

/// Points are rows of an n x d matrix.
class UnlabeledSample {
 public:
  UnlabeledSample() = default;
  /// Throws DimensionError for d == 0, DegenerateInput for a zero or
  /// non-finite point.
  explicit UnlabeledSample(Matrix points);

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  bool empty() const { return points_.rows() == 0; }
  const Matrix& points() const { return points_; }
  auto point(Eigen::Index i) const { return points_.row(i); }

  friend bool operator==(const UnlabeledSample& a, const UnlabeledSample& b) {
    return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
           a.points_ == b.points_;
  }

 private:
  Matrix points_;
};

class LabeledSample {
 public:
  LabeledSample() = default;
  LabeledSample(Matrix points, std::vector<Label> labels);

  Eigen::Index size() const { return inputs_.size(); }
  Eigen::Index dim() const { return inputs_.dim(); }
  bool empty() const { return inputs_.empty(); }
  const Matrix& points() const { return inputs_.points(); }
  auto point(Eigen::Index i) const { return inputs_.point(i); }
  Label label(Eigen::Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<Label>& labels() const { return labels_; }

  /// Drops the labels. This is the only view of target data training code sees.
  const UnlabeledSample& inputs() const { return inputs_; }

  friend bool operator==(const LabeledSample& a, const LabeledSample& b) {
    return a.inputs_ == b.inputs_ && a.labels_ == b.labels_;
  }

 private:
  UnlabeledSample inputs_;
  std::vector<Label> labels_;
};

/// m source/target triples (x^s_i, y^s_i, x^t_i).
class PairedSample {
 public:
  PairedSample(LabeledSample source, UnlabeledSample target);

  Eigen::Index m() const { return source_.size(); }
  Eigen::Index dim() const { return source_.dim(); }
  const LabeledSample& source() const { return source_; }
  const UnlabeledSample& target() const { return target_; }

 private:
  LabeledSample source_;
  UnlabeledSample target_;
};

struct MoonsGeometry {
  double radius = 1.0;
  double horizontal_offset = 1.0;
  double vertical_offset = 0.5;
};

/// Inter-twinning moons. Label +1: upper half circle centred at the origin.
/// Label -1: lower half circle centred at (horizontal_offset, vertical_offset).
/// Arc angles are uniform, noise is isotropic Gaussian. The first
/// n_per_class rows are the +1 class.
LabeledSample generate_moons(int n_per_class, double noise_std, std::uint64_t seed,
                             const MoonsGeometry& geometry = {});

/// Rotation about the origin. Throws DimensionError unless d == 2.
LabeledSample rotate(const LabeledSample& sample, double angle_degrees);
UnlabeledSample rotate(const UnlabeledSample& sample, double angle_degrees);

/// Pairs the first min(|S|, |T|) elements of independent seeded shuffles of
/// source and target.
PairedSample pair(const LabeledSample& source, const UnlabeledSample& target,
                  std::uint64_t seed);

// CSV: header x1,...,xd,label; labels "+1"/"-1", empty for unlabeled files.
void save_csv(const LabeledSample& sample, const std::filesystem::path& path);
void save_csv(const UnlabeledSample& sample, const std::filesystem::path& path);
LabeledSample load_labeled_csv(const std::filesystem::path& path);
UnlabeledSample load_unlabeled_csv(const std::filesystem::path& path);

/// Shortest-but-exact text form of a double (17 significant digits).
std::string format_exact(double v);

/// splitmix64 mixing of a base seed with a stream tag; used wherever one
/// user seed must fan out into independent generator streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace pbda

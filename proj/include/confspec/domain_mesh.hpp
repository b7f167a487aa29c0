#pragma once

#include <Eigen/Core>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "confspec/metric.hpp"

namespace confspec {

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;
};

/// Bounded open domain in chart coordinates.
class ChartDomain {
 public:
  static ChartDomain box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static ChartDomain ball(Eigen::VectorXd center, double radius);
  static ChartDomain interval(double a, double b);

  int dim() const noexcept;
  bool is_box() const noexcept { return std::holds_alternative<Box>(shape_); }
  bool is_ball() const noexcept { return std::holds_alternative<Ball>(shape_); }
  const Box& as_box() const { return std::get<Box>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }

  bool contains(PointRef x) const;
  /// Euclidean distance from an interior point to the boundary.
  double boundary_distance(PointRef x) const;
  /// Range of coordinate `axis` over the closure of the domain.
  std::pair<double, double> axis_extent(int axis) const;
  /// Largest |x| over the closure.
  double max_norm() const;

 private:
  explicit ChartDomain(std::variant<Box, Ball> shape) : shape_(std::move(shape)) {}
  std::variant<Box, Ball> shape_;
};

/// One stencil arm of an interior node. `neighbor` is the interior index of the
/// adjacent lattice node, or -1 when the arm ends on the Dirichlet boundary at
/// distance `theta * h` (0 < theta <= 1).
struct Arm {
  int neighbor = -1;
  double theta = 1.0;
};

/// Uniform Cartesian lattice restricted to the interior of a ChartDomain.
///
/// Lattice node i (multi-index) sits at origin + i * h. Interior nodes are numbered
/// 0..N-1 in lexicographic lattice order with axis 0 varying fastest.
class Grid {
 public:
  int dim() const noexcept { return dim_; }
  double h() const noexcept { return h_; }
  int size() const noexcept { return static_cast<int>(lattice_of_.size()); }
  const ChartDomain& domain() const noexcept { return domain_; }
  const Eigen::VectorXd& origin() const noexcept { return origin_; }
  const std::vector<int>& extents() const noexcept { return extents_; }
  /// True for Box domains whose faces fall exactly on lattice planes.
  bool aligned() const noexcept { return aligned_; }

  /// dim x N matrix of node coordinates.
  const Eigen::MatrixXd& positions() const noexcept { return positions_; }
  auto position(int j) const { return positions_.col(j); }

  /// side 0 points towards decreasing coordinate, side 1 towards increasing.
  const Arm& arm(int j, int axis, int side) const {
    return arms_[static_cast<std::size_t>(j) * 2 * dim_ + 2 * axis + side];
  }
  bool boundary_adjacent(int j) const;

  long lattice_index(int j) const { return lattice_of_[static_cast<std::size_t>(j)]; }
  /// Interior index of a lattice node, -1 when the node is not interior.
  int interior_at(long lattice) const { return interior_of_[static_cast<std::size_t>(lattice)]; }

 private:
  friend std::shared_ptr<const Grid> build_grid(const ChartDomain&, const ConformalFactorModel&,
                                                double);
  explicit Grid(ChartDomain domain) : domain_(std::move(domain)) {}

  ChartDomain domain_;
  int dim_ = 0;
  double h_ = 0.0;
  bool aligned_ = false;
  Eigen::VectorXd origin_;
  std::vector<int> extents_;
  std::vector<int> interior_of_;
  std::vector<long> lattice_of_;
  std::vector<Arm> arms_;
  Eigen::MatrixXd positions_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Nodes closer than this fraction of h to a curved boundary are treated as boundary.
inline constexpr double kMinArmFraction = 1e-4;

/// Builds the interior lattice of `domain` at spacing h.
///
/// Throws MarginError when the domain closure comes within h of the model's singular
/// set (x_n = 0 for the half-space family, |x| = 1 for the disk family) and
/// EmptyGridError when no interior node exists.
GridPtr build_grid(const ChartDomain& domain, const ConformalFactorModel& model, double h);

std::vector<Eigen::VectorXd> node_positions(const Grid& grid);

}  // namespace confspec

#include "confspec/domain_mesh.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "confspec/errors.hpp"

namespace confspec {

ChartDomain ChartDomain::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() == 0 || lo.size() != hi.size())
    throw DimensionError("box corners must have the same positive dimension");
  if (!lo.allFinite() || !hi.allFinite() || !(lo.array() < hi.array()).all())
    throw std::invalid_argument("box requires lo < hi component-wise");
  return ChartDomain(Box{std::move(lo), std::move(hi)});
}

ChartDomain ChartDomain::ball(Eigen::VectorXd center, double radius) {
  if (center.size() == 0) throw DimensionError("ball centre must have positive dimension");
  if (!center.allFinite() || !(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball requires a finite centre and radius > 0");
  return ChartDomain(Ball{std::move(center), radius});
}

ChartDomain ChartDomain::interval(double a, double b) {
  Eigen::VectorXd lo(1), hi(1);
  lo << a;
  hi << b;
  return box(std::move(lo), std::move(hi));
}

int ChartDomain::dim() const noexcept {
  return is_box() ? static_cast<int>(as_box().lo.size())
                  : static_cast<int>(as_ball().center.size());
}

bool ChartDomain::contains(PointRef x) const {
  if (x.size() != dim()) return false;
  if (is_box()) {
    const Box& b = as_box();
    return (x.array() > b.lo.array()).all() && (x.array() < b.hi.array()).all();
  }
  const Ball& b = as_ball();
  return (x - b.center).norm() < b.radius;
}

double ChartDomain::boundary_distance(PointRef x) const {
  if (is_box()) {
    const Box& b = as_box();
    return std::min((x - b.lo).minCoeff(), (b.hi - x).minCoeff());
  }
  const Ball& b = as_ball();
  return b.radius - (x - b.center).norm();
}

std::pair<double, double> ChartDomain::axis_extent(int axis) const {
  if (axis < 0 || axis >= dim()) throw DimensionError("axis out of range");
  if (is_box()) return {as_box().lo[axis], as_box().hi[axis]};
  const Ball& b = as_ball();
  return {b.center[axis] - b.radius, b.center[axis] + b.radius};
}

double ChartDomain::max_norm() const {
  if (is_ball()) return as_ball().center.norm() + as_ball().radius;
  const Box& b = as_box();
  return b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).norm();
}

bool Grid::boundary_adjacent(int j) const {
  for (int d = 0; d < dim_; ++d)
    for (int s = 0; s < 2; ++s)
      if (arm(j, d, s).neighbor < 0) return true;
  return false;
}

namespace {

void check_margin(const ChartDomain& domain, const ConformalFactorModel& model, double h) {
  const int n = domain.dim();
  if (model.kind() == ModelKind::HalfSpacePower) {
    const double lowest = domain.axis_extent(n - 1).first;
    if (lowest < h) {
      std::ostringstream msg;
      msg << "domain reaches x_n = " << lowest << ", closer than h = " << h
          << " to the half-space boundary";
      throw MarginError(msg.str());
    }
  }
  const double limit = model.radius_limit();
  if (std::isfinite(limit)) {
    const double reach = domain.max_norm();
    if (reach > limit - h) {
      std::ostringstream msg;
      msg << "domain reaches |x| = " << reach << ", closer than h = " << h
          << " to the chart boundary |x| = " << limit;
      throw MarginError(msg.str());
    }
  }
}

// Distance from x along +/- axis to the domain boundary.
double axis_distance(const ChartDomain& domain, const Eigen::VectorXd& x, int axis, int side) {
  if (domain.is_box()) {
    const Box& b = domain.as_box();
    return side == 1 ? b.hi[axis] - x[axis] : x[axis] - b.lo[axis];
  }
  const Ball& b = domain.as_ball();
  const Eigen::VectorXd y = x - b.center;
  const double rest = y.squaredNorm() - y[axis] * y[axis];
  const double reach = std::sqrt(std::max(0.0, b.radius * b.radius - rest));
  return side == 1 ? reach - y[axis] : reach + y[axis];
}

}  // namespace

GridPtr build_grid(const ChartDomain& domain, const ConformalFactorModel& model, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing must be > 0");
  const int n = domain.dim();
  if (n != model.dim()) {
    throw DimensionError("domain dimension " + std::to_string(n) +
                         " does not match model dimension " + std::to_string(model.dim()));
  }
  check_margin(domain, model, h);

  auto grid = std::shared_ptr<Grid>(new Grid(domain));
  grid->dim_ = n;
  grid->h_ = h;
  grid->extents_.assign(n, 0);
  grid->origin_.resize(n);

  if (domain.is_box()) {
    const Box& b = domain.as_box();
    grid->aligned_ = true;
    for (int d = 0; d < n; ++d) {
      const double cells = (b.hi[d] - b.lo[d]) / h;
      const double rounded = std::round(cells);
      if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) grid->aligned_ = false;
      grid->origin_[d] = b.lo[d];
      grid->extents_[d] = static_cast<int>(std::ceil(cells - 1e-9 * std::max(1.0, cells))) + 1;
    }
  } else {
    const Ball& b = domain.as_ball();
    const int half = static_cast<int>(std::ceil(b.radius / h));
    for (int d = 0; d < n; ++d) {
      grid->origin_[d] = b.center[d] - half * h;
      grid->extents_[d] = 2 * half + 1;
    }
  }

  long total = 1;
  for (int e : grid->extents_) {
    if (total > std::numeric_limits<int>::max() / std::max(e, 1))
      throw std::invalid_argument("grid too large");
    total *= e;
  }

  std::vector<long> strides(n, 1);
  for (int d = 1; d < n; ++d) strides[d] = strides[d - 1] * grid->extents_[d - 1];

  auto coords_of = [&](long lin, std::vector<int>& idx) {
    for (int d = 0; d < n; ++d) {
      idx[d] = static_cast<int>(lin % grid->extents_[d]);
      lin /= grid->extents_[d];
    }
  };
  auto point_of = [&](const std::vector<int>& idx) {
    Eigen::VectorXd x(n);
    for (int d = 0; d < n; ++d) x[d] = grid->origin_[d] + idx[d] * h;
    return x;
  };

  // Interior classification.
  grid->interior_of_.assign(static_cast<std::size_t>(total), -1);
  std::vector<int> idx(n);
  const double min_gap = kMinArmFraction * h;
  for (long lin = 0; lin < total; ++lin) {
    coords_of(lin, idx);
    bool inside = true;
    if (grid->aligned_) {
      for (int d = 0; d < n && inside; ++d)
        inside = idx[d] >= 1 && idx[d] <= grid->extents_[d] - 2;
    } else {
      inside = domain.boundary_distance(point_of(idx)) >= min_gap;
    }
    if (inside) {
      grid->interior_of_[static_cast<std::size_t>(lin)] = static_cast<int>(grid->lattice_of_.size());
      grid->lattice_of_.push_back(lin);
    }
  }

  const int count = grid->size();
  if (count == 0) throw EmptyGridError("no interior node at h = " + std::to_string(h));

  grid->positions_.resize(n, count);
  grid->arms_.assign(static_cast<std::size_t>(count) * 2 * n, Arm{});
  for (int j = 0; j < count; ++j) {
    const long lin = grid->lattice_of_[static_cast<std::size_t>(j)];
    coords_of(lin, idx);
    const Eigen::VectorXd x = point_of(idx);
    grid->positions_.col(j) = x;
    for (int d = 0; d < n; ++d) {
      for (int s = 0; s < 2; ++s) {
        Arm& arm = grid->arms_[static_cast<std::size_t>(j) * 2 * n + 2 * d + s];
        const int step = s == 1 ? 1 : -1;
        const int next = idx[d] + step;
        if (next >= 0 && next < grid->extents_[d]) {
          const int nb = grid->interior_of_[static_cast<std::size_t>(lin + step * strides[d])];
          if (nb >= 0) {
            arm = Arm{nb, 1.0};
            continue;
          }
        }
        double theta = 1.0;
        if (!grid->aligned_) {
          theta = std::min(1.0, axis_distance(domain, x, d, s) / h);
          theta = std::max(theta, kMinArmFraction);
        }
        arm = Arm{-1, theta};
      }
    }
  }
  return grid;
}

std::vector<Eigen::VectorXd> node_positions(const Grid& grid) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) out.emplace_back(grid.position(j));
  return out;
}

}  // namespace confspec

#include "confspec/functionals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "confspec/errors.hpp"

namespace confspec {

namespace {

void require_index(const SpectralResult& result, int i) {
  if (i < 0 || i >= result.count()) {
    throw IndexError("eigenpair index " + std::to_string(i) + " outside [0, " +
                     std::to_string(result.count()) + ")");
  }
}

}  // namespace

double weighted_integral(const SpectralResult& result, int i, const WeightedIntegralSpec& spec) {
  require_index(result, i);
  const Grid& grid = *result.grid;
  const auto u = result.eigenvectors.col(i);
  const double cell = std::pow(grid.h(), grid.dim());
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double w = spec.weight ? spec.weight(grid.position(j)) : 1.0;
    const double density = spec.density == Density::RiemannianVolume ? result.mass[j] : cell;
    sum += w * u[j] * u[j] * density;
  }
  return sum;
}

Eigen::MatrixXd discrete_gradient(const SpectralResult& result, int i) {
  require_index(result, i);
  const Grid& grid = *result.grid;
  const int n = grid.dim();
  const double h = grid.h();
  const auto u = result.eigenvectors.col(i);
  Eigen::MatrixXd grad(n, grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    for (int d = 0; d < n; ++d) {
      const Arm& back = grid.arm(j, d, 0);
      const Arm& fwd = grid.arm(j, d, 1);
      const double a = back.theta * h;
      const double b = fwd.theta * h;
      const double um = back.neighbor >= 0 ? u[back.neighbor] : 0.0;
      const double up = fwd.neighbor >= 0 ? u[fwd.neighbor] : 0.0;
      // Derivative of the quadratic through (-a, um), (0, u_j), (b, up).
      grad(d, j) = (-b / (a * (a + b))) * um + ((b - a) / (a * b)) * u[j] + (a / (b * (a + b))) * up;
    }
  }
  return grad;
}

double dirichlet_energy(const SpectralResult& result, int i) {
  require_index(result, i);
  const Grid& grid = *result.grid;
  const ConformalFactorModel& model = result.model;
  const int n = grid.dim();
  const double h = grid.h();
  const double scale = std::pow(h, n - 2);
  const auto u = result.eigenvectors.col(i);
  Eigen::VectorXd boundary_point(n);
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double aj = model.exp_f(grid.position(j), n - 2.0);
    for (int d = 0; d < n; ++d) {
      for (int s = 0; s < 2; ++s) {
        const Arm& arm = grid.arm(j, d, s);
        if (arm.neighbor >= 0) {
          if (s == 0) continue;  // each interior face once
          const double w = scale * std::sqrt(aj * model.exp_f(grid.position(arm.neighbor), n - 2.0));
          const double du = u[arm.neighbor] - u[j];
          sum += w * du * du;
        } else {
          boundary_point = grid.position(j);
          boundary_point[d] += (s == 1 ? 1.0 : -1.0) * arm.theta * h;
          const double w = scale * std::sqrt(aj * model.exp_f(boundary_point, n - 2.0)) / arm.theta;
          sum += w * u[j] * u[j];
        }
      }
    }
  }
  return sum;
}

double riemannian_volume(const ConformalFactorModel& model, const Grid& grid) {
  const double cell = std::pow(grid.h(), grid.dim());
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) sum += model.exp_f(grid.position(j), grid.dim()) * cell;
  return sum;
}

std::pair<double, double> rho_extrema(const ChartDomain& domain) {
  const auto [lo, hi] = domain.axis_extent(domain.dim() - 1);
  if (!(lo > 0.0)) {
    throw ChartError("domain reaches x_n = " + std::to_string(lo) +
                     "; 1/x_n^2 needs the open half-space x_n > 0");
  }
  return {1.0 / (lo * lo), 1.0 / (hi * hi)};
}

std::pair<double, double> rho_extrema(const Grid& grid) { return rho_extrema(grid.domain()); }

double unit_ball_volume(int n) {
  if (n < 1) throw DimensionError("dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double weyl_estimate(int n, double volume, int k) {
  if (n < 1) throw DimensionError("dimension must be >= 1");
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be > 0");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double pi = std::numbers::pi;
  return 4.0 * pi * pi * std::pow(k / (unit_ball_volume(n) * volume), 2.0 / n);
}

}  // namespace confspec

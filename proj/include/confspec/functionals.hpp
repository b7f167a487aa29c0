#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>

#include "confspec/eigensolver.hpp"

namespace confspec {

enum class Density {
  /// Nodal weight e^{n f(x_j)} h^n, the lumped mass of the pencil.
  RiemannianVolume,
  /// Nodal weight h^n; diagnostics only.
  ChartVolume,
};

struct WeightedIntegralSpec {
  std::function<double(PointRef)> weight;
  Density density = Density::RiemannianVolume;
};

/// sum_j w(x_j) u_i(x_j)^2 density_j for the 0-based eigenpair i. With w = 1 and
/// RiemannianVolume this is u_i^T B u_i. Throws IndexError for i outside [0, k).
double weighted_integral(const SpectralResult& result, int i, const WeightedIntegralSpec& spec);

/// n x N chart gradient of u_i at the interior nodes: central differences where both
/// neighbours are interior, otherwise the three-point formula on the (possibly
/// shortened) arms with the Dirichlet zero at the boundary end.
Eigen::MatrixXd discrete_gradient(const SpectralResult& result, int i);

/// Face sum of e^{(n-2)f} (du / theta h)^2 theta h^n over all stencil faces,
/// i.e. u_i^T A u_i evaluated face by face.
double dirichlet_energy(const SpectralResult& result, int i);

/// sum_j e^{n f(x_j)} h^n.
double riemannian_volume(const ConformalFactorModel& model, const Grid& grid);

/// (max, min) of 1 / x_n^2 over the closure of the domain, from its x_n extent.
/// Throws ChartError when the domain leaves the open half-space x_n > 0.
std::pair<double, double> rho_extrema(const ChartDomain& domain);
std::pair<double, double> rho_extrema(const Grid& grid);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Leading Weyl term 4 pi^2 (k / (omega_n volume))^{2/n}.
double weyl_estimate(int n, double volume, int k);

}  // namespace confspec

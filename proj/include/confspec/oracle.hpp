#pragma once

#include <string>
#include <utility>
#include <vector>

#include "confspec/eigensolver.hpp"

namespace confspec {

enum class Provenance { Analytic, CrossChart, Symbolic };

std::string to_string(Provenance provenance);

struct ReferenceCase {
  std::string name;
  ConformalFactorModel model;
  ChartDomain domain;
  /// Expected eigenvalues, ascending; may cover only the first few.
  std::vector<double> expected;
  /// Relative tolerance per eigenvalue.
  double tolerance = 0.0;
  Provenance provenance = Provenance::Analytic;
};

/// The `count` smallest values of pi^2 sum (m_i / L_i)^2 over positive integer tuples,
/// with multiplicity, ascending.
std::vector<double> analytic_box_spectrum(int n, const std::vector<double>& lengths, int count);

struct CrossChartBall {
  /// Poincare-ball chart: centre 0, radius tanh(R/2).
  ChartDomain disk;
  /// Half-space chart: centre (0, ..., 0, cosh R), radius sinh R.
  ChartDomain half_space;
};

/// Images of the geodesic ball of radius R in the two charts of hyperbolic space.
/// Throws MarginError when tanh(R/2) >= 1 - margin.
CrossChartBall hyperbolic_ball_cross_chart(int n, double radius, double margin = 0.0);

/// Upper hemisphere of the unit n-sphere in the stereographic chart (the unit ball),
/// where (1 - r^2)/(1 + r^2) is the first Dirichlet eigenfunction with eigenvalue n.
ReferenceCase hemisphere_reference(int n);

/// Flat box (0, L_1) x ... x (0, L_n) with its analytic spectrum.
ReferenceCase box_reference(const std::vector<double>& lengths, int count, double tolerance);

struct ReferenceCheck {
  std::string name;
  bool passed = false;
  /// Worst relative deviation over the compared eigenvalues.
  double worst_relative = 0.0;
  std::vector<double> computed;
  std::vector<double> expected;
};

/// Compares the leading eigenvalues of `result` with the reference values.
ReferenceCheck compare_with_reference(const ReferenceCase& ref, const Eigen::VectorXd& computed);

/// Lower bound of the hyperbolic Dirichlet spectrum: lambda_1 > (n-1)^2/4 on any
/// domain of H^n(-1).
struct McKeanCheck {
  bool applies = false;
  bool holds = true;
  double lambda1 = 0.0;
  double bound = 0.0;
};

McKeanCheck check_mckean(const SpectralResult& result);

}  // namespace confspec

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <random>

#include "confspec/eigensolver.hpp"

namespace testing_util {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Central second-order finite differences, used as an oracle for analytic derivatives.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& g,
                                   const Eigen::VectorXd& x, double step = 1e-5) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    Eigen::VectorXd a = x, b = x;
    a[d] += step;
    b[d] -= step;
    out[d] = (g(a) - g(b)) / (2 * step);
  }
  return out;
}

inline double fd_laplacian(const std::function<double(const Eigen::VectorXd&)>& g,
                           const Eigen::VectorXd& x, double step = 1e-4) {
  double sum = 0.0;
  const double c = g(x);
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    Eigen::VectorXd a = x, b = x;
    a[d] += step;
    b[d] -= step;
    sum += (g(a) - 2 * c + g(b)) / (step * step);
  }
  return sum;
}

inline confspec::SpectralResult solve(const confspec::ConformalFactorModel& model,
                                      const confspec::ChartDomain& domain, double h, int k,
                                      double tol = 1e-8) {
  auto grid = confspec::build_grid(domain, model, h);
  return confspec::solve_smallest(confspec::assemble(model, grid), k, tol, 1);
}

inline confspec::ChartDomain unit_square() {
  return confspec::ChartDomain::box(vec({0, 0}), vec({1, 1}));
}

}  // namespace testing_util

#include "confspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "confspec/errors.hpp"

namespace confspec {

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Analytic: return "analytic";
    case Provenance::CrossChart: return "cross_chart";
    case Provenance::Symbolic: return "symbolic";
  }
  return "unknown";
}

std::vector<double> analytic_box_spectrum(int n, const std::vector<double>& lengths, int count) {
  if (n < 1 || static_cast<int>(lengths.size()) != n)
    throw DimensionError("need one side length per dimension");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("side lengths must be > 0");

  std::vector<double> inv2(n);
  for (int d = 0; d < n; ++d) inv2[d] = 1.0 / (lengths[d] * lengths[d]);

  // Enumerate all tuples below a cap on sum m_d^2 / L_d^2 and grow the cap until
  // enough of them fit.
  double cap = 0.0;
  for (double v : inv2) cap += v;
  std::vector<double> values;
  while (true) {
    values.clear();
    std::function<void(int, double)> walk = [&](int d, double partial) {
      if (d == n) {
        values.push_back(partial);
        return;
      }
      for (int m = 1;; ++m) {
        const double next = partial + m * m * inv2[d];
        // Remaining axes contribute at least 1/L^2 each.
        double rest = 0.0;
        for (int e = d + 1; e < n; ++e) rest += inv2[e];
        if (next + rest > cap * (1.0 + 1e-12)) break;
        walk(d + 1, next);
      }
    };
    walk(0, 0.0);
    if (static_cast<int>(values.size()) >= count) break;
    cap *= 2.0;
  }
  std::sort(values.begin(), values.end());
  values.resize(static_cast<std::size_t>(count));
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (double& v : values) v *= pi2;
  return values;
}

CrossChartBall hyperbolic_ball_cross_chart(int n, double radius, double margin) {
  if (n < 1) throw DimensionError("dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("geodesic radius must be > 0");
  const double disk_radius = std::tanh(0.5 * radius);
  if (disk_radius >= 1.0 - margin) {
    throw MarginError("geodesic radius " + std::to_string(radius) +
                      " leaves no margin inside the unit ball");
  }
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(n);
  centre[n - 1] = std::cosh(radius);
  return {ChartDomain::ball(Eigen::VectorXd::Zero(n), disk_radius),
          ChartDomain::ball(centre, std::sinh(radius))};
}

ReferenceCase hemisphere_reference(int n) {
  if (n != 2 && n != 3) throw DimensionError("hemisphere reference is provided for n = 2, 3");
  return {"hemisphere_n" + std::to_string(n),
          ConformalFactorModel::stereographic_sphere(n),
          ChartDomain::ball(Eigen::VectorXd::Zero(n), 1.0),
          {static_cast<double>(n)},
          n == 2 ? 0.005 : 0.02,
          Provenance::Symbolic};
}

ReferenceCase box_reference(const std::vector<double>& lengths, int count, double tolerance) {
  const int n = static_cast<int>(lengths.size());
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd hi = Eigen::Map<const Eigen::VectorXd>(lengths.data(), n);
  std::string name = "box";
  for (double l : lengths) name += "_" + std::to_string(l).substr(0, 6);
  return {name,
          ConformalFactorModel::flat(n),
          ChartDomain::box(lo, hi),
          analytic_box_spectrum(n, lengths, count),
          tolerance,
          Provenance::Analytic};
}

ReferenceCheck compare_with_reference(const ReferenceCase& ref, const Eigen::VectorXd& computed) {
  ReferenceCheck out;
  out.name = ref.name;
  const int m = std::min<int>(static_cast<int>(ref.expected.size()), static_cast<int>(computed.size()));
  out.passed = m > 0;
  for (int i = 0; i < m; ++i) {
    const double rel = std::abs(computed[i] - ref.expected[i]) / std::abs(ref.expected[i]);
    out.worst_relative = std::max(out.worst_relative, rel);
    out.computed.push_back(computed[i]);
    out.expected.push_back(ref.expected[i]);
    if (!(rel <= ref.tolerance)) out.passed = false;
  }
  return out;
}

McKeanCheck check_mckean(const SpectralResult& result) {
  McKeanCheck out;
  out.applies = result.model.is_hyperbolic();
  if (!out.applies || result.count() == 0) return out;
  const double n = result.dim();
  out.lambda1 = result.eigenvalues[0];
  out.bound = (n - 1.0) * (n - 1.0) / 4.0;
  out.holds = out.lambda1 > out.bound;
  return out;
}

}  // namespace confspec

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "confspec/errors.hpp"
#include "confspec/oracle.hpp"
#include "helpers.hpp"

using namespace confspec;
using testing_util::vec;

namespace {

constexpr double kPi = std::numbers::pi;

// Riemannian length of the straight chart segment a -> b (composite Simpson).
double chart_length(const ConformalFactorModel& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int steps = 20000;
  const double len = (b - a).norm();
  double sum = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double w = (s == 0 || s == steps) ? 1.0 : (s % 2 ? 4.0 : 2.0);
    sum += w * m.exp_f(a + (b - a) * (static_cast<double>(s) / steps), 1.0);
  }
  return sum * len / (3.0 * steps);
}

}  // namespace

TEST(Oracle, BoxSpectra) {
  const auto one = analytic_box_spectrum(1, {kPi}, 3);
  EXPECT_NEAR(one[0], 1, 1e-14);
  EXPECT_NEAR(one[1], 4, 1e-14);
  EXPECT_NEAR(one[2], 9, 1e-14);
  const auto sq = analytic_box_spectrum(2, {1, 1}, 5);
  const double expect_sq[] = {2, 5, 5, 8, 10};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(sq[i], kPi * kPi * expect_sq[i], 1e-12);
  const auto rect = analytic_box_spectrum(2, {1, 2}, 3);
  const double expect_rect[] = {1.25, 2, 3.25};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(rect[i], kPi * kPi * expect_rect[i], 1e-12);
  const auto cube = analytic_box_spectrum(3, {1, 1, 1}, 7);
  EXPECT_NEAR(cube[3], 6 * kPi * kPi, 1e-12);
  EXPECT_NEAR(cube[4], 9 * kPi * kPi, 1e-12);
  EXPECT_THROW(analytic_box_spectrum(2, {1}, 3), DimensionError);
  EXPECT_THROW(analytic_box_spectrum(1, {1}, 0), std::invalid_argument);
}

TEST(Oracle, CrossChartRadii) {
  const auto balls = hyperbolic_ball_cross_chart(2, 1.0);
  EXPECT_NEAR(balls.disk.as_ball().radius, 0.46211716, 1e-8);
  EXPECT_NEAR(balls.half_space.as_ball().center[1], 1.54308063, 1e-8);
  EXPECT_NEAR(balls.half_space.as_ball().radius, 1.17520119, 1e-8);

  const auto tiny = hyperbolic_ball_cross_chart(3, 1e-6);
  EXPECT_LT(tiny.disk.as_ball().radius, 1e-6);
  EXPECT_NEAR(tiny.half_space.as_ball().center[2], 1.0, 1e-11);
  EXPECT_THROW(hyperbolic_ball_cross_chart(2, 6.0, 0.01), MarginError);
}

// Integrating the metric along radial paths recovers the geodesic radius in both charts.
TEST(Oracle, CrossChartGeodesicRadius) {
  for (double R : {0.5, 1.0, 1.7}) {
    const auto balls = hyperbolic_ball_cross_chart(2, R);
    const auto disk = ConformalFactorModel::disk_power(2, 2.0);
    const double rho = balls.disk.as_ball().radius;
    EXPECT_NEAR(chart_length(disk, vec({0, 0}), vec({rho, 0})), R, 1e-6);
    EXPECT_NEAR(chart_length(disk, vec({0, 0}), vec({0, -rho})), R, 1e-6);

    // The hyperbolic centre of the half-space ball is (0, 1).
    const auto hs = ConformalFactorModel::half_space_power(2, 2.0);
    const auto& b = balls.half_space.as_ball();
    EXPECT_NEAR(chart_length(hs, vec({0, 1}), vec({0, b.center[1] + b.radius})), R, 1e-6);
    EXPECT_NEAR(chart_length(hs, vec({0, 1}), vec({0, b.center[1] - b.radius})), R, 1e-6);
  }
}

TEST(Oracle, CrossChartEigenvaluesAgree) {
  const auto balls = hyperbolic_ball_cross_chart(2, 1.0);
  const double h = 1.0 / 96;
  const auto a = testing_util::solve(ConformalFactorModel::disk_power(2, 2.0), balls.disk, h / 2, 1);
  const auto b = testing_util::solve(ConformalFactorModel::half_space_power(2, 2.0), balls.half_space, h, 1);
  EXPECT_NEAR(a.eigenvalues[0] / b.eigenvalues[0], 1.0, 0.01);
}

TEST(Oracle, Hemisphere) {
  const auto ref = hemisphere_reference(2);
  EXPECT_EQ(ref.expected.at(0), 2.0);
  EXPECT_EQ(ref.provenance, Provenance::Symbolic);
  EXPECT_EQ(to_string(ref.provenance), "symbolic");
  EXPECT_EQ(hemisphere_reference(3).expected.at(0), 3.0);
  EXPECT_THROW(hemisphere_reference(4), DimensionError);
  const auto r = testing_util::solve(ref.model, ref.domain, 1.0 / 64, 1);
  const auto check = compare_with_reference(ref, r.eigenvalues);
  EXPECT_TRUE(check.passed) << check.worst_relative;
}

TEST(Oracle, BoxReferenceComparison) {
  const auto ref = box_reference({1, 1}, 4, 0.01);
  EXPECT_EQ(ref.provenance, Provenance::Analytic);
  const auto r = testing_util::solve(ref.model, ref.domain, 1.0 / 64, 4);
  const auto ok = compare_with_reference(ref, r.eigenvalues);
  EXPECT_TRUE(ok.passed);
  Eigen::VectorXd off = r.eigenvalues;
  off[3] *= 1.05;
  EXPECT_FALSE(compare_with_reference(ref, off).passed);
}

TEST(Oracle, McKean) {
  const auto balls = hyperbolic_ball_cross_chart(2, 1.0);
  const auto hyp = testing_util::solve(ConformalFactorModel::disk_power(2, 2.0), balls.disk, 1.0 / 64, 1);
  const auto m = check_mckean(hyp);
  EXPECT_TRUE(m.applies);
  EXPECT_TRUE(m.holds);
  EXPECT_EQ(m.bound, 0.25);
  const auto flat = testing_util::solve(ConformalFactorModel::flat(2), testing_util::unit_square(), 0.25, 1);
  EXPECT_FALSE(check_mckean(flat).applies);
}

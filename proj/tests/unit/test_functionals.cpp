#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "confspec/errors.hpp"
#include "confspec/functionals.hpp"
#include "confspec/operator.hpp"
#include "helpers.hpp"

using namespace confspec;
using testing_util::solve;
using testing_util::unit_square;
using testing_util::vec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Functionals, UnitWeightIsNormalisation) {
  const auto r = solve(ConformalFactorModel::half_space_power(2, 2.0), ChartDomain::ball(vec({0, 2}), 1.0), 1.0 / 32, 4);
  for (int i = 0; i < 4; ++i)
    EXPECT_NEAR(weighted_integral(r, i, {[](PointRef) { return 1.0; }}), 1.0, 1e-10);
  EXPECT_THROW(weighted_integral(r, 4, {[](PointRef) { return 1.0; }}), IndexError);
  EXPECT_THROW(weighted_integral(r, -1, {[](PointRef) { return 1.0; }}), IndexError);
}

TEST(Functionals, FirstMomentOnTheSquare) {
  const auto r = solve(ConformalFactorModel::flat(2), unit_square(), 1.0 / 64, 1);
  EXPECT_NEAR(weighted_integral(r, 0, {[](PointRef x) { return x[0]; }}), 0.5, 1e-10);
  // Second moment: int x^2 2 sin^2(pi x) dx = 1/3 - 1/(2 pi^2).
  const double m2 = weighted_integral(r, 0, {[](PointRef x) { return x[0] * x[0]; }});
  EXPECT_NEAR(m2, 1.0 / 3 - 1.0 / (2 * kPi * kPi), 2e-4);
}

TEST(Functionals, WeightsCancelAgainstTheVolume) {
  const auto r = solve(ConformalFactorModel::half_space_power(2, 2.0), ChartDomain::box(vec({0, 1}), vec({1, 2})), 1.0 / 32, 2);
  for (int i = 0; i < 2; ++i) {
    const double a = weighted_integral(r, i, {[](PointRef x) { return x[1] * x[1]; }});
    const double b = weighted_integral(r, i, {[](PointRef) { return 1.0; }, Density::ChartVolume});
    EXPECT_NEAR(a, b, 1e-13 * b);
  }
}

TEST(Functionals, GradientOfSine) {
  const double h = kPi / 128;
  const auto r = solve(ConformalFactorModel::flat(1), ChartDomain::interval(0, kPi), h, 1);
  const Eigen::MatrixXd g = discrete_gradient(r, 0);
  const auto& pos = r.grid->positions();
  // u_1 = c sin(x) with c fixed by B-normalisation.
  const double c = r.eigenvectors(r.grid->size() / 2, 0) / std::sin(pos(0, r.grid->size() / 2));
  for (int j = 0; j < r.grid->size(); ++j) EXPECT_NEAR(g(0, j), c * std::cos(pos(0, j)), 2e-4 * std::abs(c));
}

TEST(Functionals, GradientEnergyMatchesEigenvalue) {
  // The nodal sum covers interior nodes only, so the boundary strip costs about 2h.
  const auto r = solve(ConformalFactorModel::flat(2), unit_square(), 1.0 / 256, 2);
  const Eigen::MatrixXd g = discrete_gradient(r, 0);
  const double h2 = r.grid->h() * r.grid->h();
  const double energy = g.colwise().squaredNorm().sum() * h2;
  EXPECT_NEAR(energy / (2 * kPi * kPi), 1.0, 0.01);
  for (int i = 0; i < 2; ++i)
    EXPECT_NEAR(dirichlet_energy(r, i), r.eigenvalues[i], 1e-9 * r.eigenvalues[i]);
}

TEST(Functionals, ZeroFieldHasZeroGradient) {
  auto r = solve(ConformalFactorModel::flat(2), unit_square(), 0.25, 1);
  r.eigenvectors.setZero();
  EXPECT_EQ(discrete_gradient(r, 0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Functionals, Volumes) {
  const auto flat = ConformalFactorModel::flat(2);
  EXPECT_NEAR(riemannian_volume(flat, *build_grid(unit_square(), flat, 1.0 / 64)), 1.0, 0.035);

  const auto hs = ConformalFactorModel::half_space_power(2, 2.0);
  const auto box = ChartDomain::box(vec({0, 1}), vec({1, 2}));
  const double v1 = riemannian_volume(hs, *build_grid(box, hs, 1.0 / 64));
  const double v2 = riemannian_volume(hs, *build_grid(box, hs, 1.0 / 128));
  EXPECT_LT(std::abs(v2 - 0.5), std::abs(v1 - 0.5));
  EXPECT_NEAR(v2, 0.5, 0.01);

  // Hyperbolic disk of geodesic radius 1: area 2 pi (cosh 1 - 1).
  const auto disk = ConformalFactorModel::disk_power(2, 2.0);
  const auto ball = ChartDomain::ball(vec({0, 0}), std::tanh(0.5));
  const double area = riemannian_volume(disk, *build_grid(ball, disk, 1.0 / 512));
  EXPECT_NEAR(area / (2 * kPi * (std::cosh(1.0) - 1)), 1.0, 0.01);
}

TEST(Functionals, RhoExtrema) {
  auto [mx, mn] = rho_extrema(ChartDomain::box(vec({0, 1}), vec({1, 2})));
  EXPECT_DOUBLE_EQ(mx, 1.0);
  EXPECT_DOUBLE_EQ(mn, 0.25);
  std::tie(mx, mn) = rho_extrema(ChartDomain::ball(vec({0, 3}), 1.0));
  EXPECT_DOUBLE_EQ(mx, 0.25);
  EXPECT_DOUBLE_EQ(mn, 1.0 / 16);
  EXPECT_THROW(rho_extrema(ChartDomain::box(vec({0, -1}), vec({1, 2}))), ChartError);
}

TEST(Functionals, Weyl) {
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4 * kPi / 3, 1e-14);
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(weyl_estimate(2, 1.0, 50), 200 * kPi, 1e-10);
  // Unit disk: 4 pi k / area = 4.
  EXPECT_NEAR(weyl_estimate(2, kPi, 1), 4.0, 1e-14);
  EXPECT_NEAR(weyl_estimate(3, 1.0, 8), 4 * kPi * kPi * std::cbrt((6 / kPi) * (6 / kPi)), 1e-12);
  EXPECT_NEAR(weyl_estimate(3, 1.0, 8), 60.770665, 1e-6);
}

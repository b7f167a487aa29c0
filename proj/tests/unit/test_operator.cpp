#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "confspec/errors.hpp"
#include "confspec/operator.hpp"
#include "helpers.hpp"

using namespace confspec;
using testing_util::unit_square;
using testing_util::vec;

namespace {

double asymmetry(const SparseMatrix& a) {
  const SparseMatrix t = a.transpose();
  return (a - t).norm();
}

ScalarField smooth_field() {
  return {[](PointRef x) { return std::sin(x[0]) * std::cos(0.5 * x[1]) + x[1] * x[1]; },
          [](PointRef x) -> Eigen::VectorXd {
            Eigen::VectorXd g(2);
            g << std::cos(x[0]) * std::cos(0.5 * x[1]), -0.5 * std::sin(x[0]) * std::sin(0.5 * x[1]) + 2 * x[1];
            return g;
          },
          [](PointRef x) { return -1.25 * std::sin(x[0]) * std::cos(0.5 * x[1]) + 2.0; }};
}

}  // namespace

TEST(Operator, FlatSquareIsFivePointStencil) {
  const double h = 1.0 / 8;
  const auto pair = assemble(ConformalFactorModel::flat(2), build_grid(unit_square(), ConformalFactorModel::flat(2), h));
  const int n = pair.grid->size();
  for (int j = 0; j < n; ++j) {
    EXPECT_NEAR(pair.stiffness.coeff(j, j), 4.0, 1e-15);
    EXPECT_NEAR(pair.mass[j], h * h, 1e-17);
  }
  EXPECT_NEAR(pair.stiffness.coeff(0, 1), -1.0, 1e-15);
  EXPECT_NEAR(pair.stiffness.coeff(0, 7), -1.0, 1e-15);
  EXPECT_EQ(pair.stiffness.coeff(0, 8), 0.0);
  EXPECT_EQ(pair.stiffness.nonZeros(), 5 * n - 4 * 7);
}

TEST(Operator, ClosedFormSmallestEigenvalues) {
  // Interval (0, pi), h = pi/4: (2 - sqrt 2)/h^2. Unit square, h = 1/4: 2 (2 - 2 cos(pi h))/h^2.
  const auto line = testing_util::solve(ConformalFactorModel::flat(1), ChartDomain::interval(0, std::numbers::pi),
                                        std::numbers::pi / 4, 1);
  EXPECT_EQ(line.grid->size(), 3);
  const double hl = std::numbers::pi / 4;
  EXPECT_NEAR(line.eigenvalues[0], (2 - std::sqrt(2.0)) / (hl * hl), 1e-12);
  const auto sq = testing_util::solve(ConformalFactorModel::flat(2), unit_square(), 0.25, 1);
  EXPECT_NEAR(sq.eigenvalues[0], 2 * (2 - 2 * std::cos(std::numbers::pi / 4)) * 16, 1e-11);
  EXPECT_NEAR(sq.eigenvalues[0], 18.745166004060955, 1e-11);
}

TEST(Operator, HalfSpaceInTwoDimensionsKeepsTheFlatStiffness) {
  const auto hs = ConformalFactorModel::half_space_power(2, 2.0);
  const auto box = ChartDomain::box(vec({0, 1}), vec({1, 2}));
  const double h = 1.0 / 16;
  const auto grid = build_grid(box, hs, h);
  const auto curved = assemble(hs, grid);
  const auto flat = assemble(ConformalFactorModel::flat(2), grid);
  EXPECT_LT((curved.stiffness - flat.stiffness).norm(), 1e-14);
  for (int j = 0; j < grid->size(); ++j) {
    const double x2 = grid->position(j)[1];
    EXPECT_NEAR(curved.mass[j], h * h / (x2 * x2), 1e-16);
  }
}

TEST(Operator, SymmetricPositiveDefinite) {
  const std::vector<std::pair<ConformalFactorModel, ChartDomain>> cases = {
      {ConformalFactorModel::half_space_power(2, 2.0), ChartDomain::ball(vec({0, 2}), 1.0)},
      {ConformalFactorModel::disk_power(3, 1.5), ChartDomain::ball(vec({0, 0, 0}), 0.6)},
      {ConformalFactorModel::stereographic_sphere(2), ChartDomain::ball(vec({0.1, 0}), 1.0)},
  };
  for (const auto& [model, domain] : cases) {
    const auto pair = assemble(model, build_grid(domain, model, 0.07));
    EXPECT_LT(asymmetry(pair.stiffness), 1e-14 * pair.stiffness.norm()) << model.name();
    EXPECT_TRUE(positive_definite(pair.stiffness)) << model.name();
    EXPECT_GT(pair.mass.minCoeff(), 0.0);
  }
}

TEST(Operator, ThreadCountDoesNotChangeTheMatrix) {
  const auto model = ConformalFactorModel::half_space_power(3, 1.3);
  const auto grid = build_grid(ChartDomain::ball(vec({0, 0, 2}), 1.0), model, 0.08);
  const auto one = assemble(model, grid, {1, false});
  const auto four = assemble(model, grid, {4, false});
  ASSERT_EQ(one.stiffness.nonZeros(), four.stiffness.nonZeros());
  for (int i = 0; i < one.stiffness.nonZeros(); ++i) {
    EXPECT_EQ(one.stiffness.valuePtr()[i], four.stiffness.valuePtr()[i]);
    EXPECT_EQ(one.stiffness.innerIndexPtr()[i], four.stiffness.innerIndexPtr()[i]);
  }
  EXPECT_EQ((one.mass - four.mass).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Operator, ConsistencyIsSecondOrder) {
  const auto model = ConformalFactorModel::half_space_power(2, 2.0);
  const auto domain = ChartDomain::box(vec({0, 0.5}), vec({1, 1.5}));
  const ScalarField field = smooth_field();
  double prev = 0.0;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const double err = verify_assembly(model, build_grid(domain, model, h), field);
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 2.0, 0.25) << "h=" << h;
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Operator, SignFaultIsDetected) {
  const auto model = ConformalFactorModel::flat(2);
  const auto grid = build_grid(unit_square(), model, 1.0 / 16);
  const auto good = assemble(model, grid);
  const auto bad = assemble(model, grid, {1, true});
  EXPECT_TRUE(positive_definite(good.stiffness));
  EXPECT_GT((good.stiffness - bad.stiffness).norm(), 1.0);
  // Boundary-adjacent diagonal entries move by twice the arm weight.
  EXPECT_NEAR(good.stiffness.coeff(0, 0) - bad.stiffness.coeff(0, 0), 4.0, 1e-14);
}

TEST(Operator, CooDump) {
  const auto model = ConformalFactorModel::flat(2);
  const auto pair = assemble(model, build_grid(unit_square(), model, 0.25));
  const std::string path = ::testing::TempDir() + "stiffness.coo";
  write_coo(path, pair.stiffness);
  std::ifstream in(path);
  int r, c, lines = 0;
  double v, trace = 0.0;
  while (in >> r >> c >> v) {
    ++lines;
    EXPECT_EQ(pair.stiffness.coeff(r, c), v);
    if (r == c) trace += v;
  }
  EXPECT_EQ(lines, pair.stiffness.nonZeros());
  EXPECT_EQ(trace, 36.0);
  std::remove(path.c_str());
}

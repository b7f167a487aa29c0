#include <gtest/gtest.h>

#include <cmath>

#include "confspec/domain_mesh.hpp"
#include "confspec/errors.hpp"
#include "helpers.hpp"

using namespace confspec;
using testing_util::unit_square;
using testing_util::vec;

TEST(DomainMesh, AlignedBoxCountsAndArms) {
  const auto g = build_grid(unit_square(), ConformalFactorModel::flat(2), 1.0 / 8);
  EXPECT_TRUE(g->aligned());
  EXPECT_EQ(g->size(), 49);
  for (int j = 0; j < g->size(); ++j)
    for (int d = 0; d < 2; ++d)
      for (int s = 0; s < 2; ++s) EXPECT_EQ(g->arm(j, d, s).theta, 1.0);
  // Axis 0 varies fastest.
  EXPECT_DOUBLE_EQ(g->position(0)[0], 0.125);
  EXPECT_DOUBLE_EQ(g->position(1)[0], 0.25);
  EXPECT_DOUBLE_EQ(g->position(7)[1], 0.25);
  EXPECT_EQ(g->arm(0, 0, 1).neighbor, 1);
  EXPECT_EQ(g->arm(0, 1, 1).neighbor, 7);
  EXPECT_EQ(g->arm(0, 0, 0).neighbor, -1);
}

TEST(DomainMesh, BallArmsEndOnTheSphere) {
  const auto domain = ChartDomain::ball(vec({0.1, -0.2}), 0.7);
  const auto g = build_grid(domain, ConformalFactorModel::flat(2), 1.0 / 37);
  EXPECT_FALSE(g->aligned());
  int boundary_arms = 0;
  for (int j = 0; j < g->size(); ++j) {
    EXPECT_TRUE(domain.contains(g->position(j)));
    for (int d = 0; d < 2; ++d)
      for (int s = 0; s < 2; ++s) {
        const Arm& a = g->arm(j, d, s);
        EXPECT_GT(a.theta, 0.0);
        EXPECT_LE(a.theta, 1.0);
        if (a.neighbor >= 0) continue;
        ++boundary_arms;
        Eigen::VectorXd end = g->position(j);
        end[d] += (s ? 1 : -1) * a.theta * g->h();
        EXPECT_NEAR((end - vec({0.1, -0.2})).norm(), 0.7, 1e-12);
      }
  }
  EXPECT_GT(boundary_arms, 0);
}

TEST(DomainMesh, NeighbourSymmetry) {
  const auto g = build_grid(ChartDomain::ball(vec({0, 0, 0}), 1.0), ConformalFactorModel::flat(3), 0.2);
  for (int j = 0; j < g->size(); ++j)
    for (int d = 0; d < 3; ++d) {
      const int nb = g->arm(j, d, 1).neighbor;
      if (nb >= 0) EXPECT_EQ(g->arm(nb, d, 0).neighbor, j);
    }
}

TEST(DomainMesh, RefinementGrowth) {
  const auto m = ConformalFactorModel::flat(2);
  const auto coarse = build_grid(unit_square(), m, 1.0 / 16);
  const auto fine = build_grid(unit_square(), m, 1.0 / 32);
  for (int d = 0; d < 2; ++d) EXPECT_EQ(fine->extents()[d], 2 * (coarse->extents()[d] - 1) + 1);
  EXPECT_GE(fine->size(), 4 * coarse->size());
  const auto b1 = build_grid(ChartDomain::ball(vec({0, 0}), 0.5), m, 1.0 / 16);
  const auto b2 = build_grid(ChartDomain::ball(vec({0, 0}), 0.5), m, 1.0 / 32);
  EXPECT_GE(b2->size(), 4 * b1->size() - 4 * 33);
}

TEST(DomainMesh, Margins) {
  const auto hs = ConformalFactorModel::half_space_power(2, 2.0);
  EXPECT_THROW(build_grid(ChartDomain::box(vec({0, 0.01}), vec({1, 1})), hs, 0.05), MarginError);
  EXPECT_NO_THROW(build_grid(ChartDomain::box(vec({0, 0.05}), vec({1, 1})), hs, 0.05));
  const auto disk = ConformalFactorModel::disk_power(2, 2.0);
  EXPECT_THROW(build_grid(ChartDomain::ball(vec({0, 0}), 0.99), disk, 0.05), MarginError);
  EXPECT_NO_THROW(build_grid(ChartDomain::ball(vec({0, 0}), 0.9), disk, 0.05));
}

TEST(DomainMesh, Errors) {
  const auto m = ConformalFactorModel::flat(2);
  EXPECT_THROW(build_grid(unit_square(), m, 2.0), EmptyGridError);
  EXPECT_THROW(build_grid(unit_square(), ConformalFactorModel::flat(3), 0.1), DimensionError);
  EXPECT_THROW(build_grid(unit_square(), m, -0.1), std::invalid_argument);
  EXPECT_THROW(ChartDomain::box(vec({0, 0}), vec({1})), DimensionError);
  EXPECT_THROW(ChartDomain::box(vec({1, 0}), vec({0, 1})), std::invalid_argument);
  EXPECT_THROW(ChartDomain::ball(vec({0, 0}), 0.0), std::invalid_argument);
}

TEST(DomainMesh, DomainGeometry) {
  const auto ball = ChartDomain::ball(vec({0, 3}), 1.0);
  EXPECT_EQ(ball.axis_extent(1).first, 2.0);
  EXPECT_EQ(ball.axis_extent(1).second, 4.0);
  EXPECT_NEAR(ball.boundary_distance(vec({0, 3.5})), 0.5, 1e-15);
  EXPECT_TRUE(ball.contains(vec({0.5, 3})));
  EXPECT_FALSE(ball.contains(vec({1.5, 3})));
  EXPECT_NEAR(unit_square().max_norm(), std::sqrt(2.0), 1e-15);
}

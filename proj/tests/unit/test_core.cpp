#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "manifit/errors.hpp"
#include "manifit/kdtree.hpp"
#include "manifit/neighbors.hpp"
#include "manifit/random.hpp"
#include "manifit/weights.hpp"

using namespace manifit;
using fixtures::vec;

namespace {

PointCloud
random_cloud(Philox& rng, Index dim, Index n, double scale = 1.0)
{
  Matrix m(dim, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < dim; ++k) {
      m(k, i) = scale * (2.0 * rng.uniform() - 1.0);
    }
  }
  return PointCloud(m);
}

NeighborSet
make_set(std::vector<double> distances, double r)
{
  NeighborSet s;
  s.radius = r;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    s.indices.push_back(static_cast<Index>(i));
  }
  s.distances = std::move(distances);
  return s;
}

} // namespace

TEST(PointCloud, RejectsNonFiniteCoordinates)
{
  Matrix m(2, 2);
  m << 0, 1, std::numeric_limits<double>::quiet_NaN(), 2;
  EXPECT_THROW(PointCloud{ m }, InvalidInput);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(PointCloud{ m }, InvalidInput);
}

TEST(PointCloud, RejectsRaggedRows)
{
  EXPECT_THROW(PointCloud::from_rows({ { 0.0, 1.0 }, { 2.0 } }), DimensionError);
  EXPECT_THROW(PointCloud(Matrix(0, 3)), DimensionError);
}

TEST(PointCloud, FromRowsAndSubset)
{
  const auto c = PointCloud::from_rows({ { 0.0, 1.0 }, { 2.0, 3.0 }, { 4.0, 5.0 } });
  EXPECT_EQ(c.dim(), 2);
  EXPECT_EQ(c.size(), 3);
  const std::vector<Index> keep{ 2, 0 };
  const auto s = c.subset(keep);
  EXPECT_EQ(s.point(0), vec({ 4.0, 5.0 }));
  EXPECT_EQ(s.point(1), vec({ 0.0, 1.0 }));
}

TEST(RadiusNeighbors, OneDimensionalExample)
{
  const auto cloud = PointCloud::from_rows({ { 0.0 }, { 1.0 }, { 3.0 } });
  const auto n = radius_neighbors(vec({ 0.0 }), 1.5, cloud);
  EXPECT_EQ(n.indices, (std::vector<Index>{ 0, 1 }));
  EXPECT_EQ(n.distances, (std::vector<double>{ 0.0, 1.0 }));
}

TEST(RadiusNeighbors, EmptyBallAndSelfInclusion)
{
  const auto cloud = PointCloud::from_rows({ { 0.0, 0.0 }, { 1.0, 1.0 } });
  EXPECT_TRUE(radius_neighbors(vec({ 0.5, -3.0 }), 0.1, cloud).empty());
  const auto self = radius_neighbors(vec({ 1.0, 1.0 }), 1e-9, cloud);
  ASSERT_EQ(self.indices, (std::vector<Index>{ 1 }));
  EXPECT_EQ(self.distances[0], 0.0);
}

TEST(RadiusNeighbors, ClosedBall)
{
  const auto cloud = PointCloud::from_rows({ { 0.0 }, { 2.0 } });
  EXPECT_EQ(radius_neighbors(vec({ 0.0 }), 2.0, cloud).indices, (std::vector<Index>{ 0, 1 }));
}

TEST(RadiusNeighbors, InputValidation)
{
  const auto cloud = PointCloud::from_rows({ { 0.0, 0.0 } });
  EXPECT_THROW(radius_neighbors(vec({ 0.0 }), 1.0, cloud), DimensionError);
  EXPECT_THROW(radius_neighbors(vec({ 0.0, std::nan("") }), 1.0, cloud), InvalidInput);
  EXPECT_THROW(radius_neighbors(vec({ 0.0, 0.0 }), 0.0, cloud), InvalidInput);
  EXPECT_THROW(radius_neighbors(vec({ 0.0, 0.0 }), -1.0, cloud), InvalidInput);
}

TEST(RadiusNeighbors, TreeMatchesExhaustiveOnRandomClouds)
{
  Philox rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = 1 + static_cast<Index>(rng() % 5);
    const Index n = 1 + static_cast<Index>(rng() % 500);
    auto cloud = random_cloud(rng, dim, n);
    if (trial % 10 == 0) {
      // duplicated points exercise tie handling
      Matrix m = cloud.coords();
      for (Index i = 1; i < n; i += 3) {
        m.col(i) = m.col(i - 1);
      }
      cloud = PointCloud(m);
    }
    const NeighborIndex tree(cloud, NeighborIndex::Backend::KdTree);
    const NeighborIndex flat(cloud, NeighborIndex::Backend::Exhaustive);
    for (int q = 0; q < 10; ++q) {
      Vector x(dim);
      for (Index k = 0; k < dim; ++k) {
        x[k] = 1.2 * (2.0 * rng.uniform() - 1.0);
      }
      if (q == 0) {
        x = cloud.point(0);
      }
      const double r = 0.05 + rng.uniform();
      const auto ref = radius_neighbors(x, r, cloud);
      const auto a = tree.query(x, r);
      const auto b = flat.query(x, r);
      ASSERT_EQ(a.indices, ref.indices);
      ASSERT_EQ(a.distances, ref.distances);
      ASSERT_EQ(b.indices, ref.indices);
      ASSERT_EQ(b.distances, ref.distances);
    }
  }
}

TEST(RadiusNeighbors, SortedAndWithinRadius)
{
  Philox rng(5);
  const auto cloud = random_cloud(rng, 3, 400);
  const NeighborIndex index(cloud);
  const auto n = index.query(vec({ 0.1, 0.2, 0.3 }), 0.6);
  ASSERT_FALSE(n.empty());
  for (std::size_t i = 0; i < n.size(); ++i) {
    EXPECT_LE(n.distances[i], 0.6);
    EXPECT_GE(n.distances[i], 0.0);
    if (i > 0) {
      EXPECT_LT(n.indices[i - 1], n.indices[i]);
    }
  }
}

TEST(KdTree, NearestBreaksTiesByLowestIndex)
{
  const auto cloud = PointCloud::from_rows({ { 1.0 }, { -1.0 }, { 1.0 }, { 5.0 } });
  const KdTree tree(cloud, 1);
  const double x = 0.0;
  EXPECT_EQ(tree.nearest(&x).first, 0);
  const double y = 1.0;
  EXPECT_EQ(tree.nearest(&y), (std::pair<Index, double>{ 0, 0.0 }));
}

TEST(Weights, SingleNeighborAtCenter)
{
  const auto w = compute_weights(make_set({ 0.0 }, 1.0), 2);
  EXPECT_EQ(w.raw[0], 1.0);
  EXPECT_EQ(w.normalized[0], 1.0);
}

TEST(Weights, HandEvaluatedPair)
{
  const double r = 2.5;
  const auto w = compute_weights(make_set({ 0.6 * r, 0.8 * r }, r), 2);
  EXPECT_NEAR(w.raw[0], 0.4096, 1e-15);
  EXPECT_NEAR(w.raw[1], 0.1296, 1e-15);
  EXPECT_NEAR(w.normalized[0], 0.4096 / 0.5392, 1e-15);
  EXPECT_NEAR(w.normalized[1], 0.1296 / 0.5392, 1e-15);
  EXPECT_NEAR(w.normalized[0], 0.7596, 5e-5);
  EXPECT_NEAR(w.normalized[1], 0.2404, 5e-5);
}

TEST(Weights, BoundaryNeighborContributesNothing)
{
  const auto w = compute_weights(make_set({ 0.5, 1.0 }, 1.0), 3);
  EXPECT_EQ(w.raw[1], 0.0);
  EXPECT_EQ(w.normalized[1], 0.0);
  EXPECT_EQ(w.normalized[0], 1.0);
  EXPECT_EQ(raw_weight(1.0, 1.0, 2), 0.0);
  EXPECT_EQ(raw_weight(1.5, 1.0, 2), 0.0);
}

TEST(Weights, Errors)
{
  EXPECT_THROW(compute_weights(make_set({}, 1.0), 2), EmptyNeighborhood);
  EXPECT_THROW(compute_weights(make_set({ 1.0, 1.0 }, 1.0), 2), EmptyNeighborhood);
  EXPECT_THROW(compute_weights(make_set({ 0.1 }, 1.0), 1), InvalidInput);
}

TEST(Weights, PartitionOfUnity)
{
  Philox rng(3);
  const auto cloud = random_cloud(rng, 3, 300);
  for (int q = 0; q < 50; ++q) {
    const Vector x = vec({ rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5 });
    const auto n = radius_neighbors(x, 0.5, cloud);
    if (n.empty()) {
      continue;
    }
    const auto w = compute_weights(n, 2 + q % 4);
    double sum = 0.0;
    for (double a : w.normalized) {
      EXPECT_GE(a, 0.0);
      sum += a;
    }
    for (double a : w.raw) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Weights, SecondDerivativeVanishesAtSupportBoundary)
{
  const double r = 1.0;
  // beta = 2 is only C^1 at the boundary: (1 - t^2)^2 has second derivative 8 at t = 1
  for (int beta = 3; beta <= 5; ++beta) {
    auto second = [&](double offset) {
      const double t = r - offset;
      const double h = offset / 4.0;
      return (raw_weight(t + h, r, beta) - 2.0 * raw_weight(t, r, beta) + raw_weight(t - h, r, beta)) / (h * h);
    };
    const double far = std::abs(second(1e-3 * r));
    const double near = std::abs(second(1e-4 * r));
    EXPECT_LT(near, far) << "beta " << beta;
  }
}

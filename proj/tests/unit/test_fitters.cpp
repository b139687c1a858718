#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "manifit/errors.hpp"
#include "manifit/fitters.hpp"
#include "manifit/manifolds.hpp"
#include "manifit/random.hpp"

using namespace manifit;
using fixtures::vec;

namespace {

double
max_norm_on_circle(const FittedField& field, const PointCloud& probes)
{
  double worst = 0.0;
  for (Index i = 0; i < probes.size(); ++i) {
    worst = std::max(worst, field_ours(probes.point(i), field).norm());
  }
  return worst;
}

} // namespace

TEST(Bump, PlateauAndSupport)
{
  EXPECT_EQ(bump(0.2), 1.0);
  EXPECT_EQ(bump(0.25), 1.0);
  EXPECT_EQ(bump(-3.0), 1.0);
  EXPECT_EQ(bump(1.5), 0.0);
  EXPECT_EQ(bump(1.0), 0.0);
  EXPECT_NEAR(bump(5.0 / 8.0), 0.5, 1e-15);
}

TEST(Bump, MonotoneAndTwiceDifferentiableAtJoins)
{
  double prev = 1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 0.25 + 0.75 * k / 1000.0;
    const double v = bump(t);
    EXPECT_LE(v, prev);
    EXPECT_GE(v, 0.0);
    prev = v;
  }
  const double h = 1e-4;
  for (double join : { 0.25, 1.0 }) {
    const double d1 = (bump(join + h) - bump(join - h)) / (2 * h);
    const double d2 = (bump(join + h) - 2 * bump(join) + bump(join - h)) / (h * h);
    EXPECT_NEAR(d1, 0.0, 1e-6);
    EXPECT_NEAR(d2, 0.0, 1e-2);
  }
}

TEST(EpsilonNet, Examples)
{
  const auto cloud = PointCloud::from_rows({ { 0.0 }, { 0.1 }, { 1.0 } });
  EXPECT_EQ(epsilon_net(cloud, 0.2), (std::vector<Index>{ 0, 2 }));
  EXPECT_EQ(epsilon_net(cloud, 5.0), (std::vector<Index>{ 0 }));
  EXPECT_EQ(epsilon_net(cloud, 0.05), (std::vector<Index>{ 0, 1, 2 }));
  EXPECT_THROW(epsilon_net(cloud, 0.0), InvalidInput);
}

TEST(EpsilonNet, CoversTheCloud)
{
  const auto cloud = sample_manifold(ManifoldSpec::torus(2.0, 0.5), 3000, 4);
  const double eps = 0.3;
  const auto net = epsilon_net(cloud, eps);
  const auto kept = cloud.subset(net);
  for (Index i = 0; i < cloud.size(); ++i) {
    double best = 1e300;
    for (Index j = 0; j < kept.size(); ++j) {
      best = std::min(best, (cloud.point(i) - kept.point(j)).norm());
    }
    ASSERT_LE(best, eps);
  }
  for (std::size_t a = 0; a < net.size(); ++a) {
    for (std::size_t b = a + 1; b < net.size(); ++b) {
      ASSERT_GT((cloud.point(net[a]) - cloud.point(net[b])).norm(), eps);
    }
  }
}

TEST(FieldOurs, LineDataOffset)
{
  const auto field = FittedField::ours(fixtures::line_data(), 0.5, 3, 1);
  const Vector f = field_ours(vec({ 0.0, 0.3 }), field);
  EXPECT_EQ(f[0], 0.0);
  EXPECT_NEAR(f[1], 0.3, 1e-15);
  const auto ev = evaluate_field(vec({ 0.0, 0.3 }), field);
  EXPECT_LE((ev.projector.matrix - Matrix(vec({ 0.0, 1.0 }).asDiagonal())).norm(), 1e-15);
}

TEST(FieldOurs, ZeroAtTheWeightedMean)
{
  const auto cloud = PointCloud::from_rows({ { 0.3, 0.4 }, { 5.0, 5.0 } });
  const auto field = FittedField::ours(cloud, 1.0, 2, 1);
  const Vector f = field_ours(vec({ 0.3, 0.4 }), field);
  EXPECT_EQ(f.norm(), 0.0);
}

TEST(FieldOurs, BiasScalesWithRSquaredOnTheCircle)
{
  const auto spec = ManifoldSpec::circle();
  const auto data = sample_manifold(spec, 20000, 1);
  const auto probes = sample_manifold(spec, 100, 2);
  const double r = 0.1;
  const double small = max_norm_on_circle(FittedField::ours(data, r, 3, 1), probes);
  const double large = max_norm_on_circle(FittedField::ours(data, 2 * r, 3, 1), probes);
  EXPECT_GT(small, 0.0);
  EXPECT_LE(large / small, 4.5);
}

TEST(FieldOurs, ExactRecoveryOnAffineData)
{
  Philox rng(31);
  const auto field = FittedField::ours(fixtures::plane_data(21), 0.35, 4, 2);
  for (int q = 0; q < 50; ++q) {
    const Vector x = vec({ 1.4 * rng.uniform() - 0.7, 1.4 * rng.uniform() - 0.7, 0.4 * rng.uniform() - 0.2 });
    const Vector f = field_ours(x, field);
    EXPECT_LE((f - vec({ 0.0, 0.0, x[2] })).norm(), 1e-8);
  }
}

TEST(FieldOurs, ValueLiesInEstimatedNormalSpace)
{
  const auto spec = ManifoldSpec::sphere(1.0, 3);
  const auto data = add_gaussian_noise(sample_manifold(spec, 3000, 5), { 0.01, 6 });
  const auto probes = sample_tube(spec, 50, 0.05, 7);
  for (const Method m : { Method::Ours, Method::Cf18 }) {
    FittedField::Options opts;
    opts.beta = 3;
    const auto field = FittedField::fit(m, data, 0.3, 2, opts);
    for (Index i = 0; i < probes.size(); ++i) {
      const auto ev = evaluate_field(probes.point(i), field);
      EXPECT_LE((ev.projector.matrix * ev.value - ev.value).norm(), 1e-10 * ev.value.norm());
    }
  }
}

TEST(FieldOurs, EmptyNeighborhoodAndMisuse)
{
  const auto field = FittedField::ours(fixtures::line_data(), 0.2, 2, 1);
  EXPECT_THROW(field_ours(vec({ 0.0, 5.0 }), field), EmptyNeighborhood);
  EXPECT_THROW(field_cf18(vec({ 0.0, 0.1 }), field), InvalidInput);
  EXPECT_THROW(asdf_km17(vec({ 0.0, 0.1 }), field), InvalidInput);
  EXPECT_THROW(FittedField::fit(Method::Ours, fixtures::line_data(), 0.2, 1, {}), InvalidInput);
  EXPECT_THROW(FittedField::ours(fixtures::line_data(), 0.2, 1, 1), InvalidInput);
  EXPECT_THROW(FittedField::ours(fixtures::line_data(), 0.2, 2, 2), InvalidInput);
  EXPECT_THROW(FittedField::ours(fixtures::line_data(), -0.2, 2, 1), InvalidInput);
}

TEST(FieldCf18, DefaultsAndNet)
{
  const auto field = FittedField::cf18(fixtures::line_data(401), 0.3, 1);
  EXPECT_EQ(field.beta(), 3);
  EXPECT_DOUBLE_EQ(field.net_radius(), 0.09);
  EXPECT_EQ(field.site_indices(), epsilon_net(field.cloud(), 0.09));
  EXPECT_LT(field.sites().size(), field.cloud().size());
}

TEST(FieldCf18, LineDataOffsetAndAgreementWithOurs)
{
  const auto data = fixtures::line_data();
  const auto cf = FittedField::cf18(data, 0.5, 1, 3);
  const auto ours = FittedField::ours(data, 0.5, 3, 1);
  const Vector f = field_cf18(vec({ 0.0, 0.3 }), cf);
  EXPECT_EQ(f[0], 0.0);
  EXPECT_NEAR(f[1], 0.3, 1e-15);
  for (const Vector x : { vec({ 0.03, 0.12 }), vec({ -1.0, -0.2 }), vec({ 1.31, 0.05 }) }) {
    const auto vc = evaluate_field(x, cf);
    // identical projectors everywhere: the cf18 field reduces to the plain one on the same sites
    const auto sites = cf.sites();
    const auto plain = FittedField::ours(sites, 0.5, 3, 1);
    EXPECT_LE((vc.value - field_ours(x, plain)).norm(), 1e-14);
    EXPECT_LE((vc.value - field_ours(x, ours)).norm(), 1e-14);
  }
}

TEST(FieldCf18, ZeroAtLoneNetPoint)
{
  const auto cloud = PointCloud::from_rows({ { 0.0, 0.0 }, { 0.1, 0.0 }, { 3.0, 1.0 } });
  const auto field = FittedField::cf18(cloud, 0.5, 1);
  ASSERT_EQ(field.site_indices(), (std::vector<Index>{ 0, 2 }));
  EXPECT_EQ(field_cf18(vec({ 3.0, 1.0 }), field).norm(), 0.0);
}

TEST(Asdf, ZeroOnTheLine)
{
  const auto field = FittedField::km17(fixtures::line_data(), 0.5, 1);
  EXPECT_EQ(asdf_km17(vec({ 0.07, 0.0 }), field), 0.0);
  EXPECT_GT(asdf_km17(vec({ 0.07, 0.01 }), field), 0.0);
}

TEST(Asdf, LoneNeighbor)
{
  const auto cloud = PointCloud::from_rows({ { 0.0, 0.0 }, { -0.2, 0.0 } });
  const auto field = FittedField::km17(cloud, 0.55, 1);
  ASSERT_EQ(field.site_neighbors(vec({ 0.3, 0.4 })).indices, (std::vector<Index>{ 0 }));
  EXPECT_NEAR(asdf_km17(vec({ 0.3, 0.4 }), field), 0.16, 1e-15);
}

TEST(Asdf, EqualWeightsGiveTheArithmeticMean)
{
  // Two perpendicular two-point segments; each pair is farther than r from the
  // other, and x sees one point of each with bump weight 1.
  const double r = 0.4;
  const double xs = -std::sqrt(0.03);
  const Vector x = vec({ xs, 0.1 });
  const auto cloud = PointCloud::from_rows(
    { { xs - 0.38, 0.0 }, { xs - 0.68, 0.0 }, { 0.0, 0.44 }, { 0.0, 0.74 } });
  const auto field = FittedField::km17(cloud, r, 1);
  ASSERT_EQ(field.site_neighbors(x).indices, (std::vector<Index>{ 0, 2 }));
  EXPECT_NEAR(asdf_km17(x, field), 0.02, 1e-15);
}

TEST(Asdf, NonnegativeAndAllWeightsZero)
{
  const auto spec = ManifoldSpec::circle();
  const auto field = FittedField::km17(add_gaussian_noise(sample_manifold(spec, 500, 1), { 0.02, 2 }), 0.2, 1);
  const auto probes = sample_tube(spec, 200, 0.1, 3);
  for (Index i = 0; i < probes.size(); ++i) {
    EXPECT_GE(asdf_km17(probes.point(i), field), 0.0);
  }
  const auto line = FittedField::km17(fixtures::line_data(), 0.2, 1);
  EXPECT_THROW(asdf_km17(vec({ 0.0, 0.3 }), line), AllWeightsZero);
}

TEST(RidgeDirection, QuadraticToyField)
{
  const Index dim = 3;
  auto f = [dim](const Vector& y) { return y[dim - 1] * y[dim - 1]; };
  const Vector x = vec({ 0.2, -0.4, 0.3 });
  for (double h : { 1e-2, 1e-3, 1e-4 }) {
    const auto rd = ridge_direction(f, x, h, 2);
    Matrix hess = Matrix::Zero(dim, dim);
    hess(2, 2) = 2.0;
    EXPECT_LE((rd.hessian - hess).norm(), 1e-6);
    EXPECT_LE((rd.gradient - vec({ 0.0, 0.0, 0.6 })).norm(), 1e-9);
    EXPECT_LE((rd.direction - vec({ 0.0, 0.0, 0.6 })).norm(), 1e-9);
  }
  const auto on_ridge = ridge_direction(f, vec({ 0.2, -0.4, 0.0 }), 1e-3, 2);
  EXPECT_EQ(on_ridge.direction.norm(), 0.0);
}

TEST(RidgeDirection, SecondOrderConvergence)
{
  auto f = [](const Vector& y) { return y[1] * y[1] + y[1] * y[1] * y[1] * y[1]; };
  const Vector x = vec({ 0.1, 0.3 });
  const double exact = 2 * 0.3 + 4 * 0.3 * 0.3 * 0.3;
  const double e1 = std::abs(ridge_direction(f, x, 1e-2, 1).direction[1] - exact);
  const double e2 = std::abs(ridge_direction(f, x, 5e-3, 1).direction[1] - exact);
  EXPECT_GE(e1 / e2, 3.5);
}

TEST(RidgeDirection, StencilEscape)
{
  auto f = [](const Vector& y) {
    if (y[1] > 0.5) {
      throw AllWeightsZero("outside");
    }
    return y[1] * y[1];
  };
  EXPECT_THROW(ridge_direction(f, vec({ 0.0, 0.5 }), 1e-3, 1), StencilEscape);
}

TEST(RidgeDirection, SymmetricLineData)
{
  const auto field = FittedField::km17(fixtures::line_data(81), 0.5, 1);
  const Vector dir = km17_ridge_direction(vec({ 0.0, 0.2 }), field, 1e-4 * 0.5);
  EXPECT_GT(dir[1], 0.0);
  EXPECT_LE(std::abs(dir[0]), 1e-6 * dir.norm());
}

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "manifit/point_cloud.hpp"
#include "manifit/random.hpp"

namespace manifit {

enum class ManifoldKind
{
  Circle,
  Sphere,
  Torus,
  Affine
};

std::string_view
to_string(ManifoldKind k);

std::optional<ManifoldKind>
parse_manifold_kind(std::string_view name);

/// Ground-truth manifold centered at the origin in canonical orientation.
///
/// Circle: radius R in R^2. Sphere: radius R in R^D (d = D - 1).
/// Torus: major R, minor a in R^3, axis e_3. Affine: offset + span(basis),
/// sampled over the coefficient box [-extent, extent]^d.
struct ManifoldSpec
{
  ManifoldKind kind = ManifoldKind::Circle;
  double radius = 1.0;
  double major = 2.0;
  double minor = 0.5;
  Matrix basis;  // D x d, orthonormal columns (Affine)
  Vector offset; // D (Affine)
  double extent = 1.0;
  Index ambient_dim = 2;
  Index intrinsic_dim = 1;

  static ManifoldSpec circle(double radius = 1.0);
  static ManifoldSpec sphere(double radius = 1.0, Index ambient_dim = 3);
  static ManifoldSpec torus(double major = 2.0, double minor = 0.5);
  /// Orthonormalizes the basis columns.
  static ManifoldSpec affine(const Matrix& basis, const Vector& offset, double extent = 1.0);

  /// Analytic reach: R for circle/sphere, a for the torus, +inf for affine.
  double reach() const;
  void validate() const;
};

struct NoiseSpec
{
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// N points exactly on the manifold, uniform with respect to surface measure.
PointCloud
sample_manifold(const ManifoldSpec& spec, Index n, std::uint64_t seed);

/// Adds independent isotropic N(0, sigma^2 I_D) noise to every point.
PointCloud
add_gaussian_noise(const PointCloud& cloud, const NoiseSpec& noise);

/// N0 points within tube_radius of the manifold: uniform anchor plus an offset
/// uniform in the ambient ball. Throws TubeExceedsReach unless
/// tube_radius < reach.
PointCloud
sample_tube(const ManifoldSpec& spec, Index n0, double tube_radius, std::uint64_t seed);

/// Exact Euclidean distance from x to the manifold.
double
analytic_distance(const ManifoldSpec& spec, VectorRef x);

} // namespace manifit

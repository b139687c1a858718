#include "manifit/manifolds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "manifit/errors.hpp"

namespace manifit {

std::string_view
to_string(ManifoldKind k)
{
  switch (k) {
    case ManifoldKind::Circle:
      return "circle";
    case ManifoldKind::Sphere:
      return "sphere";
    case ManifoldKind::Torus:
      return "torus";
    case ManifoldKind::Affine:
      return "affine";
  }
  return "unknown";
}

std::optional<ManifoldKind>
parse_manifold_kind(std::string_view name)
{
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  for (auto k : { ManifoldKind::Circle, ManifoldKind::Sphere, ManifoldKind::Torus, ManifoldKind::Affine }) {
    if (lower == to_string(k)) {
      return k;
    }
  }
  return std::nullopt;
}

ManifoldSpec
ManifoldSpec::circle(double radius)
{
  ManifoldSpec s;
  s.kind = ManifoldKind::Circle;
  s.radius = radius;
  s.ambient_dim = 2;
  s.intrinsic_dim = 1;
  s.validate();
  return s;
}

ManifoldSpec
ManifoldSpec::sphere(double radius, Index ambient_dim)
{
  ManifoldSpec s;
  s.kind = ManifoldKind::Sphere;
  s.radius = radius;
  s.ambient_dim = ambient_dim;
  s.intrinsic_dim = ambient_dim - 1;
  s.validate();
  return s;
}

ManifoldSpec
ManifoldSpec::torus(double major, double minor)
{
  ManifoldSpec s;
  s.kind = ManifoldKind::Torus;
  s.major = major;
  s.minor = minor;
  s.ambient_dim = 3;
  s.intrinsic_dim = 2;
  s.validate();
  return s;
}

ManifoldSpec
ManifoldSpec::affine(const Matrix& basis, const Vector& offset, double extent)
{
  if (basis.rows() != offset.size()) {
    throw DimensionError("affine basis and offset differ in dimension");
  }
  ManifoldSpec s;
  s.kind = ManifoldKind::Affine;
  s.ambient_dim = basis.rows();
  s.intrinsic_dim = basis.cols();
  Eigen::HouseholderQR<Matrix> qr(basis);
  s.basis = qr.householderQ() * Matrix::Identity(basis.rows(), basis.cols());
  s.offset = offset;
  s.extent = extent;
  s.validate();
  return s;
}

double
ManifoldSpec::reach() const
{
  switch (kind) {
    case ManifoldKind::Circle:
    case ManifoldKind::Sphere:
      return radius;
    case ManifoldKind::Torus:
      return minor;
    case ManifoldKind::Affine:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

void
ManifoldSpec::validate() const
{
  switch (kind) {
    case ManifoldKind::Circle:
      if (ambient_dim != 2 || intrinsic_dim != 1) {
        throw InvalidInput("circle lives in R^2 with d = 1");
      }
      [[fallthrough]];
    case ManifoldKind::Sphere:
      if (!(radius > 0.0)) {
        throw InvalidInput("radius must be positive");
      }
      if (ambient_dim < 2 || intrinsic_dim != ambient_dim - 1) {
        throw InvalidInput("sphere needs D >= 2 and d = D - 1");
      }
      break;
    case ManifoldKind::Torus:
      if (!(minor > 0.0 && major > minor)) {
        throw InvalidInput("torus needs major > minor > 0");
      }
      if (ambient_dim != 3 || intrinsic_dim != 2) {
        throw InvalidInput("torus lives in R^3 with d = 2");
      }
      break;
    case ManifoldKind::Affine:
      if (intrinsic_dim < 1 || intrinsic_dim >= ambient_dim) {
        throw InvalidInput("affine subspace needs 1 <= d < D");
      }
      if (!(extent > 0.0)) {
        throw InvalidInput("affine extent must be positive");
      }
      if (!basis.allFinite() || !offset.allFinite()) {
        throw InvalidInput("affine basis and offset must be finite");
      }
      break;
  }
}

namespace {

void
unit_gaussian_direction(Philox& rng, Eigen::Ref<Vector> out)
{
  double norm_sq = 0.0;
  while (!(norm_sq > 0.0)) {
    for (Index k = 0; k < out.size(); ++k) {
      out[k] = rng.normal();
    }
    norm_sq = out.squaredNorm();
  }
  out /= std::sqrt(norm_sq);
}

void
sample_one(const ManifoldSpec& spec, Philox& rng, Eigen::Ref<Vector> out)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (spec.kind) {
    case ManifoldKind::Circle: {
      const double u = two_pi * rng.uniform();
      out[0] = spec.radius * std::cos(u);
      out[1] = spec.radius * std::sin(u);
      break;
    }
    case ManifoldKind::Sphere:
      unit_gaussian_direction(rng, out);
      out *= spec.radius;
      break;
    case ManifoldKind::Torus: {
      const double u = two_pi * rng.uniform();
      double v = 0.0;
      // Area element is proportional to (R + a cos v).
      while (true) {
        v = two_pi * rng.uniform();
        const double accept = (spec.major + spec.minor * std::cos(v)) / (spec.major + spec.minor);
        if (rng.uniform() < accept) {
          break;
        }
      }
      const double ring = spec.major + spec.minor * std::cos(v);
      out[0] = ring * std::cos(u);
      out[1] = ring * std::sin(u);
      out[2] = spec.minor * std::sin(v);
      break;
    }
    case ManifoldKind::Affine: {
      Vector c(spec.intrinsic_dim);
      for (Index k = 0; k < c.size(); ++k) {
        c[k] = spec.extent * (2.0 * rng.uniform() - 1.0);
      }
      out = spec.offset + spec.basis * c;
      break;
    }
  }
}

} // namespace

PointCloud
sample_manifold(const ManifoldSpec& spec, Index n, std::uint64_t seed)
{
  spec.validate();
  if (n < 1) {
    throw InvalidInput("sample count must be >= 1");
  }
  Philox rng(seed);
  Matrix coords(spec.ambient_dim, n);
  for (Index j = 0; j < n; ++j) {
    sample_one(spec, rng, coords.col(j));
  }
  return PointCloud(std::move(coords));
}

PointCloud
add_gaussian_noise(const PointCloud& cloud, const NoiseSpec& noise)
{
  if (!(noise.sigma > 0.0) || !std::isfinite(noise.sigma)) {
    throw InvalidInput("noise sigma must be positive and finite");
  }
  Philox rng(noise.seed);
  Matrix coords = cloud.coords();
  for (Index j = 0; j < coords.cols(); ++j) {
    for (Index k = 0; k < coords.rows(); ++k) {
      coords(k, j) += noise.sigma * rng.normal();
    }
  }
  return PointCloud(std::move(coords));
}

PointCloud
sample_tube(const ManifoldSpec& spec, Index n0, double tube_radius, std::uint64_t seed)
{
  spec.validate();
  if (n0 < 1) {
    throw InvalidInput("initial point count must be >= 1");
  }
  if (!(tube_radius >= 0.0)) {
    throw InvalidInput("tube radius must be nonnegative");
  }
  if (!(tube_radius < spec.reach())) {
    throw TubeExceedsReach("tube radius " + std::to_string(tube_radius) +
                           " is not below the reach " + std::to_string(spec.reach()));
  }
  Philox rng(seed);
  const Index dim = spec.ambient_dim;
  Matrix coords(dim, n0);
  Vector dir(dim);
  for (Index j = 0; j < n0; ++j) {
    sample_one(spec, rng, coords.col(j));
    if (tube_radius > 0.0) {
      unit_gaussian_direction(rng, dir);
      const double len = tube_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
      coords.col(j) += len * dir;
    }
  }
  return PointCloud(std::move(coords));
}

double
analytic_distance(const ManifoldSpec& spec, VectorRef x)
{
  if (x.size() != spec.ambient_dim) {
    throw DimensionError("point and manifold differ in dimension");
  }
  switch (spec.kind) {
    case ManifoldKind::Circle:
    case ManifoldKind::Sphere:
      return std::abs(x.norm() - spec.radius);
    case ManifoldKind::Torus: {
      const double ring = std::hypot(x[0], x[1]) - spec.major;
      return std::abs(std::hypot(ring, x[2]) - spec.minor);
    }
    case ManifoldKind::Affine: {
      const Vector y = x - spec.offset;
      return (y - spec.basis * (spec.basis.transpose() * y)).norm();
    }
  }
  return 0.0;
}

} // namespace manifit

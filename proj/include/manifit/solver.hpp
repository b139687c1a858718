#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "manifit/fitters.hpp"

namespace manifit {

enum class GradientMode
{
  /// Direction -2 f(x): the Jacobian of f is close to Pi_x and f lies in
  /// range(Pi_x), so this approximates the negative gradient of |f|^2.
  ApproxResidual,
  /// Central-difference gradient of |f|^2 (2D + 1 field evaluations).
  Numeric
};

enum class ProjectionStatus
{
  Converged,
  MaxIters,
  Stalled,
  Escaped,
  Unprocessable
};

std::string_view
to_string(ProjectionStatus s);

std::string_view
to_string(GradientMode m);

struct SolverOptions
{
  double tolerance = 1e-12;  // on |f|^2 (or on |Pi_hi grad f|^2 for scgd)
  int max_iters = 500;
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double min_step = 1e-10;
  double max_displacement = 2.0; // in units of r
  GradientMode gradient_mode = GradientMode::ApproxResidual;
  /// Sufficient-decrease constant of the Armijo test. With the -2f direction a
  /// unit step reflects x across the zero set, so a small constant would accept
  /// that near-reflection and zigzag.
  double armijo = 0.1;
  /// Numeric-gradient step in units of r.
  double gradient_step = 1e-5;

  /// Defaults with tolerance scaled to the field's natural r^2 magnitude.
  static SolverOptions for_radius(double r);

  void validate() const;
};

struct TraceEntry
{
  double objective;
  double step;
  bool accepted;
};

/// Every line-search trial, in order. Accepted objectives strictly decrease.
struct ProjectionTrace
{
  double initial_objective = 0.0;
  std::vector<TraceEntry> iterates;
  ProjectionStatus status = ProjectionStatus::Unprocessable;

  Index accepted_steps() const;
  double final_objective() const;
  /// True iff the accepted objectives, starting from the initial one, are
  /// strictly decreasing.
  bool monotone() const;
};

struct Projection
{
  Vector point;
  ProjectionTrace trace;
};

using VectorField = std::function<Vector(const Vector&)>;

/// Descent on |f|^2 with Armijo backtracking. `scale` is the bandwidth r used
/// by the displacement guard and the numeric-gradient step. EmptyNeighborhood
/// at p yields Unprocessable. A trial point where f is undefined counts as a
/// rejected trial; a numeric-gradient stencil that leaves the support at an
/// accepted iterate yields Escaped with that iterate.
Projection
project_point(VectorRef p, const VectorField& f, double scale, const SolverOptions& opts);

/// Projection onto the zero set of an Ours or Cf18 field.
Projection
project_point(VectorRef p, const FittedField& field, const SolverOptions& opts);

/// Subspace-constrained descent x <- x - eta Pi_hi(H) grad f on a scalar field,
/// backtracking on f itself; converged once |Pi_hi(H) grad f| <= sqrt(tolerance).
Projection
scgd_project(VectorRef p,
             const ScalarField& f,
             Index d,
             double h,
             double scale,
             const SolverOptions& opts);

/// Ridge projection for a Km17 field.
Projection
scgd_project(VectorRef p, const FittedField& field, const SolverOptions& opts);

/// Central-difference gradient of |f|^2 with step h.
Vector
numeric_objective_gradient(const VectorField& f, VectorRef x, double h);

struct BatchProjection
{
  PointCloud points;
  std::vector<ProjectionTrace> traces;
};

/// Element-wise projection (scgd for Km17). Output order matches input;
/// unprocessable points are carried through unchanged.
BatchProjection
project_batch(const PointCloud& queries,
              const FittedField& field,
              const SolverOptions& opts,
              unsigned threads = 1);

} // namespace manifit

#include "manifit/solver.hpp"

#include <cmath>
#include <limits>

#include "manifit/errors.hpp"
#include "manifit/parallel.hpp"

namespace manifit {

namespace {

// Objective recorded for a trial point where the field is undefined.
constexpr double kUndefined = std::numeric_limits<double>::infinity();

} // namespace

std::string_view
to_string(ProjectionStatus s)
{
  switch (s) {
    case ProjectionStatus::Converged:
      return "converged";
    case ProjectionStatus::MaxIters:
      return "max_iters";
    case ProjectionStatus::Stalled:
      return "stalled";
    case ProjectionStatus::Escaped:
      return "escaped";
    case ProjectionStatus::Unprocessable:
      return "unprocessable";
  }
  return "unknown";
}

std::string_view
to_string(GradientMode m)
{
  return m == GradientMode::ApproxResidual ? "approx_residual" : "numeric";
}

SolverOptions
SolverOptions::for_radius(double r)
{
  SolverOptions opts;
  opts.tolerance = 1e-12 * r * r;
  return opts;
}

void
SolverOptions::validate() const
{
  if (!(tolerance > 0.0)) {
    throw InvalidInput("solver tolerance must be positive");
  }
  if (max_iters < 1) {
    throw InvalidInput("solver max_iters must be >= 1");
  }
  if (!(initial_step > 0.0)) {
    throw InvalidInput("solver initial_step must be positive");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw InvalidInput("solver backtrack_factor must lie in (0, 1)");
  }
  if (!(min_step > 0.0)) {
    throw InvalidInput("solver min_step must be positive");
  }
  if (!(max_displacement > 0.0)) {
    throw InvalidInput("solver max_displacement must be positive");
  }
  if (!(armijo >= 0.0 && armijo < 1.0)) {
    throw InvalidInput("solver armijo constant must lie in [0, 1)");
  }
  if (!(gradient_step > 0.0)) {
    throw InvalidInput("solver gradient_step must be positive");
  }
}

Index
ProjectionTrace::accepted_steps() const
{
  Index n = 0;
  for (const auto& e : iterates) {
    n += e.accepted ? 1 : 0;
  }
  return n;
}

double
ProjectionTrace::final_objective() const
{
  double obj = initial_objective;
  for (const auto& e : iterates) {
    if (e.accepted) {
      obj = e.objective;
    }
  }
  return obj;
}

bool
ProjectionTrace::monotone() const
{
  double prev = initial_objective;
  for (const auto& e : iterates) {
    if (e.accepted) {
      if (!(e.objective < prev)) {
        return false;
      }
      prev = e.objective;
    }
  }
  return true;
}

Vector
numeric_objective_gradient(const VectorField& f, VectorRef x, double h)
{
  Vector g(x.size());
  Vector y = x;
  for (Index k = 0; k < x.size(); ++k) {
    y[k] = x[k] + h;
    const double up = f(y).squaredNorm();
    y[k] = x[k] - h;
    const double down = f(y).squaredNorm();
    y[k] = x[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

Projection
project_point(VectorRef p, const VectorField& f, double scale, const SolverOptions& opts)
{
  opts.validate();
  Projection out{ p, {} };
  ProjectionTrace& trace = out.trace;

  Vector fx;
  try {
    fx = f(out.point);
  } catch (const EmptyNeighborhood&) {
    trace.status = ProjectionStatus::Unprocessable;
    return out;
  }
  double obj = fx.squaredNorm();
  trace.initial_objective = obj;
  if (obj <= opts.tolerance) {
    trace.status = ProjectionStatus::Converged;
    return out;
  }

  const double guard = opts.max_displacement * scale;
  Vector& x = out.point;
  Vector dir;
  for (int it = 0; it < opts.max_iters; ++it) {
    double slope;
    if (opts.gradient_mode == GradientMode::ApproxResidual) {
      dir = -2.0 * fx;
      slope = -4.0 * obj;
    } else {
      try {
        dir = -numeric_objective_gradient(f, x, opts.gradient_step * scale);
      } catch (const EmptyNeighborhood&) {
        trace.status = ProjectionStatus::Escaped;
        return out;
      }
      slope = -dir.squaredNorm();
    }
    if (!(slope < 0.0)) {
      trace.status = ProjectionStatus::Stalled;
      return out;
    }

    double step = opts.initial_step;
    while (true) {
      const Vector cand = x + step * dir;
      Vector fc;
      double oc = kUndefined;
      try {
        fc = f(cand);
        oc = fc.squaredNorm();
      } catch (const EmptyNeighborhood&) {
        // outside the field's support: reject and backtrack
      }
      if (oc < obj && oc <= obj + opts.armijo * step * slope) {
        if ((cand - p).norm() > guard) {
          trace.iterates.push_back({ oc, step, false });
          trace.status = ProjectionStatus::Escaped;
          return out;
        }
        trace.iterates.push_back({ oc, step, true });
        x = cand;
        fx = std::move(fc);
        obj = oc;
        break;
      }
      trace.iterates.push_back({ oc, step, false });
      step *= opts.backtrack_factor;
      if (step < opts.min_step) {
        trace.status = ProjectionStatus::Stalled;
        return out;
      }
    }
    if (obj <= opts.tolerance) {
      trace.status = ProjectionStatus::Converged;
      return out;
    }
  }
  trace.status = ProjectionStatus::MaxIters;
  return out;
}

Projection
project_point(VectorRef p, const FittedField& field, const SolverOptions& opts)
{
  if (field.kind() == Method::Km17) {
    throw InvalidInput("km17 fields are projected with scgd_project");
  }
  check_query(p, field.ambient_dim());
  auto f = [&field](const Vector& x) { return evaluate_field(x, field).value; };
  return project_point(p, f, field.radius(), opts);
}

Projection
scgd_project(VectorRef p,
             const ScalarField& f,
             Index d,
             double h,
             double scale,
             const SolverOptions& opts)
{
  opts.validate();
  Projection out{ p, {} };
  ProjectionTrace& trace = out.trace;
  Vector& x = out.point;

  RidgeDirection rd;
  double fx;
  try {
    rd = ridge_direction(f, x, h, d);
    fx = f(x);
  } catch (const StencilEscape&) {
    trace.status = ProjectionStatus::Unprocessable;
    return out;
  } catch (const AllWeightsZero&) {
    trace.status = ProjectionStatus::Unprocessable;
    return out;
  } catch (const EmptyNeighborhood&) {
    trace.status = ProjectionStatus::Unprocessable;
    return out;
  }
  trace.initial_objective = fx;
  if (rd.direction.squaredNorm() <= opts.tolerance) {
    trace.status = ProjectionStatus::Converged;
    return out;
  }

  const double guard = opts.max_displacement * scale;
  for (int it = 0; it < opts.max_iters; ++it) {
    const Vector dir = -rd.direction;
    const double slope = rd.gradient.dot(dir);
    if (!(slope < 0.0)) {
      trace.status = ProjectionStatus::Stalled;
      return out;
    }

    double step = opts.initial_step;
    while (true) {
      const Vector cand = x + step * dir;
      double fc = kUndefined;
      try {
        fc = f(cand);
      } catch (const AllWeightsZero&) {
      } catch (const EmptyNeighborhood&) {
      }
      if (fc < fx && fc <= fx + opts.armijo * step * slope) {
        if ((cand - p).norm() > guard) {
          trace.iterates.push_back({ fc, step, false });
          trace.status = ProjectionStatus::Escaped;
          return out;
        }
        bool defined = true;
        RidgeDirection next;
        try {
          next = ridge_direction(f, cand, h, d);
        } catch (const StencilEscape&) {
          defined = false;
        }
        if (defined) {
          trace.iterates.push_back({ fc, step, true });
          x = cand;
          fx = fc;
          rd = std::move(next);
          break;
        }
      }
      trace.iterates.push_back({ fc, step, false });
      step *= opts.backtrack_factor;
      if (step < opts.min_step) {
        trace.status = ProjectionStatus::Stalled;
        return out;
      }
    }
    if (rd.direction.squaredNorm() <= opts.tolerance) {
      trace.status = ProjectionStatus::Converged;
      return out;
    }
  }
  trace.status = ProjectionStatus::MaxIters;
  return out;
}

Projection
scgd_project(VectorRef p, const FittedField& field, const SolverOptions& opts)
{
  if (field.kind() != Method::Km17) {
    throw InvalidInput("scgd_project needs a km17 field");
  }
  check_query(p, field.ambient_dim());
  auto f = [&field](const Vector& x) { return asdf_km17(x, field); };
  return scgd_project(p, f, field.intrinsic_dim(), field.fd_step(), field.radius(), opts);
}

BatchProjection
project_batch(const PointCloud& queries,
              const FittedField& field,
              const SolverOptions& opts,
              unsigned threads)
{
  opts.validate();
  if (!queries.empty() && queries.dim() != field.ambient_dim()) {
    throw DimensionError("query cloud and field differ in dimension");
  }
  Matrix out = queries.coords();
  std::vector<ProjectionTrace> traces(static_cast<std::size_t>(queries.size()));
  parallel_for(queries.size(), threads, [&](Index i) {
    const Vector p = queries.point(i);
    Projection proj = field.kind() == Method::Km17 ? scgd_project(p, field, opts)
                                                   : project_point(p, field, opts);
    out.col(i) = proj.point;
    traces[static_cast<std::size_t>(i)] = std::move(proj.trace);
  });
  BatchProjection result;
  result.points = queries.empty() ? PointCloud::empty(std::max<Index>(queries.dim(), 1))
                                  : PointCloud(std::move(out));
  result.traces = std::move(traces);
  return result;
}

} // namespace manifit

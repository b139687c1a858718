#include "manifit/fitters.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "manifit/errors.hpp"

namespace manifit {

std::string_view
to_string(Method m)
{
  switch (m) {
    case Method::Ours:
      return "ours";
    case Method::Cf18:
      return "cf18";
    case Method::Km17:
      return "km17";
  }
  return "unknown";
}

std::optional<Method>
parse_method(std::string_view name)
{
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (lower == "ours") {
    return Method::Ours;
  }
  if (lower == "cf18") {
    return Method::Cf18;
  }
  if (lower == "km17") {
    return Method::Km17;
  }
  return std::nullopt;
}

double
bump(double t)
{
  if (t <= 0.25) {
    return 1.0;
  }
  if (t >= 1.0) {
    return 0.0;
  }
  const double s = (t - 0.25) / 0.75;
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

std::vector<Index>
epsilon_net(const PointCloud& cloud, double eps)
{
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("net radius must be positive and finite");
  }
  const double eps_sq = eps * eps;
  std::vector<Index> kept;
  for (Index i = 0; i < cloud.size(); ++i) {
    bool covered = false;
    for (Index k : kept) {
      if (squared_distance(cloud.data(i), cloud.data(k), cloud.dim()) <= eps_sq) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      kept.push_back(i);
    }
  }
  return kept;
}

struct FittedField::State
{
  Method kind;
  double r;
  int beta;
  Index d;
  double fd_step;
  double net_radius;
  PointCloud cloud;
  std::vector<Index> site_indices;
  std::shared_ptr<const NeighborIndex> data_index;
  std::shared_ptr<const NeighborIndex> site_index;
  std::unique_ptr<ProjectorCache> projectors;
};

FittedField::FittedField(std::shared_ptr<const State> state)
  : state_(std::move(state))
{}

FittedField
FittedField::fit(Method kind, PointCloud cloud, double r, Index d, const Options& opts)
{
  if (cloud.empty()) {
    throw InvalidInput("cannot fit a field to an empty cloud");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidInput("bandwidth r must be positive and finite");
  }
  if (d < 1 || d >= cloud.dim()) {
    throw InvalidInput("intrinsic dimension must satisfy 1 <= d < D");
  }

  auto state = std::make_shared<State>();
  state->kind = kind;
  state->r = r;
  state->d = d;
  state->beta = 0;
  state->fd_step = opts.fd_step.value_or(1e-4 * r);
  state->net_radius = 0.0;

  switch (kind) {
    case Method::Ours:
      if (!opts.beta) {
        throw InvalidInput("the plain estimator needs an explicit beta");
      }
      state->beta = *opts.beta;
      break;
    case Method::Cf18:
      state->beta = opts.beta.value_or(static_cast<int>(d) + 2);
      break;
    case Method::Km17:
      if (!(state->fd_step > 0.0)) {
        throw InvalidInput("finite-difference step must be positive");
      }
      break;
  }
  if (kind != Method::Km17 && state->beta < 2) {
    throw InvalidInput("weight exponent beta must be an integer >= 2");
  }

  state->data_index = std::make_shared<NeighborIndex>(cloud);
  if (kind == Method::Cf18) {
    if (!(opts.net_scale > 0.0)) {
      throw InvalidInput("net_scale must be positive");
    }
    state->net_radius = opts.net_scale * r * r / static_cast<double>(d);
    state->site_indices = epsilon_net(cloud, state->net_radius);
    state->site_index = std::make_shared<NeighborIndex>(cloud.subset(state->site_indices));
  } else {
    state->site_indices.resize(static_cast<std::size_t>(cloud.size()));
    for (Index i = 0; i < cloud.size(); ++i) {
      state->site_indices[static_cast<std::size_t>(i)] = i;
    }
    state->site_index = state->data_index;
  }
  state->projectors = std::make_unique<ProjectorCache>(
    state->site_index->cloud(), state->data_index, r, d);
  state->projectors->populate(opts.threads);
  state->cloud = std::move(cloud);
  return FittedField(std::move(state));
}

FittedField
FittedField::ours(PointCloud cloud, double r, int beta, Index d)
{
  Options opts;
  opts.beta = beta;
  return fit(Method::Ours, std::move(cloud), r, d, opts);
}

FittedField
FittedField::cf18(PointCloud cloud, double r, Index d, std::optional<int> beta)
{
  Options opts;
  opts.beta = beta;
  return fit(Method::Cf18, std::move(cloud), r, d, opts);
}

FittedField
FittedField::km17(PointCloud cloud, double r, Index d)
{
  return fit(Method::Km17, std::move(cloud), r, d, Options{});
}

Method
FittedField::kind() const
{
  return state_->kind;
}

double
FittedField::radius() const
{
  return state_->r;
}

int
FittedField::beta() const
{
  return state_->beta;
}

Index
FittedField::intrinsic_dim() const
{
  return state_->d;
}

Index
FittedField::ambient_dim() const
{
  return state_->cloud.dim();
}

double
FittedField::fd_step() const
{
  return state_->fd_step;
}

double
FittedField::net_radius() const
{
  return state_->net_radius;
}

const PointCloud&
FittedField::cloud() const
{
  return state_->cloud;
}

const std::vector<Index>&
FittedField::site_indices() const
{
  return state_->site_indices;
}

const PointCloud&
FittedField::sites() const
{
  return state_->site_index->cloud();
}

const ProjectorCache&
FittedField::projectors() const
{
  return *state_->projectors;
}

NeighborSet
FittedField::site_neighbors(VectorRef x) const
{
  return state_->site_index->query(x, state_->r);
}

FieldEvaluation
evaluate_field(VectorRef x, const FittedField& field)
{
  if (field.kind() == Method::Km17) {
    throw InvalidInput("km17 defines a scalar asdf, not a vector field");
  }
  FieldEvaluation ev;
  ev.neighbors = field.site_neighbors(x);
  ev.weights = compute_weights(ev.neighbors, field.beta());
  ev.projector = averaged_normal_projector(ev.neighbors, ev.weights, field.projectors());

  const PointCloud& sites = field.sites();
  const Index dim = sites.dim();
  Vector acc = Vector::Zero(dim);
  if (field.kind() == Method::Ours) {
    Vector mean = Vector::Zero(dim);
    for (std::size_t k = 0; k < ev.neighbors.size(); ++k) {
      mean += ev.weights.normalized[k] * sites.point(ev.neighbors.indices[k]);
    }
    acc = x - mean;
  } else {
    for (std::size_t k = 0; k < ev.neighbors.size(); ++k) {
      const Index i = ev.neighbors.indices[k];
      acc += ev.weights.normalized[k] *
             (field.projectors().at(i).matrix * (x - sites.point(i)));
    }
  }
  ev.value = ev.projector.matrix * acc;
  return ev;
}

Vector
field_ours(VectorRef x, const FittedField& field)
{
  if (field.kind() != Method::Ours) {
    throw InvalidInput("field_ours needs a field fitted with the plain estimator");
  }
  return evaluate_field(x, field).value;
}

Vector
field_cf18(VectorRef x, const FittedField& field)
{
  if (field.kind() != Method::Cf18) {
    throw InvalidInput("field_cf18 needs a cf18 field");
  }
  return evaluate_field(x, field).value;
}

double
asdf_km17(VectorRef x, const FittedField& field)
{
  if (field.kind() != Method::Km17) {
    throw InvalidInput("asdf_km17 needs a km17 field");
  }
  const NeighborSet nbrs = field.site_neighbors(x);
  const PointCloud& sites = field.sites();
  const double two_r = 2.0 * field.radius();
  double total = 0.0;
  double weighted = 0.0;
  Vector diff(sites.dim());
  for (Index i : nbrs.indices) {
    diff = x - sites.point(i);
    const double fi = (field.projectors().at(i).matrix * diff).squaredNorm();
    const double w = bump(std::sqrt(fi) / two_r);
    total += w;
    weighted += w * fi;
  }
  if (!(total > 0.0)) {
    throw AllWeightsZero("no local tangent plane carries positive weight");
  }
  return weighted / total;
}

RidgeDirection
ridge_direction(const ScalarField& f, VectorRef x, double h, Index d)
{
  const Index dim = x.size();
  if (d < 1 || d >= dim) {
    throw InvalidInput("intrinsic dimension must satisfy 1 <= d < D");
  }
  if (!(h > 0.0)) {
    throw InvalidInput("finite-difference step must be positive");
  }
  auto eval = [&](const Vector& y) {
    try {
      return f(y);
    } catch (const AllWeightsZero& e) {
      throw StencilEscape(e.what());
    } catch (const EmptyNeighborhood& e) {
      throw StencilEscape(e.what());
    }
  };

  const Vector x0 = x;
  const double f0 = eval(x0);
  Vector plus(dim);
  Vector minus(dim);
  Vector y = x0;
  for (Index k = 0; k < dim; ++k) {
    y[k] = x0[k] + h;
    plus[k] = eval(y);
    y[k] = x0[k] - h;
    minus[k] = eval(y);
    y[k] = x0[k];
  }

  RidgeDirection out;
  out.gradient = (plus - minus) / (2.0 * h);
  out.hessian.resize(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    out.hessian(k, k) = (plus[k] - 2.0 * f0 + minus[k]) / (h * h);
    for (Index l = k + 1; l < dim; ++l) {
      y[k] = x0[k] + h;
      y[l] = x0[l] + h;
      const double pp = eval(y);
      y[l] = x0[l] - h;
      const double pm = eval(y);
      y[k] = x0[k] - h;
      const double mm = eval(y);
      y[l] = x0[l] + h;
      const double mp = eval(y);
      y[k] = x0[k];
      y[l] = x0[l];
      const double h_kl = (pp - pm - mp + mm) / (4.0 * h * h);
      out.hessian(k, l) = h_kl;
      out.hessian(l, k) = h_kl;
    }
  }
  const NormalProjector hi = top_eigenspace_projector(out.hessian, dim - d);
  out.direction = hi.matrix * out.gradient;
  return out;
}

Vector
km17_ridge_direction(VectorRef x, const FittedField& field, double h)
{
  if (field.kind() != Method::Km17) {
    throw InvalidInput("km17_ridge_direction needs a km17 field");
  }
  auto f = [&field](const Vector& y) { return asdf_km17(y, field); };
  return ridge_direction(f, x, h, field.intrinsic_dim()).direction;
}

} // namespace manifit

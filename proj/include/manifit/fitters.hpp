#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "manifit/neighbors.hpp"
#include "manifit/tangent.hpp"
#include "manifit/weights.hpp"

namespace manifit {

enum class Method
{
  Ours,
  Cf18,
  Km17
};

std::string_view
to_string(Method m);

/// Accepts "ours", "cf18", "km17" (case-insensitive).
std::optional<Method>
parse_method(std::string_view name);

/// C^2 bump: 1 for t <= 1/4, 0 for t >= 1, quintic smoothstep in between.
double
bump(double t);

/// Greedy covering in index order: a point is kept iff it lies farther than
/// eps from every previously kept point.
std::vector<Index>
epsilon_net(const PointCloud& cloud, double eps);

/// Immutable bundle defining one of the three fields.
///
/// * Ours: f(x) = Pi_x (x - sum_i alpha_i(x) x_i), Pi_x = Pi_hi(sum_i alpha_i Pi_{x_i}).
/// * Cf18: f(x) = Pi_x sum_i alpha_i(x) Pi_{p_i} (x - p_i) over a greedy net p_i,
///   with Pi_x averaged over the net projectors.
/// * Km17: scalar asdf sum_i alpha_i(x) |Pi_{x_i}(x - x_i)|^2 with bump weights;
///   the output is its ridge.
///
/// Copies share the same underlying state.
class FittedField
{
public:
  struct Options
  {
    /// Weight exponent. Required for Ours; Cf18 defaults to d + 2.
    std::optional<int> beta;
    /// Cf18 net radius is net_scale * r^2 / d.
    double net_scale = 1.0;
    /// Km17 finite-difference step; defaults to 1e-4 * r.
    std::optional<double> fd_step;
    /// Workers used to fill the projector cache.
    unsigned threads = 1;
  };

  static FittedField fit(Method kind, PointCloud cloud, double r, Index d, const Options& opts);
  static FittedField ours(PointCloud cloud, double r, int beta, Index d);
  static FittedField cf18(PointCloud cloud, double r, Index d, std::optional<int> beta = {});
  static FittedField km17(PointCloud cloud, double r, Index d);

  Method kind() const;
  double radius() const;
  int beta() const; // 0 for Km17
  Index intrinsic_dim() const;
  Index ambient_dim() const;
  double fd_step() const;
  double net_radius() const; // 0 unless Cf18

  const PointCloud& cloud() const;
  /// Indices into cloud() of the net (Cf18) or of every sample.
  const std::vector<Index>& site_indices() const;
  const PointCloud& sites() const;
  const ProjectorCache& projectors() const;

  /// Sites within the closed ball of radius r around x.
  NeighborSet site_neighbors(VectorRef x) const;

private:
  struct State;
  explicit FittedField(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

/// Everything computed while evaluating a vector field at one point.
struct FieldEvaluation
{
  Vector value;
  NormalProjector projector; // Pi_x
  NeighborSet neighbors;
  WeightProfile weights;
};

/// Evaluates the Ours or Cf18 field. Throws EmptyNeighborhood.
FieldEvaluation
evaluate_field(VectorRef x, const FittedField& field);

Vector
field_ours(VectorRef x, const FittedField& field);

Vector
field_cf18(VectorRef x, const FittedField& field);

/// Km17 approximate square-distance function. Throws AllWeightsZero.
double
asdf_km17(VectorRef x, const FittedField& field);

using ScalarField = std::function<double(const Vector&)>;

struct RidgeDirection
{
  Vector direction; // Pi_hi(H) grad f
  Vector gradient;
  Matrix hessian;
};

/// Central-difference gradient and Hessian of f at x, and the projection of
/// the gradient onto the top D - d eigenvectors of the Hessian. Any
/// AllWeightsZero or EmptyNeighborhood raised inside the stencil is reported
/// as StencilEscape.
RidgeDirection
ridge_direction(const ScalarField& f, VectorRef x, double h, Index d);

Vector
km17_ridge_direction(VectorRef x, const FittedField& field, double h);

} // namespace manifit

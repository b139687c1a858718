#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace manifit {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Squared Euclidean distance with a fixed left-to-right summation order.
///
/// Every distance in the library goes through this routine so that the
/// exhaustive and tree-accelerated searches produce bit-identical values.
inline double
squared_distance(const double* a, const double* b, Index dim)
{
  double s = 0.0;
  for (Index k = 0; k < dim; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

/// An ordered set of points in R^D, stored column-wise (D x N).
///
/// Coordinates are validated to be finite on construction. A cloud may be
/// empty (N = 0) so that batch APIs can pass through empty inputs; operations
/// that need samples check for that themselves.
class PointCloud
{
public:
  PointCloud() = default;

  /// Takes a D x N matrix whose columns are the points.
  explicit PointCloud(Matrix coords);

  /// One inner vector per point.
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  static PointCloud empty(Index dim);

  Index dim() const { return coords_.rows(); }
  Index size() const { return coords_.cols(); }
  bool empty() const { return coords_.cols() == 0; }

  auto point(Index i) const { return coords_.col(i); }
  const double* data(Index i) const { return coords_.data() + i * coords_.rows(); }
  const Matrix& coords() const { return coords_; }

  PointCloud subset(std::span<const Index> indices) const;

  friend bool operator==(const PointCloud& a, const PointCloud& b)
  {
    return a.coords_.rows() == b.coords_.rows() &&
           a.coords_.cols() == b.coords_.cols() && a.coords_ == b.coords_;
  }

private:
  Matrix coords_;
};

/// Throws DimensionError / InvalidInput if x cannot be used as a query
/// against a cloud of dimension dim.
void
check_query(VectorRef x, Index dim);

} // namespace manifit

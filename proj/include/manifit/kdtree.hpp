#pragma once

#include <utility>
#include <vector>

#include "manifit/point_cloud.hpp"

namespace manifit {

/// Exact kd-tree over a copy of a point cloud.
///
/// Distances are produced by squared_distance() on the original coordinates,
/// and subtrees are pruned only when they are provably strictly farther than
/// the current bound, so results are bit-identical to an exhaustive scan.
class KdTree
{
public:
  explicit KdTree(const PointCloud& cloud, Index leaf_size = 8);

  Index dim() const { return dim_; }
  Index size() const { return static_cast<Index>(order_.size()); }

  /// Appends (index, squared distance) for every point with
  /// squared distance <= radius_sq. Output order is unspecified.
  void radius_search(const double* x,
                     double radius_sq,
                     std::vector<std::pair<Index, double>>& out) const;

  /// Nearest point as (index, squared distance). Ties go to the lowest index.
  std::pair<Index, double> nearest(const double* x) const;

private:
  struct Node
  {
    Index begin;
    Index end;
    Index left = -1;
    Index right = -1;
    Index split_dim = 0;
    double split = 0.0;
  };

  Index build(Index begin, Index end, Index leaf_size);
  void radius_recurse(Index node,
                      const double* x,
                      double radius_sq,
                      std::vector<std::pair<Index, double>>& out) const;
  void nearest_recurse(Index node,
                       const double* x,
                       Index& best,
                       double& best_sq) const;

  const double* coord(Index slot) const { return coords_.data() + slot * dim_; }

  Index dim_ = 0;
  std::vector<double> coords_; // points in tree order
  std::vector<Index> order_;   // tree slot -> original index
  std::vector<Node> nodes_;
};

} // namespace manifit

#pragma once

#include <memory>
#include <vector>

#include "manifit/kdtree.hpp"
#include "manifit/point_cloud.hpp"

namespace manifit {

/// Samples inside the closed ball of radius r around a center.
struct NeighborSet
{
  Vector center;
  double radius = 0.0;
  std::vector<Index> indices;    // strictly increasing
  std::vector<double> distances; // matching indices, each <= radius

  bool empty() const { return indices.empty(); }
  std::size_t size() const { return indices.size(); }
};

/// Reference implementation: exhaustive O(ND) scan.
NeighborSet
radius_neighbors(VectorRef x, double r, const PointCloud& cloud);

/// Radius queries over a fixed cloud. Small clouds use the exhaustive scan,
/// larger ones a kd-tree; both return identical NeighborSets.
class NeighborIndex
{
public:
  enum class Backend
  {
    Auto,
    Exhaustive,
    KdTree
  };

  explicit NeighborIndex(PointCloud cloud, Backend backend = Backend::Auto);

  NeighborSet query(VectorRef x, double r) const;

  const PointCloud& cloud() const { return cloud_; }
  Backend backend() const { return backend_; }

private:
  PointCloud cloud_;
  Backend backend_;
  std::unique_ptr<KdTree> tree_;
};

} // namespace manifit

#include "manifit/neighbors.hpp"

#include <algorithm>
#include <cmath>

#include "manifit/errors.hpp"

namespace manifit {

namespace {

void
check_radius(double r)
{
  if (!std::isfinite(r) || r <= 0.0) {
    throw InvalidInput("neighborhood radius must be positive and finite");
  }
}

} // namespace

NeighborSet
radius_neighbors(VectorRef x, double r, const PointCloud& cloud)
{
  check_query(x, cloud.dim());
  check_radius(r);
  const Vector center = x;
  const double r_sq = r * r;
  NeighborSet out{ center, r, {}, {} };
  for (Index i = 0; i < cloud.size(); ++i) {
    const double sq = squared_distance(center.data(), cloud.data(i), cloud.dim());
    if (sq <= r_sq) {
      out.indices.push_back(i);
      out.distances.push_back(std::sqrt(sq));
    }
  }
  return out;
}

NeighborIndex::NeighborIndex(PointCloud cloud, Backend backend)
  : cloud_(std::move(cloud))
  , backend_(backend)
{
  if (backend_ == Backend::Auto) {
    backend_ = cloud_.size() > 64 ? Backend::KdTree : Backend::Exhaustive;
  }
  if (backend_ == Backend::KdTree) {
    tree_ = std::make_unique<KdTree>(cloud_);
  }
}

NeighborSet
NeighborIndex::query(VectorRef x, double r) const
{
  if (!tree_) {
    return radius_neighbors(x, r, cloud_);
  }
  check_query(x, cloud_.dim());
  check_radius(r);
  const Vector center = x;
  std::vector<std::pair<Index, double>> hits;
  tree_->radius_search(center.data(), r * r, hits);
  std::sort(hits.begin(), hits.end());
  NeighborSet out{ center, r, {}, {} };
  out.indices.reserve(hits.size());
  out.distances.reserve(hits.size());
  for (const auto& [i, sq] : hits) {
    out.indices.push_back(i);
    out.distances.push_back(std::sqrt(sq));
  }
  return out;
}

} // namespace manifit

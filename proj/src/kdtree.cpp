#include "manifit/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace manifit {

KdTree::KdTree(const PointCloud& cloud, Index leaf_size)
  : dim_(cloud.dim())
  , order_(static_cast<std::size_t>(cloud.size()))
{
  std::iota(order_.begin(), order_.end(), Index{ 0 });
  // The index permutation is built against the caller's coordinates, then the
  // coordinates are copied in tree order.
  coords_.assign(cloud.coords().data(),
                 cloud.coords().data() + cloud.size() * dim_);
  if (!order_.empty()) {
    nodes_.reserve(static_cast<std::size_t>(2 * cloud.size() / std::max<Index>(leaf_size, 1) + 1));
    build(0, size(), std::max<Index>(leaf_size, 1));
  }
  std::vector<double> reordered(coords_.size());
  for (std::size_t s = 0; s < order_.size(); ++s) {
    std::copy_n(coords_.data() + order_[s] * dim_,
                dim_,
                reordered.data() + static_cast<Index>(s) * dim_);
  }
  coords_ = std::move(reordered);
}

Index
KdTree::build(Index begin, Index end, Index leaf_size)
{
  const auto id = static_cast<Index>(nodes_.size());
  nodes_.push_back(Node{ begin, end });
  if (end - begin <= leaf_size) {
    return id;
  }

  // coords_ is still in original order here, so look up through order_.
  auto at = [&](Index slot, Index k) {
    return coords_[static_cast<std::size_t>(order_[static_cast<std::size_t>(slot)] * dim_ + k)];
  };

  Index best_dim = 0;
  double best_spread = -1.0;
  for (Index k = 0; k < dim_; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index s = begin; s < end; ++s) {
      lo = std::min(lo, at(s, k));
      hi = std::max(hi, at(s, k));
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = k;
    }
  }
  if (best_spread <= 0.0) {
    return id; // all points coincide
  }

  const Index mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](Index a, Index b) {
    return coords_[static_cast<std::size_t>(a * dim_ + best_dim)] <
           coords_[static_cast<std::size_t>(b * dim_ + best_dim)];
  });
  const double split = at(mid, best_dim);

  const Index left = build(begin, mid, leaf_size);
  const Index right = build(mid, end, leaf_size);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.split_dim = best_dim;
  node.split = split;
  return id;
}

void
KdTree::radius_search(const double* x,
                      double radius_sq,
                      std::vector<std::pair<Index, double>>& out) const
{
  if (!nodes_.empty()) {
    radius_recurse(0, x, radius_sq, out);
  }
}

void
KdTree::radius_recurse(Index id,
                       const double* x,
                       double radius_sq,
                       std::vector<std::pair<Index, double>>& out) const
{
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (Index s = node.begin; s < node.end; ++s) {
      const double sq = squared_distance(x, coord(s), dim_);
      if (sq <= radius_sq) {
        out.emplace_back(order_[static_cast<std::size_t>(s)], sq);
      }
    }
    return;
  }
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double diff = x[node.split_dim] - node.split;
  const double diff_sq = diff * diff;
  const Index near = diff < 0.0 ? node.left : node.right;
  const Index far = diff < 0.0 ? node.right : node.left;
  radius_recurse(near, x, radius_sq, out);
  if (diff_sq <= radius_sq) {
    radius_recurse(far, x, radius_sq, out);
  }
}

std::pair<Index, double>
KdTree::nearest(const double* x) const
{
  Index best = -1;
  double best_sq = std::numeric_limits<double>::infinity();
  if (!nodes_.empty()) {
    nearest_recurse(0, x, best, best_sq);
  }
  return { best, best_sq };
}

void
KdTree::nearest_recurse(Index id, const double* x, Index& best, double& best_sq) const
{
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (Index s = node.begin; s < node.end; ++s) {
      const double sq = squared_distance(x, coord(s), dim_);
      const Index idx = order_[static_cast<std::size_t>(s)];
      if (sq < best_sq || (sq == best_sq && idx < best)) {
        best_sq = sq;
        best = idx;
      }
    }
    return;
  }
  const double diff = x[node.split_dim] - node.split;
  const Index near = diff < 0.0 ? node.left : node.right;
  const Index far = diff < 0.0 ? node.right : node.left;
  nearest_recurse(near, x, best, best_sq);
  if (diff * diff <= best_sq) {
    nearest_recurse(far, x, best, best_sq);
  }
}

} // namespace manifit

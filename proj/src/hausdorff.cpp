#include "manifit/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "manifit/errors.hpp"
#include "manifit/kdtree.hpp"

namespace manifit {

namespace {

void
check_pair(const PointCloud& p, const PointCloud& q)
{
  if (p.empty() || q.empty()) {
    throw EmptySetError("Hausdorff distance needs two nonempty sets");
  }
  if (p.dim() != q.dim()) {
    throw DimensionError("Hausdorff distance between sets of different dimension");
  }
}

// Running sup with lowest-index tie-breaking; values are squared distances.
struct SupTracker
{
  double best_sq = -1.0;
  Index witness = -1;

  void offer(Index i, double sq)
  {
    if (sq > best_sq) {
      best_sq = sq;
      witness = i;
    }
  }

  DirectedHausdorff result() const { return { std::sqrt(best_sq), witness }; }
};

} // namespace

DirectedHausdorff
directed_hausdorff(const PointCloud& p, const PointCloud& q)
{
  check_pair(p, q);
  const KdTree tree(q);
  SupTracker sup;
  for (Index i = 0; i < p.size(); ++i) {
    sup.offer(i, tree.nearest(p.data(i)).second);
  }
  return sup.result();
}

DirectedHausdorff
directed_hausdorff_exhaustive(const PointCloud& p, const PointCloud& q)
{
  check_pair(p, q);
  SupTracker sup;
  for (Index i = 0; i < p.size(); ++i) {
    double inf_sq = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < q.size(); ++j) {
      inf_sq = std::min(inf_sq, squared_distance(p.data(i), q.data(j), p.dim()));
    }
    sup.offer(i, inf_sq);
  }
  return sup.result();
}

HausdorffReport
hausdorff(const PointCloud& p, const PointCloud& q)
{
  const auto fwd = directed_hausdorff(p, q);
  const auto bwd = directed_hausdorff(q, p);
  HausdorffReport r;
  r.forward = fwd.value;
  r.forward_witness = fwd.witness;
  r.backward = bwd.value;
  r.backward_witness = bwd.witness;
  r.symmetric = std::max(r.forward, r.backward);
  return r;
}

HausdorffReport
hausdorff_to_manifold(const PointCloud& p, const ManifoldSpec& spec, const PointCloud& dense)
{
  if (p.empty()) {
    throw EmptySetError("Hausdorff distance needs a nonempty point set");
  }
  if (p.dim() != spec.ambient_dim) {
    throw DimensionError("point set and manifold differ in dimension");
  }
  HausdorffReport r;
  r.forward = -1.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double dist = analytic_distance(spec, p.point(i));
    if (dist > r.forward) {
      r.forward = dist;
      r.forward_witness = i;
    }
  }
  const auto bwd = directed_hausdorff(dense, p);
  r.backward = bwd.value;
  r.backward_witness = bwd.witness;
  r.backward_sampled = true;
  r.symmetric = std::max(r.forward, r.backward);
  return r;
}

HausdorffReport
hausdorff_to_manifold(const PointCloud& p,
                      const ManifoldSpec& spec,
                      Index dense_count,
                      std::uint64_t seed)
{
  return hausdorff_to_manifold(p, spec, sample_manifold(spec, dense_count, seed));
}

} // namespace manifit

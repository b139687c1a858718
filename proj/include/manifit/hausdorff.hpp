#pragma once

#include <cstdint>

#include "manifit/manifolds.hpp"
#include "manifit/point_cloud.hpp"

namespace manifit {

struct DirectedHausdorff
{
  double value = 0.0;
  Index witness = -1; // index in the first set attaining the sup (lowest on ties)
};

struct HausdorffReport
{
  double forward = 0.0;  // sup_P inf_Q
  double backward = 0.0; // sup_Q inf_P
  double symmetric = 0.0;
  Index forward_witness = -1;
  Index backward_witness = -1;
  /// True when the backward side is a lower estimate from a dense sample of
  /// an analytic manifold rather than an exact set-to-set value.
  bool backward_sampled = false;
};

/// sup over P of the distance to the nearest point of Q (kd-tree on Q).
DirectedHausdorff
directed_hausdorff(const PointCloud& p, const PointCloud& q);

/// Reference O(|P||Q|) computation; bit-identical to directed_hausdorff.
DirectedHausdorff
directed_hausdorff_exhaustive(const PointCloud& p, const PointCloud& q);

HausdorffReport
hausdorff(const PointCloud& p, const PointCloud& q);

/// Forward side exact via analytic_distance; backward side estimated over
/// `dense`, a sample of the manifold.
HausdorffReport
hausdorff_to_manifold(const PointCloud& p, const ManifoldSpec& spec, const PointCloud& dense);

HausdorffReport
hausdorff_to_manifold(const PointCloud& p,
                      const ManifoldSpec& spec,
                      Index dense_count = 100000,
                      std::uint64_t seed = 0);

} // namespace manifit

#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "manifit/neighbors.hpp"
#include "manifit/weights.hpp"

namespace manifit {

/// Symmetric idempotent D x D matrix projecting onto an estimated normal
/// space. Only projectors are stored, never eigenvector bases, so the result
/// is free of sign and rotation ambiguity inside an eigenspace.
struct NormalProjector
{
  Matrix matrix;
  Index rank = 0;
  /// Gap between the last kept and first discarded eigenvalue of the source
  /// matrix (diagnostic only).
  double eigengap = 0.0;
  /// Fewer than d + 1 samples contributed to the local moment.
  bool rank_deficient = false;
  /// The eigengap at the cut is below 1e-12; the subspace is ill-defined.
  bool degenerate_spectrum = false;
};

inline constexpr double kDegenerateGap = 1e-12;

/// Projector onto the eigenvectors of the `count` largest eigenvalues of the
/// symmetric matrix `sym` (Pi_hi with count = D - d).
NormalProjector
top_eigenspace_projector(const Matrix& sym, Index count);

/// Local PCA at z: eigen-decompose (1/|I_z|) sum (z_i - z)(z_i - z)^T and
/// return the projector onto the complement of its top-d eigenvectors.
/// The moment is taken around z itself, not around the neighborhood mean.
NormalProjector
local_normal_projector(VectorRef z,
                       const NeighborSet& nbrs,
                       const PointCloud& cloud,
                       Index d);

NormalProjector
local_normal_projector(VectorRef z, const PointCloud& cloud, double r, Index d);

/// Per-site local normal projectors, computed once and shared read-only.
///
/// Sites are the points at which projectors are estimated (every sample for
/// the plain estimator, the net for cf18); the local moments are always taken
/// over the full data cloud. Entries are filled lazily under a per-entry
/// once-flag, or all at once with populate().
class ProjectorCache
{
public:
  ProjectorCache(PointCloud sites,
                 std::shared_ptr<const NeighborIndex> data,
                 double r,
                 Index d);

  ProjectorCache(const ProjectorCache&) = delete;
  ProjectorCache& operator=(const ProjectorCache&) = delete;

  const NormalProjector& at(Index site) const;
  void populate(unsigned threads = 1) const;

  const PointCloud& sites() const { return sites_; }
  Index size() const { return sites_.size(); }
  double radius() const { return r_; }
  Index intrinsic_dim() const { return d_; }

  /// Number of published entries flagged rank deficient.
  Index rank_deficient_count() const;

private:
  PointCloud sites_;
  std::shared_ptr<const NeighborIndex> data_;
  double r_;
  Index d_;
  mutable std::vector<NormalProjector> entries_;
  mutable std::unique_ptr<std::once_flag[]> ready_;
};

/// A_x = sum_i alpha_i Pi_i over the neighbors of x among the cache sites.
Matrix
averaged_projector_matrix(const NeighborSet& nbrs,
                          const WeightProfile& weights,
                          const ProjectorCache& cache);

/// Pi_x = Pi_hi(A_x): projector onto the top D - d eigenvectors of A_x.
NormalProjector
averaged_normal_projector(const NeighborSet& nbrs,
                          const WeightProfile& weights,
                          const ProjectorCache& cache);

/// Convenience form: exhaustive neighbor search over the cache sites.
NormalProjector
averaged_normal_projector(VectorRef x, double r, int beta, const ProjectorCache& cache);

} // namespace manifit

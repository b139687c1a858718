#include "manifit/tangent.hpp"

#include <string>

#include "manifit/errors.hpp"
#include "manifit/parallel.hpp"

namespace manifit {

namespace {

// Projector onto eigenvectors [first, first + count) of an ascending solver.
Matrix
span_projector(const Matrix& eigenvectors, Index first, Index count)
{
  const auto block = eigenvectors.middleCols(first, count);
  Matrix p = block * block.transpose();
  return 0.5 * (p + p.transpose());
}

Eigen::SelfAdjointEigenSolver<Matrix>
decompose(const Matrix& sym)
{
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  return es;
}

} // namespace

NormalProjector
top_eigenspace_projector(const Matrix& sym, Index count)
{
  const Index dim = sym.rows();
  if (count < 0 || count > dim) {
    throw InvalidInput("eigenspace size out of range");
  }
  const auto es = decompose(sym);
  const auto& ev = es.eigenvalues(); // ascending
  NormalProjector out;
  out.rank = count;
  out.matrix = span_projector(es.eigenvectors(), dim - count, count);
  if (count > 0 && count < dim) {
    out.eigengap = ev[dim - count] - ev[dim - count - 1];
    out.degenerate_spectrum = out.eigengap < kDegenerateGap;
  }
  return out;
}

NormalProjector
local_normal_projector(VectorRef z,
                       const NeighborSet& nbrs,
                       const PointCloud& cloud,
                       Index d)
{
  const Index dim = cloud.dim();
  check_query(z, dim);
  if (d < 1 || d >= dim) {
    throw InvalidInput("intrinsic dimension must satisfy 1 <= d < D");
  }
  if (nbrs.empty()) {
    throw EmptyNeighborhood("local PCA needs at least one neighbor");
  }

  Matrix moment = Matrix::Zero(dim, dim);
  Vector diff(dim);
  for (Index i : nbrs.indices) {
    diff = cloud.point(i) - z;
    moment.noalias() += diff * diff.transpose();
  }
  moment /= static_cast<double>(nbrs.size());

  const auto es = decompose(moment);
  const auto& ev = es.eigenvalues();
  NormalProjector out;
  out.rank = dim - d;
  // The normal space is the span of the D - d smallest eigenvectors.
  out.matrix = span_projector(es.eigenvectors(), 0, dim - d);
  out.eigengap = ev[dim - d] - ev[dim - d - 1];
  out.degenerate_spectrum = out.eigengap < kDegenerateGap;
  out.rank_deficient = static_cast<Index>(nbrs.size()) < d + 1;
  return out;
}

NormalProjector
local_normal_projector(VectorRef z, const PointCloud& cloud, double r, Index d)
{
  return local_normal_projector(z, radius_neighbors(z, r, cloud), cloud, d);
}

ProjectorCache::ProjectorCache(PointCloud sites,
                               std::shared_ptr<const NeighborIndex> data,
                               double r,
                               Index d)
  : sites_(std::move(sites))
  , data_(std::move(data))
  , r_(r)
  , d_(d)
  , entries_(static_cast<std::size_t>(sites_.size()))
  , ready_(std::make_unique<std::once_flag[]>(static_cast<std::size_t>(sites_.size())))
{
  if (!data_) {
    throw InvalidInput("projector cache needs a data index");
  }
  if (sites_.dim() != data_->cloud().dim()) {
    throw DimensionError("projector sites and data differ in dimension");
  }
  if (d_ < 1 || d_ >= sites_.dim()) {
    throw InvalidInput("intrinsic dimension must satisfy 1 <= d < D");
  }
}

const NormalProjector&
ProjectorCache::at(Index site) const
{
  const auto slot = static_cast<std::size_t>(site);
  std::call_once(ready_[slot], [&] {
    const Vector z = sites_.point(site);
    entries_[slot] = local_normal_projector(z, data_->query(z, r_), data_->cloud(), d_);
  });
  return entries_[slot];
}

void
ProjectorCache::populate(unsigned threads) const
{
  parallel_for(size(), threads, [&](Index i) { (void)at(i); });
}

Index
ProjectorCache::rank_deficient_count() const
{
  Index n = 0;
  for (Index i = 0; i < size(); ++i) {
    n += at(i).rank_deficient ? 1 : 0;
  }
  return n;
}

Matrix
averaged_projector_matrix(const NeighborSet& nbrs,
                          const WeightProfile& weights,
                          const ProjectorCache& cache)
{
  const Index dim = cache.sites().dim();
  Matrix a = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    if (weights.normalized[k] > 0.0) {
      a += weights.normalized[k] * cache.at(nbrs.indices[k]).matrix;
    }
  }
  return a;
}

NormalProjector
averaged_normal_projector(const NeighborSet& nbrs,
                          const WeightProfile& weights,
                          const ProjectorCache& cache)
{
  if (nbrs.empty()) {
    throw EmptyNeighborhood("averaged projector needs at least one neighbor");
  }
  const Matrix a = averaged_projector_matrix(nbrs, weights, cache);
  return top_eigenspace_projector(a, cache.sites().dim() - cache.intrinsic_dim());
}

NormalProjector
averaged_normal_projector(VectorRef x, double r, int beta, const ProjectorCache& cache)
{
  const NeighborSet nbrs = radius_neighbors(x, r, cache.sites());
  return averaged_normal_projector(nbrs, compute_weights(nbrs, beta), cache);
}

} // namespace manifit

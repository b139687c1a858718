#include "manifit/point_cloud.hpp"

#include <string>

#include "manifit/errors.hpp"

namespace manifit {

PointCloud::PointCloud(Matrix coords)
  : coords_(std::move(coords))
{
  if (coords_.rows() < 1) {
    throw DimensionError("point cloud needs ambient dimension >= 1");
  }
  if (!coords_.allFinite()) {
    throw InvalidInput("point cloud contains non-finite coordinates");
  }
}

PointCloud
PointCloud::from_rows(const std::vector<std::vector<double>>& rows)
{
  if (rows.empty()) {
    throw InvalidInput("cannot infer dimension of an empty row list");
  }
  const auto dim = static_cast<Index>(rows.front().size());
  Matrix coords(dim, static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (static_cast<Index>(rows[j].size()) != dim) {
      throw DimensionError("row " + std::to_string(j) + " has dimension " +
                           std::to_string(rows[j].size()) + ", expected " +
                           std::to_string(dim));
    }
    for (Index k = 0; k < dim; ++k) {
      coords(k, static_cast<Index>(j)) = rows[j][static_cast<std::size_t>(k)];
    }
  }
  return PointCloud(std::move(coords));
}

PointCloud
PointCloud::empty(Index dim)
{
  return PointCloud(Matrix(dim, 0));
}

PointCloud
PointCloud::subset(std::span<const Index> indices) const
{
  Matrix out(dim(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    out.col(static_cast<Index>(j)) = coords_.col(indices[j]);
  }
  return PointCloud(std::move(out));
}

void
check_query(VectorRef x, Index dim)
{
  if (x.size() != dim) {
    throw DimensionError("query has dimension " + std::to_string(x.size()) +
                         ", cloud has dimension " + std::to_string(dim));
  }
  if (!x.allFinite()) {
    throw InvalidInput("query point has non-finite coordinates");
  }
}

} // namespace manifit

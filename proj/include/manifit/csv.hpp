#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "manifit/point_cloud.hpp"

namespace manifit {

/// Point files: a header row x0,...,x{D-1}, then one point per row as
/// comma-separated decimal doubles. Values are written with the shortest
/// representation that round-trips, so write -> read is bit-exact.

PointCloud
read_points_csv(std::istream& in);

PointCloud
read_points_csv(const std::filesystem::path& path);

void
write_points_csv(std::ostream& out, const PointCloud& cloud);

void
write_points_csv(const std::filesystem::path& path, const PointCloud& cloud);

/// Shortest round-trip decimal form of a double.
std::string
format_double(double v);

} // namespace manifit

#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "manifit/point_cloud.hpp"

namespace fixtures {

// Evenly spaced samples on the x0 axis of R^2.
inline manifit::PointCloud
line_data(int n = 41, double half_width = 2.0)
{
  manifit::Matrix m = manifit::Matrix::Zero(2, n);
  for (int i = 0; i < n; ++i) {
    m(0, i) = -half_width + 2.0 * half_width * i / (n - 1);
  }
  return manifit::PointCloud(m);
}

// Grid on the x0-x1 plane of R^3.
inline manifit::PointCloud
plane_data(int side = 21, double half_width = 1.0)
{
  manifit::Matrix m = manifit::Matrix::Zero(3, side * side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      m(0, i * side + j) = -half_width + 2.0 * half_width * i / (side - 1);
      m(1, i * side + j) = -half_width + 2.0 * half_width * j / (side - 1);
    }
  }
  return manifit::PointCloud(m);
}

// n equally spaced points on the unit circle, starting at angle phase.
inline manifit::PointCloud
circle_grid(int n, double phase = 0.0)
{
  manifit::Matrix m(2, n);
  for (int i = 0; i < n; ++i) {
    const double t = phase + 2.0 * 3.141592653589793 * i / n;
    m(0, i) = std::cos(t);
    m(1, i) = std::sin(t);
  }
  return manifit::PointCloud(m);
}

inline manifit::Vector
vec(std::initializer_list<double> v)
{
  manifit::Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) {
    out[k++] = x;
  }
  return out;
}

} // namespace fixtures

#pragma once

#include <vector>

#include "manifit/neighbors.hpp"

namespace manifit {

/// Compactly supported weights (1 - |x - x_i|^2 / r^2)^beta over a
/// neighborhood, and their normalization to a partition of unity.
struct WeightProfile
{
  int beta = 2;
  std::vector<double> raw;        // one per neighbor, in [0, 1]
  double total = 0.0;             // sum of raw
  std::vector<double> normalized; // raw / total
};

/// Raw weight of a single sample at distance `distance` from the query.
/// Exactly zero outside the open ball.
double
raw_weight(double distance, double r, int beta);

/// Throws EmptyNeighborhood when the set is empty or every weight vanishes
/// (all neighbors on the boundary sphere).
WeightProfile
compute_weights(const NeighborSet& nbrs, int beta);

} // namespace manifit

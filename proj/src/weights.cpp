#include "manifit/weights.hpp"

#include "manifit/errors.hpp"

namespace manifit {

double
raw_weight(double distance, double r, int beta)
{
  if (distance >= r) {
    return 0.0;
  }
  const double q = distance / r;
  const double base = 1.0 - q * q;
  double w = 1.0;
  for (int k = 0; k < beta; ++k) {
    w *= base;
  }
  return w;
}

WeightProfile
compute_weights(const NeighborSet& nbrs, int beta)
{
  if (beta < 2) {
    throw InvalidInput("weight exponent beta must be an integer >= 2");
  }
  if (nbrs.empty()) {
    throw EmptyNeighborhood("no samples within radius of the query point");
  }
  WeightProfile w;
  w.beta = beta;
  w.raw.reserve(nbrs.size());
  for (double dist : nbrs.distances) {
    const double a = raw_weight(dist, nbrs.radius, beta);
    w.raw.push_back(a);
    w.total += a;
  }
  if (!(w.total > 0.0)) {
    throw EmptyNeighborhood("all neighbors lie on the support boundary");
  }
  w.normalized.reserve(w.raw.size());
  for (double a : w.raw) {
    w.normalized.push_back(a / w.total);
  }
  return w;
}

} // namespace manifit

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "manifit/fitters.hpp"
#include "manifit/manifolds.hpp"
#include "manifit/solver.hpp"

namespace manifit {

/// Solver settings as written in a config file. The tolerance is relative:
/// epsilon = tolerance_scale * r^2 for each bandwidth r.
struct SolverSettings
{
  double tolerance_scale = 1e-12;
  int max_iters = 500;
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double min_step = 1e-10;
  double max_displacement = 2.0;
  GradientMode gradient_mode = GradientMode::ApproxResidual;
  double armijo = 0.1;
  double gradient_step = 1e-5;

  SolverOptions for_radius(double r) const;
};

/// One synthetic benchmark: sample, perturb, fit each method at each
/// bandwidth r = lambda * sqrt(sigma), project tube points, measure.
struct ExperimentConfig
{
  std::string name;
  ManifoldSpec manifold;
  Index samples = 0;        // N
  Index initial_points = 0; // N0
  double sigma = 0.0;
  std::vector<double> lambda_grid;
  int beta = 0; // weight exponent of the plain estimator
  std::optional<int> cf18_beta; // defaults to d + 2
  double net_scale = 1.0;
  double km17_fd_step = 1e-4; // in units of r
  std::vector<Method> methods;
  Index trials = 0;
  std::uint64_t master_seed = 0;
  Index dense_count = 100000;
  /// Defaults to 0.5 * sqrt(sigma / D).
  std::optional<double> tube_radius;
  SolverSettings solver;
  std::string output_dir;
  unsigned threads = 1;

  double effective_tube_radius() const;
  void validate() const;
};

/// Parses the YAML config format. Benchmark parameters (manifold, samples,
/// initial_points, sigma, lambda_grid, beta, methods, trials, master_seed)
/// are required. Throws ConfigError carrying the offending line.
ExperimentConfig
parse_config(const std::string& text);

ExperimentConfig
load_config(const std::filesystem::path& path);

} // namespace manifit

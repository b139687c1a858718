#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "manifit/config.hpp"
#include "manifit/hausdorff.hpp"
#include "manifit/solver.hpp"

namespace manifit {

inline constexpr int kReportSchemaVersion = 1;

/// Stream ids under a trial seed.
enum class SeedPurpose : std::uint64_t
{
  Manifold = 1,
  Noise = 2,
  Tube = 3,
  Dense = 4
};

std::uint64_t
trial_seed(std::uint64_t master_seed, Index trial);

std::uint64_t
purpose_seed(std::uint64_t trial_seed, SeedPurpose purpose);

struct StatusCounts
{
  Index converged = 0;
  Index max_iters = 0;
  Index stalled = 0;
  Index escaped = 0;
  Index unprocessable = 0;

  void add(ProjectionStatus s);
  Index total() const { return converged + max_iters + stalled + escaped + unprocessable; }
};

struct MethodRun
{
  Method method = Method::Ours;
  double lambda = 0.0;
  double r = 0.0;
  HausdorffReport hausdorff;
  StatusCounts statuses;
  Index non_monotone_traces = 0;
  Index accepted_steps = 0;
  double seconds = 0.0;
};

struct TrialResult
{
  Index trial = 0;
  std::uint64_t seed = 0;
  HausdorffReport initial; // tube points before projection
  std::vector<MethodRun> runs; // method-major, lambda-minor
  double seconds = 0.0;
};

struct LambdaSummary
{
  double lambda = 0.0;
  double median_symmetric = 0.0;
  double median_forward = 0.0;
  double median_backward = 0.0;
  double converged_fraction = 0.0;
};

struct MethodSummary
{
  Method method = Method::Ours;
  std::vector<LambdaSummary> per_lambda;
  /// Grid value with the smallest median symmetric distance (first on ties).
  double best_lambda = 0.0;
  double best_median_symmetric = 0.0;
  double best_median_forward = 0.0;
};

struct ExperimentReport
{
  ExperimentConfig config;
  std::string code_version;
  std::vector<TrialResult> trials; // ordered by trial index
  double median_initial_symmetric = 0.0;
  double median_initial_forward = 0.0;
  std::vector<MethodSummary> summary;
  double wall_seconds = 0.0;

  const MethodSummary& summary_for(Method m) const;
  const MethodRun& run(Index trial, Method m, double lambda) const;
};

struct RunSettings
{
  /// Overrides config.threads when nonzero.
  unsigned threads = 0;
  /// Execution order of the trials; empty means 0, 1, ..., trials - 1.
  /// Results do not depend on it.
  std::vector<Index> trial_order;
};

/// Per trial: sample the manifold, add noise, draw tube points of radius
/// 0.5 sqrt(sigma / D), fit every method at every r = lambda sqrt(sigma),
/// project the tube points and measure Hausdorff distances to the manifold.
ExperimentReport
run_experiment(const ExperimentConfig& config, const RunSettings& settings = {});

double
median(std::vector<double> values);

std::string
code_version();

nlohmann::json
to_json(const HausdorffReport& h);

nlohmann::json
to_json(const ExperimentConfig& c);

/// Wall-clock figures go under a separate "timing" member so the rest of the
/// document is reproducible bit-for-bit.
nlohmann::json
report_to_json(const ExperimentReport& report, bool include_timing = true);

/// Writes report.json and per_trial.csv into dir.
void
write_report(const ExperimentReport& report, const std::filesystem::path& dir);

} // namespace manifit

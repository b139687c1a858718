#include "manifit/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "manifit/csv.hpp"
#include "manifit/errors.hpp"
#include "manifit/parallel.hpp"

#ifndef MANIFIT_VERSION
#define MANIFIT_VERSION "unknown"
#endif

namespace manifit {

namespace {

using Clock = std::chrono::steady_clock;

double
seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct TrialData
{
  PointCloud samples;
  PointCloud initial;
  PointCloud dense;
};

} // namespace

std::uint64_t
trial_seed(std::uint64_t master_seed, Index trial)
{
  return derive_seed(master_seed, static_cast<std::uint64_t>(trial));
}

std::uint64_t
purpose_seed(std::uint64_t seed, SeedPurpose purpose)
{
  return derive_seed(seed, static_cast<std::uint64_t>(purpose));
}

void
StatusCounts::add(ProjectionStatus s)
{
  switch (s) {
    case ProjectionStatus::Converged:
      ++converged;
      break;
    case ProjectionStatus::MaxIters:
      ++max_iters;
      break;
    case ProjectionStatus::Stalled:
      ++stalled;
      break;
    case ProjectionStatus::Escaped:
      ++escaped;
      break;
    case ProjectionStatus::Unprocessable:
      ++unprocessable;
      break;
  }
}

const MethodSummary&
ExperimentReport::summary_for(Method m) const
{
  for (const auto& s : summary) {
    if (s.method == m) {
      return s;
    }
  }
  throw InvalidInput("method " + std::string(to_string(m)) + " was not run");
}

const MethodRun&
ExperimentReport::run(Index trial, Method m, double lambda) const
{
  for (const auto& r : trials.at(static_cast<std::size_t>(trial)).runs) {
    if (r.method == m && r.lambda == lambda) {
      return r;
    }
  }
  throw InvalidInput("no run for the requested method and lambda");
}

double
median(std::vector<double> values)
{
  if (values.empty()) {
    throw InvalidInput("median of an empty list");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string
code_version()
{
  return std::string("manifit ") + MANIFIT_VERSION;
}

ExperimentReport
run_experiment(const ExperimentConfig& config, const RunSettings& settings)
{
  config.validate();
  const auto start = Clock::now();
  const unsigned threads = settings.threads ? settings.threads : std::max(1u, config.threads);
  const Index n_trials = config.trials;

  std::vector<Index> order = settings.trial_order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(n_trials));
    std::iota(order.begin(), order.end(), Index{ 0 });
  } else {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (Index t = 0; t < n_trials; ++t) {
      if (static_cast<Index>(sorted.size()) != n_trials || sorted[static_cast<std::size_t>(t)] != t) {
        throw InvalidInput("trial_order must be a permutation of the trial indices");
      }
    }
  }

  ExperimentReport report;
  report.config = config;
  report.code_version = code_version();
  report.trials.resize(static_cast<std::size_t>(n_trials));

  const ManifoldSpec& spec = config.manifold;
  const double tube = config.effective_tube_radius();
  const auto n_methods = static_cast<Index>(config.methods.size());
  const auto n_lambda = static_cast<Index>(config.lambda_grid.size());

  // Phase 1: per-trial data, each from its own derived streams.
  std::vector<TrialData> data(static_cast<std::size_t>(n_trials));
  parallel_for(n_trials, threads, [&](Index k) {
    const Index t = order[static_cast<std::size_t>(k)];
    const auto trial_start = Clock::now();
    const std::uint64_t seed = trial_seed(config.master_seed, t);
    TrialData& d = data[static_cast<std::size_t>(t)];
    const PointCloud clean = sample_manifold(spec, config.samples, purpose_seed(seed, SeedPurpose::Manifold));
    d.samples = add_gaussian_noise(clean, { config.sigma, purpose_seed(seed, SeedPurpose::Noise) });
    d.initial = sample_tube(spec, config.initial_points, tube, purpose_seed(seed, SeedPurpose::Tube));
    d.dense = sample_manifold(spec, config.dense_count, purpose_seed(seed, SeedPurpose::Dense));

    TrialResult& tr = report.trials[static_cast<std::size_t>(t)];
    tr.trial = t;
    tr.seed = seed;
    tr.initial = hausdorff_to_manifold(d.initial, spec, d.dense);
    tr.runs.resize(static_cast<std::size_t>(n_methods * n_lambda));
    tr.seconds = seconds_since(trial_start);
  });

  // Phase 2: the (trial, method, lambda) task grid.
  const Index per_trial = n_methods * n_lambda;
  parallel_for(n_trials * per_trial, threads, [&](Index task) {
    const Index t = order[static_cast<std::size_t>(task / per_trial)];
    const Index m = (task % per_trial) / n_lambda;
    const Index l = task % n_lambda;
    const auto task_start = Clock::now();
    const TrialData& d = data[static_cast<std::size_t>(t)];

    MethodRun run;
    run.method = config.methods[static_cast<std::size_t>(m)];
    run.lambda = config.lambda_grid[static_cast<std::size_t>(l)];
    run.r = run.lambda * std::sqrt(config.sigma);

    FittedField::Options fit_opts;
    fit_opts.beta = run.method == Method::Cf18 ? config.cf18_beta : std::optional<int>(config.beta);
    fit_opts.net_scale = config.net_scale;
    fit_opts.fd_step = config.km17_fd_step * run.r;
    const FittedField field = FittedField::fit(run.method, d.samples, run.r, spec.intrinsic_dim, fit_opts);

    const BatchProjection projected = project_batch(d.initial, field, config.solver.for_radius(run.r), 1);
    for (const auto& trace : projected.traces) {
      run.statuses.add(trace.status);
      run.accepted_steps += trace.accepted_steps();
      run.non_monotone_traces += trace.monotone() ? 0 : 1;
    }
    run.hausdorff = hausdorff_to_manifold(projected.points, spec, d.dense);
    run.seconds = seconds_since(task_start);
    report.trials[static_cast<std::size_t>(t)].runs[static_cast<std::size_t>(m * n_lambda + l)] = run;
  });

  std::vector<double> init_sym;
  std::vector<double> init_fwd;
  for (const auto& tr : report.trials) {
    init_sym.push_back(tr.initial.symmetric);
    init_fwd.push_back(tr.initial.forward);
  }
  report.median_initial_symmetric = median(init_sym);
  report.median_initial_forward = median(init_fwd);

  for (Index m = 0; m < n_methods; ++m) {
    MethodSummary s;
    s.method = config.methods[static_cast<std::size_t>(m)];
    for (Index l = 0; l < n_lambda; ++l) {
      std::vector<double> sym;
      std::vector<double> fwd;
      std::vector<double> bwd;
      Index converged = 0;
      Index total = 0;
      for (const auto& tr : report.trials) {
        const MethodRun& r = tr.runs[static_cast<std::size_t>(m * n_lambda + l)];
        sym.push_back(r.hausdorff.symmetric);
        fwd.push_back(r.hausdorff.forward);
        bwd.push_back(r.hausdorff.backward);
        converged += r.statuses.converged;
        total += r.statuses.total();
      }
      LambdaSummary ls;
      ls.lambda = config.lambda_grid[static_cast<std::size_t>(l)];
      ls.median_symmetric = median(sym);
      ls.median_forward = median(fwd);
      ls.median_backward = median(bwd);
      ls.converged_fraction = total ? static_cast<double>(converged) / static_cast<double>(total) : 0.0;
      s.per_lambda.push_back(ls);
    }
    const auto best = std::min_element(s.per_lambda.begin(), s.per_lambda.end(), [](const auto& a, const auto& b) {
      return a.median_symmetric < b.median_symmetric;
    });
    s.best_lambda = best->lambda;
    s.best_median_symmetric = best->median_symmetric;
    s.best_median_forward = best->median_forward;
    report.summary.push_back(std::move(s));
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

nlohmann::json
to_json(const HausdorffReport& h)
{
  return {
    { "forward", h.forward },
    { "backward", h.backward },
    { "symmetric", h.symmetric },
    { "forward_witness", h.forward_witness },
    { "backward_witness", h.backward_witness },
    { "backward_sampled", h.backward_sampled },
  };
}

nlohmann::json
to_json(const ExperimentConfig& c)
{
  nlohmann::json manifold = { { "kind", std::string(to_string(c.manifold.kind)) },
                              { "ambient_dim", c.manifold.ambient_dim },
                              { "intrinsic_dim", c.manifold.intrinsic_dim },
                              { "reach", c.manifold.reach() } };
  switch (c.manifold.kind) {
    case ManifoldKind::Circle:
    case ManifoldKind::Sphere:
      manifold["radius"] = c.manifold.radius;
      break;
    case ManifoldKind::Torus:
      manifold["major"] = c.manifold.major;
      manifold["minor"] = c.manifold.minor;
      break;
    case ManifoldKind::Affine: {
      nlohmann::json basis = nlohmann::json::array();
      for (Index j = 0; j < c.manifold.basis.cols(); ++j) {
        basis.push_back(std::vector<double>(c.manifold.basis.col(j).data(),
                                            c.manifold.basis.col(j).data() + c.manifold.basis.rows()));
      }
      manifold["basis"] = basis;
      manifold["offset"] = std::vector<double>(c.manifold.offset.data(),
                                               c.manifold.offset.data() + c.manifold.offset.size());
      manifold["extent"] = c.manifold.extent;
      break;
    }
  }
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : c.methods) {
    methods.push_back(std::string(to_string(m)));
  }
  const auto& s = c.solver;
  return {
    { "name", c.name },
    { "manifold", manifold },
    { "samples", c.samples },
    { "initial_points", c.initial_points },
    { "sigma", c.sigma },
    { "lambda_grid", c.lambda_grid },
    { "beta", c.beta },
    { "cf18_beta", c.cf18_beta ? nlohmann::json(*c.cf18_beta) : nlohmann::json(nullptr) },
    { "net_scale", c.net_scale },
    { "km17_fd_step", c.km17_fd_step },
    { "methods", methods },
    { "trials", c.trials },
    { "master_seed", c.master_seed },
    { "dense_count", c.dense_count },
    { "tube_radius", c.effective_tube_radius() },
    { "solver",
      { { "tolerance_scale", s.tolerance_scale },
        { "max_iters", s.max_iters },
        { "initial_step", s.initial_step },
        { "backtrack_factor", s.backtrack_factor },
        { "min_step", s.min_step },
        { "max_displacement", s.max_displacement },
        { "gradient_mode", std::string(to_string(s.gradient_mode)) },
        { "armijo", s.armijo },
        { "gradient_step", s.gradient_step } } },
  };
}

nlohmann::json
report_to_json(const ExperimentReport& report, bool include_timing)
{
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& tr : report.trials) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : tr.runs) {
      runs.push_back({
        { "method", std::string(to_string(r.method)) },
        { "lambda", r.lambda },
        { "r", r.r },
        { "hausdorff", to_json(r.hausdorff) },
        { "statuses",
          { { "converged", r.statuses.converged },
            { "max_iters", r.statuses.max_iters },
            { "stalled", r.statuses.stalled },
            { "escaped", r.statuses.escaped },
            { "unprocessable", r.statuses.unprocessable } } },
        { "non_monotone_traces", r.non_monotone_traces },
        { "accepted_steps", r.accepted_steps },
      });
    }
    trials.push_back({ { "trial", tr.trial },
                       { "seed", tr.seed },
                       { "initial", to_json(tr.initial) },
                       { "runs", runs } });
  }

  nlohmann::json summary = nlohmann::json::array();
  for (const auto& s : report.summary) {
    nlohmann::json per_lambda = nlohmann::json::array();
    for (const auto& l : s.per_lambda) {
      per_lambda.push_back({ { "lambda", l.lambda },
                             { "median_symmetric", l.median_symmetric },
                             { "median_forward", l.median_forward },
                             { "median_backward", l.median_backward },
                             { "converged_fraction", l.converged_fraction } });
    }
    summary.push_back({ { "method", std::string(to_string(s.method)) },
                        { "best_lambda", s.best_lambda },
                        { "best_median_symmetric", s.best_median_symmetric },
                        { "best_median_forward", s.best_median_forward },
                        { "per_lambda", per_lambda } });
  }

  nlohmann::json doc = {
    { "schema_version", kReportSchemaVersion },
    { "code_version", report.code_version },
    { "config", to_json(report.config) },
    { "median_initial_symmetric", report.median_initial_symmetric },
    { "median_initial_forward", report.median_initial_forward },
    { "summary", summary },
    { "trials", trials },
  };
  if (include_timing) {
    nlohmann::json per_trial = nlohmann::json::array();
    for (const auto& tr : report.trials) {
      nlohmann::json runs = nlohmann::json::array();
      for (const auto& r : tr.runs) {
        runs.push_back(r.seconds);
      }
      per_trial.push_back({ { "trial", tr.trial }, { "data_seconds", tr.seconds }, { "run_seconds", runs } });
    }
    doc["timing"] = { { "wall_seconds", report.wall_seconds }, { "trials", per_trial } };
  }
  return doc;
}

void
write_report(const ExperimentReport& report, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) {
      throw InvalidInput("cannot write into '" + dir.string() + "'");
    }
    out << report_to_json(report).dump(2) << '\n';
  }
  std::ofstream csv(dir / "per_trial.csv");
  csv << "trial,method,lambda,r,forward,backward,symmetric,initial_symmetric,converged,total\n";
  for (const auto& tr : report.trials) {
    for (const auto& r : tr.runs) {
      csv << tr.trial << ',' << to_string(r.method) << ',' << format_double(r.lambda) << ','
          << format_double(r.r) << ',' << format_double(r.hausdorff.forward) << ','
          << format_double(r.hausdorff.backward) << ',' << format_double(r.hausdorff.symmetric) << ','
          << format_double(tr.initial.symmetric) << ',' << r.statuses.converged << ','
          << r.statuses.total() << '\n';
    }
  }
}

} // namespace manifit

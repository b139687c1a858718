#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifit/config.hpp"
#include "manifit/csv.hpp"
#include "manifit/errors.hpp"
#include "manifit/experiment.hpp"
#include "manifit/hausdorff.hpp"
#include "manifit/manifolds.hpp"
#include "manifit/solver.hpp"

using namespace manifit;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct ManifoldFlags
{
  std::string kind;
  double radius = 1.0;
  double major = 2.0;
  double minor = 0.5;
  Index ambient_dim = 3;
  std::string basis;  // "b00,b01,...;b10,..." one basis vector per ';'
  std::string offset; // "o0,o1,..."
  double extent = 1.0;

  void add_to(CLI::App* app, bool required)
  {
    auto* opt = app->add_option("--manifold", kind, "circle, sphere, torus or affine");
    if (required) {
      opt->required();
    }
    app->add_option("--radius", radius, "circle/sphere radius")->capture_default_str();
    app->add_option("--major", major, "torus major radius")->capture_default_str();
    app->add_option("--minor", minor, "torus minor radius")->capture_default_str();
    app->add_option("--ambient-dim", ambient_dim, "sphere ambient dimension")->capture_default_str();
    app->add_option("--basis", basis, "affine basis vectors, ';'-separated");
    app->add_option("--offset", offset, "affine offset");
    app->add_option("--extent", extent, "affine coefficient half-width")->capture_default_str();
  }
};

std::vector<double>
parse_list(const std::string& text, const char* what)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

ManifoldSpec
build_manifold(const ManifoldFlags& f)
{
  const auto kind = parse_manifold_kind(f.kind);
  if (!kind) {
    throw ConfigError("unknown manifold '" + f.kind + "'");
  }
  try {
    switch (*kind) {
      case ManifoldKind::Circle:
        return ManifoldSpec::circle(f.radius);
      case ManifoldKind::Sphere:
        return ManifoldSpec::sphere(f.radius, f.ambient_dim);
      case ManifoldKind::Torus:
        return ManifoldSpec::torus(f.major, f.minor);
      case ManifoldKind::Affine: {
        const auto offset = parse_list(f.offset, "offset");
        std::vector<std::vector<double>> rows;
        std::stringstream ss(f.basis);
        std::string row;
        while (std::getline(ss, row, ';')) {
          rows.push_back(parse_list(row, "basis"));
        }
        if (rows.empty() || offset.empty()) {
          throw ConfigError("affine manifold needs --basis and --offset");
        }
        Matrix basis(static_cast<Index>(offset.size()), static_cast<Index>(rows.size()));
        for (std::size_t j = 0; j < rows.size(); ++j) {
          if (rows[j].size() != offset.size()) {
            throw ConfigError("basis vectors must match the offset dimension");
          }
          for (std::size_t k = 0; k < offset.size(); ++k) {
            basis(static_cast<Index>(k), static_cast<Index>(j)) = rows[j][k];
          }
        }
        return ManifoldSpec::affine(
          basis, Eigen::Map<const Vector>(offset.data(), static_cast<Index>(offset.size())), f.extent);
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("manifold: ") + e.what());
  }
  throw ConfigError("unsupported manifold");
}

void
write_json(const nlohmann::json& doc, const std::string& path)
{
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput("cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << '\n';
}

void
write_cloud(const PointCloud& cloud, const std::string& path)
{
  if (path.empty() || path == "-") {
    write_points_csv(std::cout, cloud);
  } else {
    write_points_csv(std::filesystem::path(path), cloud);
  }
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Manifold fitting from noisy samples" };
  app.set_version_flag("--version", code_version());
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Sample a synthetic manifold, optionally with noise");
  ManifoldFlags sample_manifold_flags;
  sample_manifold_flags.add_to(sample, true);
  Index sample_n = 0;
  double sample_sigma = 0.0;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  sample->add_option("-n,--count", sample_n, "number of points")->required();
  sample->add_option("--sigma", sample_sigma, "isotropic Gaussian noise level")->capture_default_str();
  sample->add_option("--seed", sample_seed, "random seed")->capture_default_str();
  sample->add_option("--out", sample_out, "output CSV (stdout if omitted)");

  // project
  auto* project = app.add_subcommand("project", "Fit a field to data and project query points onto it");
  std::string proj_data;
  std::string proj_queries;
  std::string proj_method = "ours";
  double proj_r = 0.0;
  int proj_beta = 0;
  Index proj_d = 0;
  std::string proj_out;
  std::string proj_trace;
  double proj_tol_scale = 1e-12;
  int proj_max_iters = 500;
  std::string proj_gradient = "approx_residual";
  double proj_net_scale = 1.0;
  unsigned proj_threads = 1;
  project->add_option("--data", proj_data, "sample CSV")->required();
  project->add_option("--queries", proj_queries, "query CSV")->required();
  project->add_option("--method", proj_method, "ours, cf18 or km17")->capture_default_str();
  project->add_option("--r", proj_r, "bandwidth")->required();
  project->add_option("--beta", proj_beta, "weight exponent (>= 2)")->required();
  project->add_option("--d", proj_d, "intrinsic dimension")->required();
  project->add_option("--out", proj_out, "projected CSV (stdout if omitted)");
  project->add_option("--trace", proj_trace, "trace summary JSON");
  project->add_option("--tolerance-scale", proj_tol_scale, "tolerance in units of r^2")->capture_default_str();
  project->add_option("--max-iters", proj_max_iters, "iteration cap")->capture_default_str();
  project->add_option("--gradient", proj_gradient, "approx_residual or numeric")->capture_default_str();
  project->add_option("--net-scale", proj_net_scale, "cf18 net radius factor")->capture_default_str();
  project->add_option("--threads", proj_threads, "worker threads")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "Hausdorff distance between two clouds or a cloud and a manifold");
  std::string eval_a;
  std::string eval_b;
  ManifoldFlags eval_manifold_flags;
  Index eval_dense = 100000;
  std::uint64_t eval_seed = 0;
  std::string eval_out;
  eval->add_option("a", eval_a, "first CSV")->required();
  eval->add_option("b", eval_b, "second CSV");
  eval_manifold_flags.add_to(eval, false);
  eval->add_option("--dense-count", eval_dense, "manifold sample size for the backward side")
    ->capture_default_str();
  eval->add_option("--seed", eval_seed, "seed of the dense manifold sample")->capture_default_str();
  eval->add_option("--out", eval_out, "report JSON (stdout if omitted)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a configured synthetic benchmark");
  std::string exp_config;
  std::string exp_out;
  unsigned exp_threads = 0;
  std::optional<std::uint64_t> exp_seed;
  experiment->add_option("--config", exp_config, "YAML config file")->required();
  experiment->add_option("--out", exp_out, "output directory (overrides output_dir)");
  experiment->add_option("--threads", exp_threads, "worker threads (overrides the config)");
  experiment->add_option("--seed", exp_seed, "master seed (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sample) {
      const ManifoldSpec spec = build_manifold(sample_manifold_flags);
      if (sample_n < 1) {
        throw ConfigError("--count must be >= 1");
      }
      if (sample_sigma < 0.0) {
        throw ConfigError("--sigma must be nonnegative");
      }
      PointCloud cloud = sample_manifold(spec, sample_n, derive_seed(sample_seed, 1));
      if (sample_sigma > 0.0) {
        cloud = add_gaussian_noise(cloud, { sample_sigma, derive_seed(sample_seed, 2) });
      }
      write_cloud(cloud, sample_out);
    } else if (*project) {
      const auto method = parse_method(proj_method);
      if (!method) {
        throw ConfigError("unknown method '" + proj_method + "'");
      }
      if (proj_gradient != "approx_residual" && proj_gradient != "numeric") {
        throw ConfigError("--gradient must be approx_residual or numeric");
      }
      const PointCloud data = read_points_csv(std::filesystem::path(proj_data));
      const PointCloud queries = read_points_csv(std::filesystem::path(proj_queries));
      if (data.dim() != queries.dim()) {
        throw DimensionError("data has dimension " + std::to_string(data.dim()) + " but queries have " +
                             std::to_string(queries.dim()));
      }
      if (data.empty()) {
        throw InvalidInput("data file has no points");
      }
      FittedField::Options fit_opts;
      fit_opts.beta = proj_beta;
      fit_opts.net_scale = proj_net_scale;
      fit_opts.threads = proj_threads;
      const FittedField field = FittedField::fit(*method, data, proj_r, proj_d, fit_opts);

      SolverOptions opts = SolverOptions::for_radius(proj_r);
      opts.tolerance = proj_tol_scale * proj_r * proj_r;
      opts.max_iters = proj_max_iters;
      opts.gradient_mode = proj_gradient == "numeric" ? GradientMode::Numeric : GradientMode::ApproxResidual;
      const BatchProjection result = project_batch(queries, field, opts, proj_threads);
      write_cloud(result.points, proj_out);

      if (!proj_trace.empty()) {
        StatusCounts counts;
        nlohmann::json points = nlohmann::json::array();
        for (std::size_t i = 0; i < result.traces.size(); ++i) {
          const auto& t = result.traces[i];
          counts.add(t.status);
          points.push_back({ { "index", i },
                             { "status", std::string(to_string(t.status)) },
                             { "accepted_steps", t.accepted_steps() },
                             { "trials", t.iterates.size() },
                             { "initial_objective", t.initial_objective },
                             { "final_objective", t.final_objective() },
                             { "monotone", t.monotone() } });
        }
        write_json({ { "schema_version", kReportSchemaVersion },
                     { "code_version", code_version() },
                     { "method", std::string(to_string(*method)) },
                     { "r", proj_r },
                     { "beta", field.beta() },
                     { "d", proj_d },
                     { "statuses",
                       { { "converged", counts.converged },
                         { "max_iters", counts.max_iters },
                         { "stalled", counts.stalled },
                         { "escaped", counts.escaped },
                         { "unprocessable", counts.unprocessable } } },
                     { "points", points } },
                   proj_trace);
      }
    } else if (*eval) {
      const PointCloud a = read_points_csv(std::filesystem::path(eval_a));
      nlohmann::json doc = { { "schema_version", kReportSchemaVersion }, { "code_version", code_version() } };
      if (!eval_b.empty()) {
        if (!eval_manifold_flags.kind.empty()) {
          throw ConfigError("give either a second CSV or --manifold, not both");
        }
        const PointCloud b = read_points_csv(std::filesystem::path(eval_b));
        if (a.dim() != b.dim()) {
          throw DimensionError("first file has dimension " + std::to_string(a.dim()) + " but second has " +
                               std::to_string(b.dim()));
        }
        doc["hausdorff"] = to_json(hausdorff(a, b));
      } else {
        if (eval_manifold_flags.kind.empty()) {
          throw ConfigError("eval needs a second CSV or --manifold");
        }
        const ManifoldSpec spec = build_manifold(eval_manifold_flags);
        if (a.dim() != spec.ambient_dim) {
          throw DimensionError("cloud has dimension " + std::to_string(a.dim()) + " but the manifold lives in R^" +
                               std::to_string(spec.ambient_dim));
        }
        doc["hausdorff"] = to_json(hausdorff_to_manifold(a, spec, eval_dense, eval_seed));
        doc["dense_count"] = eval_dense;
        doc["seed"] = eval_seed;
      }
      write_json(doc, eval_out);
    } else if (*experiment) {
      ExperimentConfig config = load_config(exp_config);
      if (exp_seed) {
        config.master_seed = *exp_seed;
      }
      const std::string dir = exp_out.empty() ? config.output_dir : exp_out;
      if (dir.empty()) {
        throw ConfigError("no output directory: pass --out or set output_dir");
      }
      RunSettings settings;
      settings.threads = exp_threads;
      const ExperimentReport report = run_experiment(config, settings);
      write_report(report, dir);
      for (const auto& s : report.summary) {
        std::printf("%-5s best lambda %g  median H %.6g  (initial %.6g)\n",
                    std::string(to_string(s.method)).c_str(),
                    s.best_lambda,
                    s.best_median_symmetric,
                    report.median_initial_symmetric);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

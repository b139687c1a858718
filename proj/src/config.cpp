#include "manifit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "manifit/errors.hpp"

namespace manifit {

SolverOptions
SolverSettings::for_radius(double r) const
{
  SolverOptions o;
  o.tolerance = tolerance_scale * r * r;
  o.max_iters = max_iters;
  o.initial_step = initial_step;
  o.backtrack_factor = backtrack_factor;
  o.min_step = min_step;
  o.max_displacement = max_displacement;
  o.gradient_mode = gradient_mode;
  o.armijo = armijo;
  o.gradient_step = gradient_step;
  return o;
}

double
ExperimentConfig::effective_tube_radius() const
{
  return tube_radius.value_or(0.5 * std::sqrt(sigma / static_cast<double>(manifold.ambient_dim)));
}

void
ExperimentConfig::validate() const
{
  try {
    manifold.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("manifold: ") + e.what());
  }
  if (samples < 1) {
    throw ConfigError("samples must be >= 1");
  }
  if (initial_points < 1) {
    throw ConfigError("initial_points must be >= 1");
  }
  if (!(sigma > 0.0)) {
    throw ConfigError("sigma must be positive");
  }
  if (lambda_grid.empty()) {
    throw ConfigError("lambda_grid must be nonempty");
  }
  for (double l : lambda_grid) {
    if (!(l > 0.0)) {
      throw ConfigError("lambda_grid entries must be positive");
    }
  }
  if (methods.empty()) {
    throw ConfigError("methods must name at least one of ours, cf18, km17");
  }
  for (Method m : methods) {
    if (m == Method::Ours && beta < 2) {
      throw ConfigError("beta must be an integer >= 2");
    }
  }
  if (cf18_beta && *cf18_beta < 2) {
    throw ConfigError("cf18.beta must be an integer >= 2");
  }
  if (!(net_scale > 0.0)) {
    throw ConfigError("cf18.net_scale must be positive");
  }
  if (!(km17_fd_step > 0.0)) {
    throw ConfigError("km17.fd_step must be positive");
  }
  if (trials < 1) {
    throw ConfigError("trials must be >= 1");
  }
  if (dense_count < 1) {
    throw ConfigError("dense_count must be >= 1");
  }
  if (!(effective_tube_radius() >= 0.0) || !(effective_tube_radius() < manifold.reach())) {
    throw ConfigError("tube radius must be nonnegative and below the manifold reach");
  }
  try {
    solver.for_radius(1.0).validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
}

namespace {

int
line_of(const YAML::Node& node)
{
  return node.Mark().line >= 0 ? node.Mark().line + 1 : -1;
}

template<class T>
T
read(const YAML::Node& node, const std::string& key)
{
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for '" + key + "'", line_of(node));
  }
}

void
reject_unknown(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where)
{
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "'" + (where.empty() ? "" : " in " + where),
                        line_of(kv.first));
    }
  }
}

YAML::Node
require(const YAML::Node& map, const std::string& key)
{
  const YAML::Node node = map[key];
  if (!node) {
    throw ConfigError("missing required key '" + key + "'", line_of(map));
  }
  return node;
}

template<class T>
void
check(bool ok, const YAML::Node& node, const T& message)
{
  if (!ok) {
    throw ConfigError(message, line_of(node));
  }
}

ManifoldSpec
read_manifold(const YAML::Node& node)
{
  check(node.IsMap(), node, "manifold must be a mapping");
  const auto kind_node = require(node, "kind");
  const auto kind = parse_manifold_kind(read<std::string>(kind_node, "manifold.kind"));
  check(kind.has_value(), kind_node, "manifold.kind must be circle, sphere, torus or affine");
  try {
    switch (*kind) {
      case ManifoldKind::Circle:
        reject_unknown(node, { "kind", "radius" }, "manifold");
        return ManifoldSpec::circle(node["radius"] ? read<double>(node["radius"], "manifold.radius") : 1.0);
      case ManifoldKind::Sphere:
        reject_unknown(node, { "kind", "radius", "ambient_dim" }, "manifold");
        return ManifoldSpec::sphere(
          node["radius"] ? read<double>(node["radius"], "manifold.radius") : 1.0,
          node["ambient_dim"] ? read<Index>(node["ambient_dim"], "manifold.ambient_dim") : 3);
      case ManifoldKind::Torus:
        reject_unknown(node, { "kind", "major", "minor" }, "manifold");
        return ManifoldSpec::torus(read<double>(require(node, "major"), "manifold.major"),
                                   read<double>(require(node, "minor"), "manifold.minor"));
      case ManifoldKind::Affine: {
        reject_unknown(node, { "kind", "basis", "offset", "extent" }, "manifold");
        const auto rows = read<std::vector<std::vector<double>>>(require(node, "basis"), "manifold.basis");
        const auto offset = read<std::vector<double>>(require(node, "offset"), "manifold.offset");
        check(!rows.empty(), node["basis"], "manifold.basis must list at least one vector");
        Matrix basis(static_cast<Index>(offset.size()), static_cast<Index>(rows.size()));
        for (std::size_t j = 0; j < rows.size(); ++j) {
          check(rows[j].size() == offset.size(), node["basis"], "basis vectors must match the offset dimension");
          for (std::size_t k = 0; k < offset.size(); ++k) {
            basis(static_cast<Index>(k), static_cast<Index>(j)) = rows[j][k];
          }
        }
        return ManifoldSpec::affine(basis,
                                    Eigen::Map<const Vector>(offset.data(), static_cast<Index>(offset.size())),
                                    node["extent"] ? read<double>(node["extent"], "manifold.extent") : 1.0);
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("manifold: ") + e.what(), line_of(node));
  }
  throw ConfigError("unsupported manifold", line_of(node));
}

SolverSettings
read_solver(const YAML::Node& node)
{
  check(node.IsMap(), node, "solver must be a mapping");
  reject_unknown(node,
                 { "tolerance_scale", "max_iters", "initial_step", "backtrack_factor", "min_step",
                   "max_displacement", "gradient_mode", "armijo", "gradient_step" },
                 "solver");
  SolverSettings s;
  if (node["tolerance_scale"]) {
    s.tolerance_scale = read<double>(node["tolerance_scale"], "solver.tolerance_scale");
    check(s.tolerance_scale > 0.0, node["tolerance_scale"], "solver.tolerance_scale must be positive");
  }
  if (node["max_iters"]) {
    s.max_iters = read<int>(node["max_iters"], "solver.max_iters");
    check(s.max_iters >= 1, node["max_iters"], "solver.max_iters must be >= 1");
  }
  if (node["initial_step"]) {
    s.initial_step = read<double>(node["initial_step"], "solver.initial_step");
    check(s.initial_step > 0.0, node["initial_step"], "solver.initial_step must be positive");
  }
  if (node["backtrack_factor"]) {
    s.backtrack_factor = read<double>(node["backtrack_factor"], "solver.backtrack_factor");
    check(s.backtrack_factor > 0.0 && s.backtrack_factor < 1.0,
          node["backtrack_factor"],
          "solver.backtrack_factor must lie in (0, 1)");
  }
  if (node["min_step"]) {
    s.min_step = read<double>(node["min_step"], "solver.min_step");
    check(s.min_step > 0.0, node["min_step"], "solver.min_step must be positive");
  }
  if (node["max_displacement"]) {
    s.max_displacement = read<double>(node["max_displacement"], "solver.max_displacement");
    check(s.max_displacement > 0.0, node["max_displacement"], "solver.max_displacement must be positive");
  }
  if (node["gradient_mode"]) {
    const auto mode = read<std::string>(node["gradient_mode"], "solver.gradient_mode");
    check(mode == "approx_residual" || mode == "numeric",
          node["gradient_mode"],
          "solver.gradient_mode must be approx_residual or numeric");
    s.gradient_mode = mode == "numeric" ? GradientMode::Numeric : GradientMode::ApproxResidual;
  }
  if (node["armijo"]) {
    s.armijo = read<double>(node["armijo"], "solver.armijo");
    check(s.armijo >= 0.0 && s.armijo < 1.0, node["armijo"], "solver.armijo must lie in [0, 1)");
  }
  if (node["gradient_step"]) {
    s.gradient_step = read<double>(node["gradient_step"], "solver.gradient_step");
    check(s.gradient_step > 0.0, node["gradient_step"], "solver.gradient_step must be positive");
  }
  return s;
}

} // namespace

ExperimentConfig
parse_config(const std::string& text)
{
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("malformed config: " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  if (!root.IsMap()) {
    throw ConfigError("config must be a mapping of keys to values", 1);
  }
  reject_unknown(root,
                 { "name", "manifold", "samples", "initial_points", "sigma", "lambda_grid", "beta",
                   "methods", "trials", "master_seed", "dense_count", "tube_radius", "cf18", "km17",
                   "solver", "output_dir", "threads" },
                 "");

  ExperimentConfig c;
  if (root["name"]) {
    c.name = read<std::string>(root["name"], "name");
  }
  c.manifold = read_manifold(require(root, "manifold"));

  const auto samples = require(root, "samples");
  c.samples = read<Index>(samples, "samples");
  check(c.samples >= 1, samples, "samples must be >= 1");

  const auto initial = require(root, "initial_points");
  c.initial_points = read<Index>(initial, "initial_points");
  check(c.initial_points >= 1, initial, "initial_points must be >= 1");

  const auto sigma = require(root, "sigma");
  c.sigma = read<double>(sigma, "sigma");
  check(c.sigma > 0.0 && std::isfinite(c.sigma), sigma, "sigma must be positive");

  const auto grid = require(root, "lambda_grid");
  c.lambda_grid = read<std::vector<double>>(grid, "lambda_grid");
  check(!c.lambda_grid.empty(), grid, "lambda_grid must be nonempty");
  for (double l : c.lambda_grid) {
    check(l > 0.0 && std::isfinite(l), grid, "lambda_grid entries must be positive");
  }

  const auto beta = require(root, "beta");
  c.beta = read<int>(beta, "beta");
  check(c.beta >= 2, beta, "beta must be an integer >= 2");

  const auto methods = require(root, "methods");
  check(methods.IsSequence(), methods, "methods must be a list");
  for (const auto& m : methods) {
    const auto parsed = parse_method(read<std::string>(m, "methods"));
    check(parsed.has_value(), m, "unknown method (expected ours, cf18 or km17)");
    c.methods.push_back(*parsed);
  }
  check(!c.methods.empty(), methods, "methods must name at least one of ours, cf18, km17");

  const auto trials = require(root, "trials");
  c.trials = read<Index>(trials, "trials");
  check(c.trials >= 1, trials, "trials must be >= 1");

  c.master_seed = read<std::uint64_t>(require(root, "master_seed"), "master_seed");

  if (root["dense_count"]) {
    c.dense_count = read<Index>(root["dense_count"], "dense_count");
    check(c.dense_count >= 1, root["dense_count"], "dense_count must be >= 1");
  }
  if (root["tube_radius"]) {
    c.tube_radius = read<double>(root["tube_radius"], "tube_radius");
    check(*c.tube_radius >= 0.0 && *c.tube_radius < c.manifold.reach(),
          root["tube_radius"],
          "tube_radius must be nonnegative and below the manifold reach");
  }
  if (const auto cf = root["cf18"]) {
    check(cf.IsMap(), cf, "cf18 must be a mapping");
    reject_unknown(cf, { "beta", "net_scale" }, "cf18");
    if (cf["beta"]) {
      c.cf18_beta = read<int>(cf["beta"], "cf18.beta");
      check(*c.cf18_beta >= 2, cf["beta"], "cf18.beta must be an integer >= 2");
    }
    if (cf["net_scale"]) {
      c.net_scale = read<double>(cf["net_scale"], "cf18.net_scale");
      check(c.net_scale > 0.0, cf["net_scale"], "cf18.net_scale must be positive");
    }
  }
  if (const auto km = root["km17"]) {
    check(km.IsMap(), km, "km17 must be a mapping");
    reject_unknown(km, { "fd_step" }, "km17");
    if (km["fd_step"]) {
      c.km17_fd_step = read<double>(km["fd_step"], "km17.fd_step");
      check(c.km17_fd_step > 0.0, km["fd_step"], "km17.fd_step must be positive");
    }
  }
  if (root["solver"]) {
    c.solver = read_solver(root["solver"]);
  }
  if (root["output_dir"]) {
    c.output_dir = read<std::string>(root["output_dir"], "output_dir");
  }
  if (root["threads"]) {
    c.threads = read<unsigned>(root["threads"], "threads");
  }
  c.validate();
  return c;
}

ExperimentConfig
load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace manifit

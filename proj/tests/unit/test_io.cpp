#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "manifit/config.hpp"
#include "manifit/csv.hpp"
#include "manifit/errors.hpp"
#include "manifit/random.hpp"

using namespace manifit;

namespace {

const char* const kMinimal = R"(name: tiny
manifold:
  kind: circle
  radius: 1.0
samples: 100
initial_points: 50
sigma: 0.01
lambda_grid: [2]
beta: 3
methods: [ours]
trials: 2
master_seed: 5
)";

} // namespace

TEST(Csv, RoundTripIsBitExact)
{
  Philox rng(3);
  Matrix m(3, 200);
  for (Index i = 0; i < m.size(); ++i) {
    m.data()[i] = rng.normal() * std::pow(10.0, static_cast<double>(static_cast<int>(rng() % 40) - 20));
  }
  m(0, 0) = 0.1;
  m(1, 0) = -0.0;
  m(2, 0) = std::numeric_limits<double>::denorm_min();
  m(0, 1) = std::numeric_limits<double>::max();
  const PointCloud cloud(m);
  std::stringstream ss;
  write_points_csv(ss, cloud);
  const auto back = read_points_csv(ss);
  EXPECT_EQ(back, cloud);
  EXPECT_TRUE(std::signbit(back.point(0)[1]));
}

TEST(Csv, HeaderAndFormat)
{
  std::stringstream ss;
  write_points_csv(ss, PointCloud::from_rows({ { 1.0, 0.5 } }));
  EXPECT_EQ(ss.str(), "x0,x1\n1,0.5\n");
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Csv, ParseErrorsCarryRowAndColumn)
{
  const auto fails_at = [](const std::string& text, std::size_t row, std::size_t col) {
    std::stringstream ss(text);
    try {
      read_points_csv(ss);
    } catch (const ParseError& e) {
      EXPECT_EQ(e.row(), row) << text;
      EXPECT_EQ(e.column(), col) << text;
      return;
    }
    ADD_FAILURE() << "no ParseError for: " << text;
  };
  fails_at("x0,x1\n1,2\n3,abc\n", 3, 2);
  fails_at("x0,x1\n1,2\n3\n", 3, 2);
  fails_at("x0,y\n1,2\n", 1, 2);
  fails_at("x0,x1\n1,2,3\n", 2, 3);
  fails_at("x0,x1\nnan,2\n", 2, 1);
  fails_at("", 1, 0);
}

TEST(Csv, HeaderOnlyIsAnEmptyCloud)
{
  std::stringstream ss("x0,x1,x2\n");
  const auto cloud = read_points_csv(ss);
  EXPECT_TRUE(cloud.empty());
  EXPECT_EQ(cloud.dim(), 3);
}

TEST(Config, ParsesMinimalConfig)
{
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.name, "tiny");
  EXPECT_EQ(c.manifold.kind, ManifoldKind::Circle);
  EXPECT_EQ(c.samples, 100);
  EXPECT_EQ(c.initial_points, 50);
  EXPECT_EQ(c.lambda_grid, std::vector<double>{ 2.0 });
  EXPECT_EQ(c.methods, std::vector<Method>{ Method::Ours });
  EXPECT_EQ(c.trials, 2);
  EXPECT_EQ(c.master_seed, 5u);
  EXPECT_FALSE(c.cf18_beta.has_value());
  EXPECT_EQ(c.solver.armijo, 0.1);
  EXPECT_NEAR(c.effective_tube_radius(), 0.5 * std::sqrt(0.01 / 2), 1e-15);
}

TEST(Config, RejectsBadInput)
{
  std::string empty_methods = kMinimal;
  empty_methods.replace(empty_methods.find("[ours]"), 6, "[]");
  EXPECT_THROW(parse_config(empty_methods), ConfigError);

  try {
    parse_config(std::string(kMinimal) + "colour: blue\n");
    ADD_FAILURE() << "unknown key accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 13);
  }

  std::string bad_sigma = kMinimal;
  bad_sigma.replace(bad_sigma.find("0.01"), 4, "abc");
  try {
    parse_config(bad_sigma);
    ADD_FAILURE() << "bad sigma accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 7);
  }

  std::string no_trials = kMinimal;
  no_trials.erase(no_trials.find("trials: 2\n"), 10);
  EXPECT_THROW(parse_config(no_trials), ConfigError);

  std::string wide_tube = std::string(kMinimal) + "tube_radius: 1.5\n";
  EXPECT_THROW(parse_config(wide_tube), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config("a: [1, 2"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST(Config, RepositoryConfigsLoad)
{
  const auto c = load_config(std::string(MANIFIT_CONFIG_DIR) + "/circle_sigma001.yaml");
  EXPECT_EQ(c.samples, 1000);
  EXPECT_EQ(c.initial_points, 1000);
  EXPECT_EQ(c.trials, 20);
  EXPECT_EQ(c.sigma, 0.01);
  EXPECT_EQ(c.lambda_grid, (std::vector<double>{ 1, 2, 3, 4 }));
  EXPECT_EQ(c.methods.size(), 3u);
  const auto c4 = load_config(std::string(MANIFIT_CONFIG_DIR) + "/circle_sigma004.yaml");
  EXPECT_EQ(c4.sigma, 0.04);
  EXPECT_EQ(c4.master_seed, c.master_seed);
}

#include <gtest/gtest.h>

#include <set>

#include "clustergeo/errors.hpp"
#include "clustergeo/generator.hpp"
#include "clustergeo/suite.hpp"

using namespace clustergeo;

TEST(Generator, Deterministic) {
  GeneratorParams params;
  params.seed = 17;
  EXPECT_EQ(dump_cluster(generate(params)), dump_cluster(generate(params)));
  params.seed = 18;
  GeneratorParams other = params;
  other.seed = 19;
  EXPECT_NE(dump_cluster(generate(params)), dump_cluster(generate(other)));
}

TEST(Generator, SingleVertex) {
  GeneratorParams params;
  params.t_min = 1;
  params.t_max = 1;
  const Cluster c = validate(generate(params));
  EXPECT_EQ(c.vertex_count(), 1u);
  EXPECT_EQ(c.edge_count(), 0u);
}

TEST(Generator, ChainShape) {
  GeneratorParams params = default_chain_params();
  params.seed = 5;
  const Cluster c = validate(generate(params));
  for (std::size_t v = 0; v < c.vertex_count(); ++v) EXPECT_LE(c.neighbors(static_cast<int>(v)).size(), 2u);
}

// Property: every generated instance validates, across parameter mixes.
TEST(GeneratorProperty, AlwaysValid) {
  Rng pick(3);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GeneratorParams params;
    params.seed = seed;
    params.t_min = static_cast<int>(pick.uniform(1, 4));
    params.t_max = params.t_min + static_cast<int>(pick.uniform(0, 5));
    params.tree_edges_max = static_cast<int>(pick.uniform(1, 20));
    params.chain = pick.chance(30);
    params.overlap_percent = pick.chance(30) ? 50 : 0;
    const ClusterSpec spec = generate(params);
    ASSERT_NO_THROW(validate(spec)) << "seed " << seed;
    const Cluster c = validate(spec);
    ASSERT_GE(static_cast<int>(c.vertex_count()), params.t_min);
    ASSERT_LE(static_cast<int>(c.vertex_count()), params.t_max);
  }
}

TEST(Generator, ParamsValidation) {
  GeneratorParams params;
  params.t_min = 3;
  params.t_max = 2;
  EXPECT_THROW(check_params(params), ValidationError);
  params = GeneratorParams{};
  params.slack = 1;
  EXPECT_THROW(check_params(params), ValidationError);
  params = GeneratorParams{};
  params.length_min = 0;
  EXPECT_THROW(check_params(params), ValidationError);
  EXPECT_NO_THROW(check_params(GeneratorParams{}));
}

TEST(Seeds, DerivedStreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t stream = 1; stream <= 4; ++stream) {
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(42, stream, i));
  }
  EXPECT_EQ(seen.size(), 200u);
  EXPECT_EQ(derive_seed(42, 1, 0), derive_seed(42, 1, 0));
  EXPECT_NE(derive_seed(42, 1, 0), derive_seed(43, 1, 0));
}

TEST(Config, ParseErrors) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), ParseError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"suites": ["nope"]})")), ParseError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"corpus": {"instances": "many"}})")), ParseError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"corpus": {"generator": {"t_mn": 2}}})")), ParseError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"k_obs": "x"})")), ParseError);
  const auto cfg = config_from_json(nlohmann::json::parse(R"({"seed": 7, "k_obs": "3/2", "suites": ["tree-graded"]})"));
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.k_obs, Rational(3, 2));
  EXPECT_EQ(cfg.suites, std::vector<std::string>{"tree-graded"});
}

TEST(Suites, EmptySelectionPasses) {
  SuiteConfig cfg;
  cfg.suites = {};
  const auto report = run_suites(cfg);
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_TRUE(report["suites"].empty());
  EXPECT_EQ(report["schema_version"], kReportSchemaVersion);
}

namespace {

SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.corpus_instances = 4;
  cfg.triples = 3;
  cfg.pairs = 4;
  cfg.subpath_pairs = 2;
  cfg.oracle_instances = 2;
  cfg.oracle_pairs = 2;
  cfg.chain_instances = 3;
  cfg.graphs = 10;
  cfg.iso_pairs = 4;
  cfg.iso_spot_checks = 5;
  return cfg;
}

}  // namespace

TEST(Suites, SmallReportIsDeterministic) {
  const SuiteConfig cfg = small_config();
  const auto a = run_suites(cfg);
  const auto b = run_suites(cfg);
  EXPECT_TRUE(a["pass"].get<bool>()) << a.dump(2);
  EXPECT_TRUE(a.contains("timing"));
  EXPECT_EQ(strip_timing(a).dump(), strip_timing(b).dump());
  EXPECT_FALSE(strip_timing(a).contains("timing"));
  for (const auto& name : known_suites()) EXPECT_TRUE(a["suites"].contains(name)) << name;
}

TEST(Suites, InjectedFaultIsReported) {
  SuiteConfig cfg = small_config();
  cfg.suites = {"isomorphism"};
  cfg.fault = "isomorphism-edge-length";
  const auto report = run_suites(cfg);
  EXPECT_FALSE(report["pass"].get<bool>());
  const auto& suite = report["suites"]["isomorphism"];
  EXPECT_FALSE(suite["pass"].get<bool>());
  ASSERT_GE(suite["failure_count"].get<int>(), 1);
  const auto& failure = suite["failures"][0];
  EXPECT_EQ(failure["instance"], 0);
  EXPECT_TRUE(failure.contains("cluster"));
}

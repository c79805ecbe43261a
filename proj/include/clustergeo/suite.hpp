#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clustergeo/generator.hpp"
#include "json.hpp"

namespace clustergeo {

inline constexpr int kReportSchemaVersion = 1;

inline GeneratorParams default_corpus_params() {
  GeneratorParams p;
  p.t_min = 3;
  return p;
}

// Small enough for the grid oracle to stay well under its node cap.
inline GeneratorParams default_oracle_params() {
  GeneratorParams p;
  p.t_max = 3;
  p.tree_edges_min = 2;
  p.tree_edges_max = 5;
  p.length_min = 2;
  p.length_max = 4;
  p.length_den = 2;
  p.range_shift = 1;
  return p;
}

inline GeneratorParams default_chain_params() {
  GeneratorParams p;
  p.chain = true;
  p.t_min = 6;
  p.t_max = 8;
  p.tree_edges_max = 12;
  return p;
}

inline GeneratorParams default_iso_params() {
  GeneratorParams p;
  p.t_max = 4;
  p.tree_edges_max = 8;
  return p;
}

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names{"metric-axioms", "bilipschitz",  "oracle-agreement",
                                              "remark-nice",   "tree-graded", "isomorphism"};
  return names;
}

struct SuiteConfig {
  std::uint64_t seed = 42;
  Rational k_obs = 1;
  std::vector<std::string> suites = known_suites();

  // Shared by metric-axioms and bilipschitz.
  GeneratorParams corpus = default_corpus_params();
  int corpus_instances = 500;
  int triples = 50;
  int pairs = 100;
  int subpath_pairs = 10;  // pairs per instance whose sub-paths are checked

  GeneratorParams oracle_corpus = default_oracle_params();
  int oracle_instances = 50;
  int oracle_pairs = 20;
  std::size_t node_cap = 200000;

  GeneratorParams chain_corpus = default_chain_params();
  int chain_instances = 100;

  int graphs = 300;
  int graph_max_vertices = 12;

  GeneratorParams iso_corpus = default_iso_params();
  int iso_pairs = 200;
  int iso_spot_checks = 100;

  // "isomorphism-edge-length": lengthen a tree edge of the first planted copy
  // while still expecting an isomorphism.
  std::string fault;
};

// Missing keys keep their defaults. ParseError on unknown suites or bad values.
SuiteConfig config_from_json(const nlohmann::json& doc);
SuiteConfig load_config(const std::string& path);
GeneratorParams params_from_json(const nlohmann::json& doc, GeneratorParams base);

// Seed of item `index` of stream `stream`, derived from the master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// {"schema_version", "seed", "pass", "suites": {name: {...}}, "timing": {...}}.
// Everything outside "timing" is a function of the config.
nlohmann::json run_suites(const SuiteConfig& config);

// Report without the timing field, for determinism comparisons.
nlohmann::json strip_timing(nlohmann::json report);

}  // namespace clustergeo

// clustergeo: command-line access to the cluster, tree-graded and isomorphism
// operations. Exit codes: 0 success, 1 failed validation or assertion, 2 usage
// or parse error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "clustergeo/cluster.hpp"
#include "clustergeo/cluster_iso.hpp"
#include "clustergeo/distance_oracle.hpp"
#include "clustergeo/errors.hpp"
#include "clustergeo/generator.hpp"
#include "clustergeo/special_path.hpp"
#include "clustergeo/suite.hpp"
#include "clustergeo/tree_graded.hpp"

namespace cg = clustergeo;
using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw cg::ParseError("cannot write " + out);
  file << text;
}

void emit(const json& doc, const std::string& out) { emit(doc.dump(2) + "\n", out); }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cg::ParseError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& err) {
    throw cg::ParseError(path + ": " + err.what());
  }
}

// "vertex:edge:offset:height" with external vertex id and piece-tree edge index.
cg::ClusterPoint parse_point(const cg::Cluster& c, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() != 4) throw cg::ParseError("point '" + text + "' is not vertex:edge:offset:height");
  int vertex = 0, edge = 0;
  try {
    std::size_t used = 0;
    vertex = std::stoi(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    edge = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
  } catch (const std::logic_error&) {
    throw cg::ParseError("point '" + text + "' has a non-integer vertex or edge");
  }
  return c.point(vertex, edge, cg::parse_rational(parts[2]), cg::parse_rational(parts[3]));
}

json profile_json(const cg::Cluster& c, const cg::CrossingProfile& p) {
  json vertices = json::array(), s = json::array(), h = json::array();
  for (int v : p.vertices) vertices.push_back(c.vertex_id(v));
  for (const auto& x : p.s) s.push_back(cg::to_string(x));
  for (const auto& x : p.h) h.push_back(cg::to_string(x));
  return {{"vertices", vertices}, {"s", s}, {"h", h}};
}

json path_json(const cg::Cluster& c, const cg::SpecialPath& path) {
  json vertices = json::array(), segments = json::array();
  for (int v : path.vertices) vertices.push_back(c.vertex_id(v));
  for (const auto& seg : path.segments) {
    segments.push_back({{"vertex", c.vertex_id(seg.vertex)},
                        {"entry", cg::point_to_json(c, seg.entry)},
                        {"exit", cg::point_to_json(c, seg.exit)}});
  }
  return {{"vertices", vertices}, {"segments", segments}, {"length", cg::to_string(path.length)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact geometry of glued flip clusters"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string config, out, eps_text, file_a, file_b, point_x, point_y;
  std::size_t cap = cg::kDefaultNodeCap;

  auto* gen = app.add_subcommand("generate", "Print a generated cluster");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--config", config, "Generator parameters (JSON)")->check(CLI::ExistingFile);
  gen->add_option("--out", out, "Output file");

  auto* val = app.add_subcommand("validate", "Check a cluster file");
  val->add_option("cluster", file_a)->required();

  auto* dist = app.add_subcommand("dist", "Exact distance (and grid distance with --eps)");
  dist->add_option("cluster", file_a)->required();
  dist->add_option("x", point_x, "vertex:edge:offset:height")->required();
  dist->add_option("y", point_y, "vertex:edge:offset:height")->required();
  dist->add_option("--eps", eps_text, "Grid spacing, or 'default'");
  dist->add_option("--cap", cap, "Grid node cap");
  dist->add_option("--out", out, "Output file");

  auto* sp = app.add_subcommand("special-path", "Special path between two points");
  sp->add_option("cluster", file_a)->required();
  sp->add_option("x", point_x)->required();
  sp->add_option("y", point_y)->required();
  sp->add_option("--out", out, "Output file");

  auto* blk = app.add_subcommand("blocks", "Block decomposition of a weighted graph");
  blk->add_option("graph", file_a)->required();
  blk->add_option("--out", out, "Output file");

  auto* iso = app.add_subcommand("iso", "Search for a structure-preserving isometry");
  iso->add_option("first", file_a)->required();
  iso->add_option("second", file_b)->required();
  iso->add_option("--out", out, "Output file");

  auto* suite = app.add_subcommand("suite", "Run verification suites");
  suite->add_option("--config", config, "Suite configuration (JSON)")->check(CLI::ExistingFile);
  suite->add_option("--seed", seed, "Override the master seed");
  suite->add_option("--out", out, "Report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      cg::GeneratorParams params;
      if (!config.empty()) params = cg::params_from_json(read_json(config), params);
      if (seed) params.seed = *seed;
      emit(cg::dump_cluster(cg::generate(params)), out);
    } else if (*val) {
      const cg::Cluster c = cg::validate(cg::load_cluster_file(file_a));
      std::cout << "valid: " << c.vertex_count() << " vertices, " << c.edge_count() << " edges\n";
    } else if (*dist) {
      const cg::Cluster c = cg::validate(cg::load_cluster_file(file_a));
      const auto x = parse_point(c, point_x), y = parse_point(c, point_y);
      const auto exact = cg::exact_distance(c, x, y);
      json doc{{"exact", cg::to_string(exact.value)}, {"profile", profile_json(c, exact.profile)}};
      if (!eps_text.empty()) {
        const cg::Rational eps = eps_text == "default" ? cg::default_epsilon(c) : cg::parse_rational(eps_text);
        if (eps <= 0) throw cg::ParseError("--eps must be positive");
        doc["eps"] = cg::to_string(eps);
        doc["discretized"] = cg::to_string(cg::discretized_distance(c, x, y, eps, cap));
      }
      emit(doc, out);
    } else if (*sp) {
      const cg::Cluster c = cg::validate(cg::load_cluster_file(file_a));
      const auto path = cg::special_path(c, parse_point(c, point_x), parse_point(c, point_y));
      emit(path_json(c, path), out);
    } else if (*blk) {
      const cg::FiniteGraph g = cg::graph_from_json(read_json(file_a));
      emit(cg::to_json(g, cg::blocks(g)), out);
    } else if (*iso) {
      const cg::Cluster c = cg::validate(cg::load_cluster_file(file_a));
      const cg::Cluster c2 = cg::validate(cg::load_cluster_file(file_b));
      const auto found = cg::isomorphic(c, c2);
      json doc{{"isomorphic", found.has_value()}};
      if (found) doc["witness"] = cg::iso_to_json(c, c2, *found);
      emit(doc, out);
    } else if (*suite) {
      cg::SuiteConfig cfg = config.empty() ? cg::SuiteConfig{} : cg::load_config(config);
      if (seed) cfg.seed = *seed;
      const json report = cg::run_suites(cfg);
      emit(report, out);
      for (const auto& [name, result] : report.at("suites").items()) {
        std::cerr << name << ": " << (result.at("pass").get<bool>() ? "pass" : "FAIL") << "\n";
      }
      return report.at("pass").get<bool>() ? 0 : 1;
    }
  } catch (const cg::ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const cg::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

#include "clustergeo/suite.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "clustergeo/cluster_iso.hpp"
#include "clustergeo/distance_oracle.hpp"
#include "clustergeo/errors.hpp"
#include "clustergeo/special_path.hpp"
#include "clustergeo/tree_graded.hpp"

namespace clustergeo {

using nlohmann::json;

namespace {

constexpr std::size_t kKeptFailures = 5;

enum Stream : std::uint64_t {
  kCorpus = 1,
  kAxiomPoints,
  kBilipschitzPoints,
  kOracleCorpus,
  kOraclePoints,
  kChainCorpus,
  kChainPoints,
  kGraphs,
  kIsoCorpus,
  kIsoCopies,
  kIsoPoints,
};

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw ParseError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

void read_rational(const json& doc, const char* key, Rational& out) {
  if (!doc.contains(key)) return;
  const auto& v = doc.at(key);
  out = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
}

void read_positive(const json& doc, const char* key, int& out) {
  read(doc, key, out);
  if (out < 0) throw ParseError(std::string(key) + " must be non-negative");
}

// Failures keep the first few reproductions in full and count the rest.
struct Recorder {
  json kept = json::array();
  std::size_t count = 0;

  void fail(json record) {
    ++count;
    if (kept.size() < kKeptFailures) kept.push_back(std::move(record));
  }
  void finish(json& out) const {
    out["failure_count"] = count;
    out["failures"] = kept;
  }
};

json repro(const std::string& operation, std::size_t instance, const ClusterSpec& spec, json inputs,
           const std::string& detail) {
  return {{"operation", operation}, {"instance", instance}, {"inputs", std::move(inputs)},
          {"detail", detail},       {"cluster", to_json(spec)}};
}

json points_json(const Cluster& c, std::initializer_list<ClusterPoint> points) {
  json out = json::array();
  for (const auto& p : points) out.push_back(point_to_json(c, p));
  return out;
}

json hops_json(const std::map<std::size_t, std::size_t>& hops) {
  json out = json::object();
  for (const auto& [n, count] : hops) out[std::to_string(n)] = count;
  return out;
}

GeneratorParams instance_params(GeneratorParams params, const SuiteConfig& cfg, Stream stream, std::size_t i) {
  params.seed = derive_seed(cfg.seed, stream, i);
  return params;
}

json metric_axioms(const SuiteConfig& cfg) {
  Recorder rec;
  std::size_t triples = 0, symmetry = 0, triangle = 0, identity = 0;
  for (int i = 0; i < cfg.corpus_instances; ++i) {
    const ClusterSpec spec = generate(instance_params(cfg.corpus, cfg, kCorpus, i));
    const Cluster c = validate(spec);
    Rng rng(derive_seed(cfg.seed, kAxiomPoints, i));
    for (int k = 0; k < cfg.triples; ++k) {
      const ClusterPoint x = random_point(c, rng), y = random_point(c, rng), z = random_point(c, rng);
      const json inputs = points_json(c, {x, y, z});
      try {
        const Rational dxy = exact_distance(c, x, y).value;
        const Rational dyx = exact_distance(c, y, x).value;
        const Rational dyz = exact_distance(c, y, z).value;
        const Rational dxz = exact_distance(c, x, z).value;
        ++triples;
        if (dxy != dyx) {
          ++symmetry;
          rec.fail(repro("symmetry", i, spec, inputs, to_string(dxy) + " vs " + to_string(dyx)));
        }
        if (dxz > dxy + dyz) {
          ++triangle;
          rec.fail(repro("triangle", i, spec, inputs, to_string(dxz) + " > " + to_string(dxy + dyz)));
        }
        if ((dxy == 0) != (x == y)) {
          ++identity;
          rec.fail(repro("identity", i, spec, inputs, "d(x,y) = " + to_string(dxy)));
        }
      } catch (const Error& err) {
        rec.fail(repro("exact_distance", i, spec, inputs, err.what()));
      }
    }
  }
  json out{{"instances", cfg.corpus_instances},
           {"triples", triples},
           {"symmetry_failures", symmetry},
           {"triangle_failures", triangle},
           {"identity_failures", identity}};
  rec.finish(out);
  out["pass"] = rec.count == 0;
  return out;
}

json bilipschitz(const SuiteConfig& cfg) {
  Recorder rec;
  std::size_t pairs = 0, overflow = 0, lower = 0, sub_checks = 0, sub_mismatch = 0, gluing = 0;
  std::size_t star_terms = 0, star_violations = 0;
  Rational max_ratio = 1, sub_max = 1;
  json attaining;
  std::map<std::size_t, std::size_t> hops;  // Bass-Serre length of the special path
  for (int i = 0; i < cfg.corpus_instances; ++i) {
    const ClusterSpec spec = generate(instance_params(cfg.corpus, cfg, kCorpus, i));
    const Cluster c = validate(spec);
    Rng rng(derive_seed(cfg.seed, kBilipschitzPoints, i));
    for (int k = 0; k < cfg.pairs; ++k) {
      const ClusterPoint x = random_point(c, rng), y = random_point(c, rng);
      const json inputs = points_json(c, {x, y});
      try {
        const auto r = verify_bilipschitz(c, {{x, y}}, k < cfg.subpath_pairs ? 1 : 0);
        pairs += r.pairs;
        if (r.overflow_count) {
          overflow += r.overflow_count;
          rec.fail(repro("special_path", i, spec, inputs, "segment overflow"));
          continue;
        }
        if (r.lower_bound_violations) {
          lower += r.lower_bound_violations;
          rec.fail(repro("lower_bound", i, spec, inputs, "special path shorter than the distance"));
        }
        if (attaining.is_null() || r.max_ratio > max_ratio) {
          max_ratio = r.max_ratio;
          attaining = {{"instance", i}, {"pair", k}, {"points", inputs}};
        }
        if (r.max_ratio > cfg.k_obs) rec.fail(repro("ratio", i, spec, inputs, to_string(r.max_ratio)));
        sub_checks += r.subpath_checks;
        sub_max = max_of(sub_max, r.subpath_max_ratio);
        if (r.subpath_mismatches) {
          sub_mismatch += r.subpath_mismatches;
          rec.fail(repro("subpath_structure", i, spec, inputs, "sub-path differs from the special path of its ends"));
        }
        if (r.subpath_max_ratio > cfg.k_obs) {
          rec.fail(repro("subpath_ratio", i, spec, inputs, to_string(r.subpath_max_ratio)));
        }

        const SpecialPath path = special_path(c, x, y);
        ++hops[path.vertices.size() - 1];
        try {
          check_gluing(c, path);
        } catch (const Error& err) {
          ++gluing;
          rec.fail(repro("gluing", i, spec, inputs, err.what()));
        }
        const auto terms = star_audit(c, path, x, y);
        for (std::size_t t = 0; t < terms.size(); ++t) {
          ++star_terms;
          if (terms[t].lhs > terms[t].rhs) {
            ++star_violations;
            rec.fail(repro("star_audit", i, spec, inputs,
                           "term " + std::to_string(t) + ": " + to_string(terms[t].lhs) + " > " +
                               to_string(terms[t].rhs)));
          }
        }
      } catch (const Error& err) {
        rec.fail(repro("bilipschitz", i, spec, inputs, err.what()));
      }
    }
  }
  json out{{"instances", cfg.corpus_instances},
           {"pairs", pairs},
           {"k_obs", to_string(cfg.k_obs)},
           {"overflow_count", overflow},
           {"lower_bound_violations", lower},
           {"max_ratio", to_string(max_ratio)},
           {"attaining", attaining},
           {"subpath_checks", sub_checks},
           {"subpath_mismatches", sub_mismatch},
           {"subpath_max_ratio", to_string(sub_max)},
           {"gluing_failures", gluing},
           {"path_hops", hops_json(hops)},
           {"star_audit", {{"terms", star_terms}, {"violations", star_violations}, {"pass", star_violations == 0}}}};
  rec.finish(out);
  out["pass"] = rec.count == 0;
  return out;
}

json oracle_agreement(const SuiteConfig& cfg) {
  Recorder rec;
  // Deviation in units of eps * (n + 1).
  const std::vector<std::pair<std::string, Rational>> bins{
      {"0", 0}, {"<=1/2", Rational(1, 2)}, {"<=1", 1}, {"<=2", 2}};
  std::vector<std::size_t> histogram(bins.size() + 1, 0);
  std::size_t pairs = 0, out_of_bound = 0, below = 0, capped = 0;
  Rational worst = 0;
  for (int i = 0; i < cfg.oracle_instances; ++i) {
    const ClusterSpec spec = generate(instance_params(cfg.oracle_corpus, cfg, kOracleCorpus, i));
    const Cluster c = validate(spec);
    const Rational eps = default_epsilon(c);
    Rng rng(derive_seed(cfg.seed, kOraclePoints, i));
    for (int k = 0; k < cfg.oracle_pairs; ++k) {
      const ClusterPoint x = random_point(c, rng), y = random_point(c, rng);
      const json inputs = points_json(c, {x, y});
      try {
        const ExactDistance exact = exact_distance(c, x, y);
        const Rational grid = discretized_distance(c, x, y, eps, cfg.node_cap);
        ++pairs;
        const int n = static_cast<int>(exact.profile.vertices.size()) - 1;
        const Rational unit = eps * (n + 1);
        const Rational dev = abs_diff(grid, exact.value);
        const Rational scaled = dev / unit;
        worst = max_of(worst, scaled);
        std::size_t b = 0;
        while (b < bins.size() && scaled > bins[b].second) ++b;
        ++histogram[b];
        if (grid < exact.value) {
          ++below;
          rec.fail(repro("grid_below_exact", i, spec, inputs, to_string(grid) + " < " + to_string(exact.value)));
        }
        if (dev > kDiscretizationSlack * unit) {
          ++out_of_bound;
          rec.fail(repro("discretization_bound", i, spec, inputs,
                         "|" + to_string(grid) + " - " + to_string(exact.value) + "| > " +
                             to_string(kDiscretizationSlack * unit)));
        }
      } catch (const CapExceeded& err) {
        ++capped;
        rec.fail(repro("discretized_distance", i, spec, inputs, err.what()));
      } catch (const Error& err) {
        rec.fail(repro("oracle_agreement", i, spec, inputs, err.what()));
      }
    }
  }
  json hist = json::object();
  for (std::size_t b = 0; b < bins.size(); ++b) hist[bins[b].first] = histogram[b];
  hist[">2"] = histogram.back();
  json out{{"instances", cfg.oracle_instances}, {"pairs", pairs},
           {"slack", kDiscretizationSlack},     {"node_cap", cfg.node_cap},
           {"cap_exceeded", capped},            {"below_exact", below},
           {"out_of_bound", out_of_bound},      {"max_scaled_deviation", to_string(worst)},
           {"histogram", hist}};
  rec.finish(out);
  out["pass"] = rec.count == 0;
  return out;
}

bool same_segment(const PathSegment& s, const PathSegment& t) {
  if (s.vertex != t.vertex) return false;
  return (s.entry == t.entry && s.exit == t.exit) || (s.entry == t.exit && s.exit == t.entry);
}

json remark_nice(const SuiteConfig& cfg) {
  Recorder rec;
  std::size_t compared = 0, mismatches = 0, unsampled = 0;
  for (int i = 0; i < cfg.chain_instances; ++i) {
    const ClusterSpec spec = generate(instance_params(cfg.chain_corpus, cfg, kChainCorpus, i));
    const Cluster c = validate(spec);
    const int n = static_cast<int>(c.vertex_count());
    if (n < 6) {
      rec.fail(repro("remark_nice", i, spec, json::array(), "chain has fewer than 6 vertices"));
      continue;
    }
    Rng rng(derive_seed(cfg.seed, kChainPoints, i));
    const int v = static_cast<int>(rng.uniform(2, n - 3));
    // Two special paths whose end vertices are at distance >= 2 from v on
    // either side of it.
    std::vector<std::pair<PointPair, SpecialPath>> paths;
    for (int attempt = 0; attempt < 100 && paths.size() < 2; ++attempt) {
      ClusterPoint x = random_point(c, rng, static_cast<int>(rng.uniform(0, v - 2)));
      ClusterPoint y = random_point(c, rng, static_cast<int>(rng.uniform(v + 2, n - 1)));
      if (rng.chance(50)) std::swap(x, y);
      const auto [a, b] = special_path_ends(c, x, y);
      if (c.tree_distance(a, v) < 2 || c.tree_distance(b, v) < 2) continue;
      if (c.tree_distance(a, v) + c.tree_distance(v, b) != c.tree_distance(a, b)) continue;
      try {
        paths.push_back({{x, y}, special_path(c, x, y)});
      } catch (const Error& err) {
        rec.fail(repro("special_path", i, spec, points_json(c, {x, y}), err.what()));
      }
    }
    if (paths.size() < 2) {
      ++unsampled;
      rec.fail(repro("remark_nice", i, spec, json::array(), "could not sample two paths through the deep vertex"));
      continue;
    }
    const auto& [p1, path1] = paths[0];
    const auto& [p2, path2] = paths[1];
    const json inputs = points_json(c, {p1.first, p1.second, p2.first, p2.second});
    const auto s1 = segment_at(path1, v);
    const auto s2 = segment_at(path2, v);
    ++compared;
    if (!s1 || !s2 || !same_segment(*s1, *s2)) {
      ++mismatches;
      rec.fail(repro("segment_at", i, spec, inputs, "Q_v segments differ at vertex " + std::to_string(c.vertex_id(v))));
    }
  }
  json out{{"instances", cfg.chain_instances},
           {"compared", compared},
           {"mismatches", mismatches},
           {"unsampled", unsampled}};
  rec.finish(out);
  out["pass"] = rec.count == 0;
  return out;
}

json tree_graded(const SuiteConfig& cfg) {
  Recorder rec;
  std::size_t block_mismatch = 0, t_failures = 0, cut_mismatch = 0, tree_failures = 0;
  for (int g = 0; g < cfg.graphs; ++g) {
    Rng rng(derive_seed(cfg.seed, kGraphs, g));
    const FiniteGraph graph = random_graph(rng, cfg.graph_max_vertices);
    auto record = [&](const std::string& op, const std::string& detail) {
      rec.fail({{"operation", op}, {"instance", g}, {"detail", detail}, {"graph", to_json(graph)}});
    };
    const BlockDecomposition d = blocks(graph);
    auto brute = brute_force_blocks(graph);
    std::sort(brute.begin(), brute.end());
    if (d.blocks != brute) {
      ++block_mismatch;
      record("blocks", "differs from exhaustive decomposition");
    }
    const TreeGradedReport report = check_T1_T2(graph, d.blocks);
    if (!report.cover || !report.t1 || !report.t2) {
      ++t_failures;
      record("check_T1_T2", report.cover ? (report.t1 ? "T2" : "T1") : "cover");
    }
    std::vector<int> membership(graph.vertex_count(), 0);
    for (const auto& b : d.blocks) {
      for (int v : b) ++membership[v];
    }
    std::vector<int> multi;
    for (int v = 0; v < static_cast<int>(graph.vertex_count()); ++v) {
      if (membership[v] >= 2) multi.push_back(v);
    }
    if (cut_points(graph) != multi || d.cut_vertices != multi) {
      ++cut_mismatch;
      record("cut_points", "cut points differ from multi-block vertices");
    }
    // The block-cut graph must be a tree.
    const std::size_t nodes = d.blocks.size() + d.cut_vertices.size();
    if (d.block_cut_tree.size() + 1 != nodes) {
      ++tree_failures;
      record("block_cut_tree", "edge count is not nodes - 1");
    }
  }
  json out{{"graphs", cfg.graphs},
           {"max_vertices", cfg.graph_max_vertices},
           {"block_mismatches", block_mismatch},
           {"t1_t2_failures", t_failures},
           {"cut_point_mismatches", cut_mismatch},
           {"block_cut_tree_failures", tree_failures}};
  rec.finish(out);
  out["pass"] = rec.count == 0;
  return out;
}

json isomorphism(const SuiteConfig& cfg) {
  Recorder rec;
  std::size_t agree = 0, disagree = 0, wrong = 0, not_good = 0, spot = 0, spot_fail = 0, witnesses = 0;
  for (int p = 0; p < cfg.iso_pairs; ++p) {
    const bool planted = p < cfg.iso_pairs / 2;
    const ClusterSpec spec = generate(instance_params(cfg.iso_corpus, cfg, kIsoCorpus, p));
    Rng rng(derive_seed(cfg.seed, kIsoCopies, p));
    ClusterSpec spec2 = planted_copy(spec, rng);
    if (!planted) spec2 = mutate(spec2, rng);
    if (p == 0 && cfg.fault == "isomorphism-edge-length") spec2 = mutate(spec2, rng, Mutation::edge_length);
    auto record = [&](const std::string& op, const std::string& detail, json witness = nullptr) {
      json r{{"operation", op},         {"instance", p},           {"detail", detail},
             {"cluster", to_json(spec)}, {"other", to_json(spec2)}};
      if (!witness.is_null()) r["witness"] = std::move(witness);
      rec.fail(std::move(r));
    };
    try {
      const Cluster c = validate(spec);
      const Cluster c2 = validate(spec2);
      const auto found = isomorphic(c, c2);
      const auto brute = brute_force_iso(c, c2);
      if (found.has_value() == brute.has_value()) {
        ++agree;
      } else {
        ++disagree;
        record("brute_force_iso", found ? "search found a witness the exhaustive oracle did not"
                                        : "exhaustive oracle found a witness the search missed",
               found ? iso_to_json(c, c2, *found) : iso_to_json(c, c2, *brute));
      }
      if (found.has_value() != planted) {
        ++wrong;
        record("isomorphic", planted ? "planted copy not recognized" : "mutated copy reported isomorphic",
               found ? iso_to_json(c, c2, *found) : json(nullptr));
      }
      Rng points(derive_seed(cfg.seed, kIsoPoints, p));
      for (const auto* w : {found ? &*found : nullptr, brute ? &*brute : nullptr}) {
        if (!w) continue;
        ++witnesses;
        const GoodReport good = verify_good(c, c2, *w);
        if (!good.ok() || triple_domain(*w).size() != c.vertex_count() || c.vertex_count() != c2.vertex_count()) {
          ++not_good;
          record("verify_good", "condition " + std::to_string(good.failed_condition) + ": " + good.detail,
                 iso_to_json(c, c2, *w));
          continue;
        }
        for (int k = 0; k < cfg.iso_spot_checks; ++k) {
          const ClusterPoint x = random_point(c, points), y = random_point(c, points);
          ++spot;
          const Rational d = exact_distance(c, x, y).value;
          const Rational d2 = exact_distance(c2, apply(c, c2, *w, x), apply(c, c2, *w, y)).value;
          if (d != d2) {
            ++spot_fail;
            record("spot_check", to_string(d) + " vs " + to_string(d2), iso_to_json(c, c2, *w));
            break;
          }
        }
      }
    } catch (const Error& err) {
      record("isomorphism", err.what());
    }
  }
  json out{{"pairs", cfg.iso_pairs},       {"agreements", agree},          {"disagreements", disagree},
           {"wrong_verdicts", wrong},      {"witnesses", witnesses},       {"witnesses_not_good", not_good},
           {"spot_checks", spot},          {"spot_check_failures", spot_fail}};
  if (!cfg.fault.empty()) out["fault"] = cfg.fault;
  rec.finish(out);
  out["pass"] = rec.count == 0;
  return out;
}

}  // namespace

GeneratorParams params_from_json(const json& doc, GeneratorParams base) {
  reject_unknown(doc,
                 {"t_min", "t_max", "tree_edges_min", "tree_edges_max", "length_min", "length_max", "length_den",
                  "range_shift", "slack", "chain", "overlap_percent", "seed"},
                 "generator params");
  try {
    read(doc, "seed", base.seed);
    read(doc, "t_min", base.t_min);
    read(doc, "t_max", base.t_max);
    read(doc, "tree_edges_min", base.tree_edges_min);
    read(doc, "tree_edges_max", base.tree_edges_max);
    read(doc, "length_min", base.length_min);
    read(doc, "length_max", base.length_max);
    read(doc, "length_den", base.length_den);
    read(doc, "range_shift", base.range_shift);
    read_rational(doc, "slack", base.slack);
    read(doc, "chain", base.chain);
    read(doc, "overlap_percent", base.overlap_percent);
    check_params(base);
  } catch (const json::exception& err) {
    throw ParseError(std::string("generator params: ") + err.what());
  } catch (const ValidationError& err) {
    throw ParseError(std::string("generator params: ") + err.what());
  }
  return base;
}

SuiteConfig config_from_json(const json& doc) {
  SuiteConfig cfg;
  reject_unknown(doc, {"seed", "k_obs", "suites", "fault", "corpus", "oracle", "chain", "graphs", "isomorphism"},
                 "config");
  try {
    read(doc, "seed", cfg.seed);
    read_rational(doc, "k_obs", cfg.k_obs);
    if (cfg.k_obs < 1) throw ParseError("k_obs must be at least 1");
    if (doc.contains("suites")) {
      cfg.suites = doc.at("suites").get<std::vector<std::string>>();
      for (const auto& s : cfg.suites) {
        if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end()) {
          throw ParseError("unknown suite '" + s + "'");
        }
      }
    }
    read(doc, "fault", cfg.fault);
    if (!cfg.fault.empty() && cfg.fault != "isomorphism-edge-length") {
      throw ParseError("unknown fault '" + cfg.fault + "'");
    }
    if (doc.contains("corpus")) {
      const auto& d = doc.at("corpus");
      reject_unknown(d, {"instances", "triples", "pairs", "subpath_pairs", "generator"}, "corpus");
      read_positive(d, "instances", cfg.corpus_instances);
      read_positive(d, "triples", cfg.triples);
      read_positive(d, "pairs", cfg.pairs);
      read_positive(d, "subpath_pairs", cfg.subpath_pairs);
      if (d.contains("generator")) cfg.corpus = params_from_json(d.at("generator"), cfg.corpus);
    }
    if (doc.contains("oracle")) {
      const auto& d = doc.at("oracle");
      reject_unknown(d, {"instances", "pairs", "node_cap", "generator"}, "oracle");
      read_positive(d, "instances", cfg.oracle_instances);
      read_positive(d, "pairs", cfg.oracle_pairs);
      read(d, "node_cap", cfg.node_cap);
      if (d.contains("generator")) cfg.oracle_corpus = params_from_json(d.at("generator"), cfg.oracle_corpus);
    }
    if (doc.contains("chain")) {
      const auto& d = doc.at("chain");
      reject_unknown(d, {"instances", "generator"}, "chain");
      read_positive(d, "instances", cfg.chain_instances);
      if (d.contains("generator")) cfg.chain_corpus = params_from_json(d.at("generator"), cfg.chain_corpus);
    }
    if (doc.contains("graphs")) {
      const auto& d = doc.at("graphs");
      reject_unknown(d, {"count", "max_vertices"}, "graphs");
      read_positive(d, "count", cfg.graphs);
      read(d, "max_vertices", cfg.graph_max_vertices);
      if (cfg.graph_max_vertices < 1 || cfg.graph_max_vertices > 16) {
        throw ParseError("graphs.max_vertices must be in [1, 16]");
      }
    }
    if (doc.contains("isomorphism")) {
      const auto& d = doc.at("isomorphism");
      reject_unknown(d, {"pairs", "spot_checks", "generator"}, "isomorphism");
      read_positive(d, "pairs", cfg.iso_pairs);
      read_positive(d, "spot_checks", cfg.iso_spot_checks);
      if (d.contains("generator")) cfg.iso_corpus = params_from_json(d.at("generator"), cfg.iso_corpus);
    }
  } catch (const json::exception& err) {
    throw ParseError(std::string("config: ") + err.what());
  }
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& err) {
    throw ParseError(path + ": " + err.what());
  }
  return config_from_json(doc);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  // splitmix64 over a combination of the three inputs.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1) + 0xD1B54A32D192ED03ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

json run_suites(const SuiteConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const std::map<std::string, std::function<json(const SuiteConfig&)>> runners{
      {"metric-axioms", metric_axioms}, {"bilipschitz", bilipschitz}, {"oracle-agreement", oracle_agreement},
      {"remark-nice", remark_nice},     {"tree-graded", tree_graded}, {"isomorphism", isomorphism}};
  json report{{"schema_version", kReportSchemaVersion}, {"seed", cfg.seed}, {"suites", json::object()}};
  json timing = json::object();
  bool pass = true;
  const auto start = Clock::now();
  for (const auto& name : cfg.suites) {
    const auto t0 = Clock::now();
    json result;
    try {
      result = runners.at(name)(cfg);
    } catch (const Error& err) {
      result = {{"pass", false}, {"error", err.what()}};
    }
    timing[name] = std::chrono::duration<double>(Clock::now() - t0).count();
    pass = pass && result.at("pass").get<bool>();
    report["suites"][name] = std::move(result);
  }
  timing["total"] = std::chrono::duration<double>(Clock::now() - start).count();
  report["pass"] = pass;
  report["timing"] = timing;
  return report;
}

json strip_timing(json report) {
  report.erase("timing");
  return report;
}

}  // namespace clustergeo

#include "clustergeo/tree_graded.hpp"

#include <algorithm>
#include <set>

#include "clustergeo/errors.hpp"

namespace clustergeo {

using nlohmann::json;

FiniteGraph::FiniteGraph(std::vector<int> vertex_ids, const std::vector<EdgeSpec>& edges)
    : ids_(std::move(vertex_ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (ids_.empty()) throw ValidationError("graph has no vertices");
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) throw ValidationError("duplicate graph vertex id");
  adjacent_.resize(ids_.size());
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const auto a = vertex_index(e.a);
    const auto b = vertex_index(e.b);
    const std::string where = "graph edge " + std::to_string(i);
    if (!a || !b) throw ValidationError("dangling vertex on " + where);
    if (*a == *b) throw ValidationError("self-loop on " + where);
    if (e.length <= 0) throw ValidationError("non-positive weight on " + where);
    if (!seen.insert(std::minmax(*a, *b)).second) throw ValidationError("parallel edge on " + where);
    edges_.push_back({*a, *b, e.length});
    adjacent_[*a].emplace_back(*b, static_cast<int>(i));
    adjacent_[*b].emplace_back(*a, static_cast<int>(i));
  }
  std::vector<char> reached(ids_.size(), 0);
  std::vector<int> stack{0};
  reached[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (const auto& [y, e] : adjacent_[x]) {
      (void)e;
      if (reached[y]) continue;
      reached[y] = 1;
      ++count;
      stack.push_back(y);
    }
  }
  if (count != ids_.size()) throw ValidationError("graph is not connected");
}

std::optional<int> FiniteGraph::vertex_index(int id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<int>(it - ids_.begin());
}

FiniteGraph graph_from_json(const json& doc) {
  try {
    std::vector<int> ids = doc.at("vertices").get<std::vector<int>>();
    std::vector<FiniteGraph::EdgeSpec> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 3 || !e[2].is_string()) {
        throw ParseError("graph edge must be [a, b, \"len\"]");
      }
      edges.push_back({e[0].get<int>(), e[1].get<int>(), parse_rational(e[2].get<std::string>())});
    }
    return FiniteGraph(std::move(ids), edges);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed graph JSON: ") + ex.what());
  }
}

json to_json(const FiniteGraph& g) {
  json ids = json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) ids.push_back(g.vertex_id(static_cast<int>(v)));
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({g.vertex_id(e.a), g.vertex_id(e.b), to_string(e.length)});
  return {{"vertices", ids}, {"edges", edges}};
}

// ---------------------------------------------------------------------------

BlockDecomposition blocks(const FiniteGraph& g) {
  const std::size_t n = g.vertex_count();
  BlockDecomposition out;
  if (g.edge_count() == 0) {
    out.blocks.push_back({0});
    return out;
  }
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_cut(n, 0);
  std::vector<int> edge_stack;
  struct Frame {
    int v;
    int parent_edge;
    std::size_t next;
  };
  int clock = 0;
  int root_children = 0;
  std::vector<Frame> stack{{0, -1, 0}};
  disc[0] = low[0] = clock++;
  while (!stack.empty()) {
    auto& f = stack.back();
    const auto& nbrs = g.neighbors(f.v);
    if (f.next < nbrs.size()) {
      const auto [w, e] = nbrs[f.next++];
      if (e == f.parent_edge) continue;
      if (disc[w] < 0) {
        edge_stack.push_back(e);
        disc[w] = low[w] = clock++;
        if (f.v == 0) ++root_children;
        stack.push_back({w, e, 0});
      } else if (disc[w] < disc[f.v]) {
        edge_stack.push_back(e);
        low[f.v] = std::min(low[f.v], disc[w]);
      }
      continue;
    }
    const Frame done = f;
    stack.pop_back();
    if (stack.empty()) break;
    const int v = stack.back().v;
    low[v] = std::min(low[v], low[done.v]);
    if (low[done.v] >= disc[v]) {
      if (v != 0) is_cut[v] = 1;
      std::set<int> block;
      int e = -1;
      do {
        e = edge_stack.back();
        edge_stack.pop_back();
        block.insert(g.edge(e).a);
        block.insert(g.edge(e).b);
      } while (e != done.parent_edge);
      out.blocks.emplace_back(block.begin(), block.end());
    }
  }
  if (root_children > 1) is_cut[0] = 1;
  std::sort(out.blocks.begin(), out.blocks.end());
  for (std::size_t v = 0; v < n; ++v) {
    if (is_cut[v]) out.cut_vertices.push_back(static_cast<int>(v));
  }
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    for (int v : out.blocks[b]) {
      if (is_cut[v]) out.block_cut_tree.emplace_back(static_cast<int>(b), v);
    }
  }
  return out;
}

std::vector<int> cut_points(const FiniteGraph& g) { return blocks(g).cut_vertices; }

json to_json(const FiniteGraph& g, const BlockDecomposition& d) {
  auto ids = [&](const std::vector<int>& vs) {
    json out = json::array();
    for (int v : vs) out.push_back(g.vertex_id(v));
    return out;
  };
  json bl = json::array();
  for (const auto& b : d.blocks) bl.push_back(ids(b));
  json tree = json::array();
  for (const auto& [b, v] : d.block_cut_tree) tree.push_back({b, g.vertex_id(v)});
  return {{"cut_vertices", ids(d.cut_vertices)}, {"blocks", bl}, {"block_cut_tree", tree}};
}

namespace {

using Mask = unsigned;

bool induced_connected(const FiniteGraph& g, Mask set) {
  if (set == 0) return false;
  const int start = __builtin_ctz(set);
  Mask seen = Mask{1} << start;
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (const auto& [y, e] : g.neighbors(x)) {
      (void)e;
      const Mask bit = Mask{1} << y;
      if ((set & bit) && !(seen & bit)) {
        seen |= bit;
        stack.push_back(y);
      }
    }
  }
  return seen == set;
}

}  // namespace

std::vector<std::vector<int>> brute_force_blocks(const FiniteGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 16) throw ValidationError("brute-force blocks is limited to 16 vertices");
  if (n == 1) return {{0}};
  std::vector<Mask> good;
  for (Mask set = 1; set < (Mask{1} << n); ++set) {
    if (__builtin_popcount(set) < 2 || !induced_connected(g, set)) continue;
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      const Mask bit = Mask{1} << v;
      if ((set & bit) && __builtin_popcount(set) > 2) ok = induced_connected(g, set & ~bit);
    }
    if (ok) good.push_back(set);
  }
  std::vector<std::vector<int>> out;
  for (Mask s : good) {
    const bool maximal =
        std::none_of(good.begin(), good.end(), [s](Mask t) { return t != s && (s & t) == s; });
    if (!maximal) continue;
    std::vector<int> vs;
    for (std::size_t v = 0; v < n; ++v) {
      if (s & (Mask{1} << v)) vs.push_back(static_cast<int>(v));
    }
    out.push_back(std::move(vs));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool contains_all(const std::vector<int>& sorted, const std::vector<int>& items) {
  return std::all_of(items.begin(), items.end(),
                     [&](int v) { return std::binary_search(sorted.begin(), sorted.end(), v); });
}

// Finds a simple cycle using only vertices of `allowed` that no piece
// contains. Cycles are enumerated once per lowest vertex.
bool find_bad_cycle(const FiniteGraph& g, const std::vector<int>& allowed,
                    const std::vector<std::vector<int>>& pieces, std::vector<int>& witness) {
  std::vector<char> in(g.vertex_count(), 0), on_path(g.vertex_count(), 0);
  for (int v : allowed) in[v] = 1;
  std::vector<int> path;
  auto bad = [&](const std::vector<int>& cycle) {
    std::vector<int> sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    return std::none_of(pieces.begin(), pieces.end(), [&](const auto& p) { return contains_all(p, sorted); });
  };
  // Iterative DFS over simple paths from s through vertices > s.
  for (int s : allowed) {
    struct Frame {
      int v;
      std::size_t next;
    };
    std::vector<Frame> stack{{s, 0}};
    path.assign(1, s);
    on_path[s] = 1;
    while (!stack.empty()) {
      auto& f = stack.back();
      const auto& nbrs = g.neighbors(f.v);
      if (f.next == nbrs.size()) {
        on_path[f.v] = 0;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      const int w = nbrs[f.next++].first;
      if (!in[w]) continue;
      if (w == s && path.size() >= 3 && path[1] < path.back()) {
        if (bad(path)) {
          witness = path;
          return true;
        }
        continue;
      }
      if (w <= s || on_path[w]) continue;
      on_path[w] = 1;
      path.push_back(w);
      stack.push_back({w, 0});
    }
  }
  return false;
}

}  // namespace

TreeGradedReport check_T1_T2(const FiniteGraph& g, const std::vector<std::vector<int>>& raw_pieces) {
  std::vector<std::vector<int>> pieces = raw_pieces;
  for (auto& p : pieces) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  TreeGradedReport report;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(static_cast<int>(e));
    const bool covered =
        std::any_of(pieces.begin(), pieces.end(), [&](const auto& p) { return contains_all(p, {edge.a, edge.b}); });
    if (!covered) {
      report.cover = false;
      report.uncovered_edge = static_cast<int>(e);
      break;
    }
  }
  for (std::size_t i = 0; i < pieces.size() && report.t1; ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(pieces[i].begin(), pieces[i].end(), pieces[j].begin(), pieces[j].end(),
                            std::back_inserter(common));
      if (common.size() > 1) {
        report.t1 = false;
        report.t1_witness = {static_cast<int>(i), static_cast<int>(j)};
        break;
      }
    }
  }
  // Every simple cycle lies inside one block, so blocks held by a single
  // piece need no enumeration.
  for (const auto& block : blocks(g).blocks) {
    if (block.size() < 3) continue;
    if (std::any_of(pieces.begin(), pieces.end(), [&](const auto& p) { return contains_all(p, block); })) continue;
    std::vector<int> witness;
    if (find_bad_cycle(g, block, pieces, witness)) {
      report.t2 = false;
      report.t2_witness = std::move(witness);
      break;
    }
  }
  return report;
}

BlockOf block_of(const FiniteGraph& g, const BlockDecomposition& d, const std::vector<int>& raw) {
  std::vector<int> s = raw;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) throw ValidationError("empty vertex set");
  for (int v : s) {
    if (v < 0 || v >= static_cast<int>(g.vertex_count())) throw ValidationError("unknown vertex in set");
  }
  // Connectivity of the induced subgraph.
  {
    std::vector<char> in(g.vertex_count(), 0), seen(g.vertex_count(), 0);
    for (int v : s) in[v] = 1;
    std::vector<int> stack{s.front()};
    seen[s.front()] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (const auto& [y, e] : g.neighbors(x)) {
        (void)e;
        if (in[y] && !seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    if (count != s.size()) throw ValidationError("vertex set does not induce a connected subgraph");
  }
  BlockOf out;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    if (contains_all(d.blocks[b], s)) {
      out.block = static_cast<int>(b);
      return out;
    }
  }
  // s meets several blocks: some cut vertex in s splits the rest of s.
  for (int cut : d.cut_vertices) {
    if (!std::binary_search(s.begin(), s.end(), cut)) continue;
    std::vector<int> comp(g.vertex_count(), -1);
    int label = 0;
    for (std::size_t start = 0; start < g.vertex_count(); ++start) {
      if (static_cast<int>(start) == cut || comp[start] >= 0) continue;
      std::vector<int> stack{static_cast<int>(start)};
      comp[start] = label;
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (const auto& [y, e] : g.neighbors(x)) {
          (void)e;
          if (y != cut && comp[y] < 0) {
            comp[y] = label;
            stack.push_back(y);
          }
        }
      }
      ++label;
    }
    std::set<int> touched;
    for (int v : s) {
      if (v != cut) touched.insert(comp[v]);
    }
    if (touched.size() > 1) {
      out.cut_vertex = cut;
      return out;
    }
  }
  throw Error("vertex set spans several blocks without a separating cut vertex");
}

}  // namespace clustergeo

#include "clustergeo/generator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "clustergeo/errors.hpp"

namespace clustergeo {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ValidationError("empty sampling range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  // Rejection keeps every value equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return lo + static_cast<std::int64_t>(x % span);
}

void check_params(const GeneratorParams& p) {
  if (p.t_min < 1 || p.t_max < p.t_min) throw ValidationError("Bass-Serre size range is empty");
  if (p.tree_edges_min < 1 || p.tree_edges_max < p.tree_edges_min) throw ValidationError("tree size range is empty");
  if (p.length_min < 1 || p.length_max < p.length_min || p.length_den < 1) {
    throw ValidationError("edge length range is empty");
  }
  if (p.range_shift < 0) throw ValidationError("range shift must be non-negative");
  if (p.slack < 2) throw ValidationError("height window slack must be at least 2");
  if (p.overlap_percent < 0 || p.overlap_percent > 100) throw ValidationError("overlap percent out of range");
}

namespace {

struct MarkPath {
  std::vector<int> edges;  // from `from` to `to`
  int from = 0;
  int to = 0;
};

struct TreeBuilder {
  Rng& rng;
  const GeneratorParams& params;
  std::vector<MetricTree::EdgeSpec> edges;
  std::vector<char> endpoint;  // vertex is a mark end and must stay a leaf
  int vertices = 0;
  int spare = 0;  // edges beyond the two per mark still allowed

  int vertex() {
    endpoint.push_back(0);
    return vertices++;
  }
  int edge(int a, int b) {
    Rational len(rng.uniform(params.length_min, params.length_max), params.length_den);
    len.canonicalize();
    edges.push_back({a, b, len});
    return static_cast<int>(edges.size()) - 1;
  }
  // Edges from `from` out to a fresh leaf, in that order.
  std::pair<std::vector<int>, int> branch(int from) {
    int count = 1;
    if (rng.chance(30) && spare > 0) {
      ++count;
      --spare;
    }
    std::vector<int> out;
    int cur = from;
    for (int k = 0; k < count; ++k) {
      const int next = vertex();
      out.push_back(edge(cur, next));
      cur = next;
    }
    endpoint[cur] = 1;
    return {out, cur};
  }
  int free_vertex() {
    std::vector<int> options;
    for (int v = 0; v < vertices; ++v) {
      if (!endpoint[v]) options.push_back(v);
    }
    return options[rng.index(options.size())];
  }
};

MetricTree::EdgeSpec spec_edge(int a, int b, Rational len) { return {a, b, std::move(len)}; }

// A piece tree carrying `count` leaf-to-leaf marks.
std::vector<MarkPath> build_piece(TreeBuilder& b, int count, int target_edges) {
  std::vector<MarkPath> marks;
  // Branches of earlier marks, kept for overlap: (edges from center, leaf, center).
  struct Branch {
    std::vector<int> edges;
    int leaf;
    int center;
  };
  std::vector<Branch> branches;
  const int hub = b.vertex();
  b.spare = std::max(0, target_edges - 2 * count);
  for (int k = 0; k < count; ++k) {
    MarkPath m;
    if (k > 0 && b.params.overlap_percent > 0 && b.rng.chance(b.params.overlap_percent)) {
      const Branch shared = branches[b.rng.index(branches.size())];
      auto [out, leaf] = b.branch(shared.center);
      m.edges.assign(shared.edges.rbegin(), shared.edges.rend());
      m.edges.insert(m.edges.end(), out.begin(), out.end());
      m.from = shared.leaf;
      m.to = leaf;
      branches.push_back({out, leaf, shared.center});
    } else {
      int center = hub;
      if (k > 0 && b.rng.chance(50) && b.spare > 0) {
        --b.spare;
        const int anchor = b.free_vertex();
        center = b.vertex();
        b.edge(anchor, center);
      }
      auto [left, leaf_l] = b.branch(center);
      auto [right, leaf_r] = b.branch(center);
      m.edges.assign(left.rbegin(), left.rend());
      m.edges.insert(m.edges.end(), right.begin(), right.end());
      m.from = leaf_l;
      m.to = leaf_r;
      branches.push_back({left, leaf_l, center});
      branches.push_back({right, leaf_r, center});
    }
    marks.push_back(std::move(m));
  }
  if (count == 0) b.edge(hub, b.vertex());
  while (static_cast<int>(b.edges.size()) < target_edges) {
    const int anchor = b.free_vertex();
    b.edge(anchor, b.vertex());
  }
  return marks;
}

Rational path_length(const std::vector<MetricTree::EdgeSpec>& edges, const std::vector<int>& path) {
  Rational total;
  for (int e : path) total += edges[e].length;
  return total;
}

int path_end(const std::vector<MetricTree::EdgeSpec>& edges, const std::vector<int>& path, int origin) {
  int cur = origin;
  for (int e : path) cur = edges[e].a == cur ? edges[e].b : edges[e].a;
  return cur;
}

void set_windows(ClusterSpec& spec, const Rational& slack) {
  for (auto& [v, piece] : spec.pieces) {
    std::optional<Rational> lo, hi;
    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
      const auto [a, b] = spec.edges[e];
      if (a != v && b != v) continue;
      const int w = a == v ? b : a;
      const auto& m = spec.marks.at({w, static_cast<int>(e)});
      lo = lo ? min_of(*lo, m.lo) : m.lo;
      hi = hi ? max_of(*hi, m.hi) : m.hi;
    }
    if (!lo) {
      lo = Rational(0);
      hi = Rational(0);
      for (const auto& e : piece.tree_edges) *hi += e.length;
    }
    const Rational pad = (slack - 1) * (*hi - *lo) / 2;
    piece.window_lo = *lo - pad;
    piece.window_hi = *hi + pad;
  }
}

}  // namespace

ClusterSpec generate(const GeneratorParams& params) {
  Rng rng(params.seed);
  return generate(params, rng);
}

ClusterSpec generate(const GeneratorParams& params, Rng& rng) {
  check_params(params);
  ClusterSpec spec;
  const int n = static_cast<int>(rng.uniform(params.t_min, params.t_max));
  for (int v = 0; v < n; ++v) spec.vertices.push_back(v);
  for (int v = 1; v < n; ++v) {
    const int parent = params.chain ? v - 1 : static_cast<int>(rng.uniform(0, v - 1));
    spec.edges.emplace_back(parent, v);
  }
  for (int v = 0; v < n; ++v) {
    std::vector<int> incident;
    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
      if (spec.edges[e].first == v || spec.edges[e].second == v) incident.push_back(static_cast<int>(e));
    }
    rng.shuffle(incident);
    TreeBuilder b{rng, params, {}, {}, 0, 0};
    const int target = static_cast<int>(rng.uniform(params.tree_edges_min, params.tree_edges_max));
    const auto marks = build_piece(b, static_cast<int>(incident.size()), target);
    PieceSpec piece;
    piece.tree_edges = b.edges;
    for (std::size_t k = 0; k < marks.size(); ++k) {
      MarkSpec ms;
      ms.path = marks[k].edges;
      ms.origin = marks[k].from;
      if (rng.chance(50)) {
        std::reverse(ms.path.begin(), ms.path.end());
        ms.origin = marks[k].to;
      }
      ms.orient = rng.chance(50) ? 1 : -1;
      ms.lo = Rational(rng.uniform(-params.range_shift, params.range_shift));
      ms.hi = ms.lo + path_length(piece.tree_edges, ms.path);
      spec.marks.emplace(std::make_pair(v, incident[k]), std::move(ms));
    }
    spec.pieces.emplace(v, std::move(piece));
  }
  set_windows(spec, params.slack);
  return spec;
}

ClusterSpec planted_copy(const ClusterSpec& spec, Rng& rng) {
  const std::size_t n = spec.vertices.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  std::map<int, int> new_id;
  std::map<int, Rational> shift;
  for (std::size_t i = 0; i < n; ++i) {
    new_id[spec.vertices[i]] = 3 * perm[i] + 1;
    shift[spec.vertices[i]] = Rational(rng.uniform(-5, 5));
  }
  std::vector<int> edge_perm(spec.edges.size());
  std::iota(edge_perm.begin(), edge_perm.end(), 0);
  rng.shuffle(edge_perm);  // old edge e becomes edge_perm[e]

  ClusterSpec out;
  for (int v : spec.vertices) out.vertices.push_back(new_id[v]);
  rng.shuffle(out.vertices);
  out.edges.resize(spec.edges.size());
  for (std::size_t e = 0; e < spec.edges.size(); ++e) {
    auto [a, b] = spec.edges[e];
    if (rng.chance(50)) std::swap(a, b);
    out.edges[edge_perm[e]] = {new_id[a], new_id[b]};
  }

  // Per piece: relabel tree vertices and permute tree edges.
  std::map<int, std::map<int, int>> tree_id;
  std::map<int, std::vector<int>> tree_edge_perm;
  for (const auto& [v, piece] : spec.pieces) {
    std::set<int> ids;
    for (const auto& e : piece.tree_edges) {
      ids.insert(e.a);
      ids.insert(e.b);
    }
    std::vector<int> labels(ids.size());
    std::iota(labels.begin(), labels.end(), 0);
    rng.shuffle(labels);
    auto& relabel = tree_id[v];
    std::size_t k = 0;
    for (int id : ids) relabel[id] = 2 * labels[k++] + 5;
    auto& ep = tree_edge_perm[v];
    ep.resize(piece.tree_edges.size());
    std::iota(ep.begin(), ep.end(), 0);
    rng.shuffle(ep);
    PieceSpec ps;
    ps.tree_edges.resize(piece.tree_edges.size());
    for (std::size_t e = 0; e < piece.tree_edges.size(); ++e) {
      auto edge = piece.tree_edges[e];
      if (rng.chance(50)) std::swap(edge.a, edge.b);
      ps.tree_edges[ep[e]] = spec_edge(relabel[edge.a], relabel[edge.b], edge.length);
    }
    ps.window_lo = piece.window_lo + shift[v];
    ps.window_hi = piece.window_hi + shift[v];
    out.pieces.emplace(new_id[v], std::move(ps));
  }
  for (const auto& [key, ms] : spec.marks) {
    const auto [v, e] = key;
    const auto [a, b] = spec.edges[e];
    const int w = a == v ? b : a;
    const auto& tree = spec.pieces.at(v).tree_edges;
    MarkSpec m = ms;
    if (rng.chance(50)) {
      m.origin = path_end(tree, ms.path, ms.origin);
      std::reverse(m.path.begin(), m.path.end());
      m.orient = -ms.orient;
    }
    m.origin = tree_id[v][m.origin];
    for (int& pe : m.path) pe = tree_edge_perm[v][pe];
    m.lo += shift[w];
    m.hi += shift[w];
    out.marks.emplace(std::make_pair(new_id[v], edge_perm[e]), std::move(m));
  }
  return out;
}

ClusterSpec mutate(const ClusterSpec& spec, Rng& rng, Mutation kind) {
  ClusterSpec out = spec;
  auto it = out.pieces.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(rng.index(out.pieces.size())));
  const int v = it->first;
  auto& piece = it->second;
  const bool window = kind == Mutation::any ? rng.chance(50) : kind == Mutation::window;
  if (window) {
    piece.window_hi += 1;
    return out;
  }
  const int j = static_cast<int>(rng.index(piece.tree_edges.size()));
  const Rational delta(1);
  piece.tree_edges[j].length += delta;
  for (auto& [key, m] : out.marks) {
    if (key.first != v || std::find(m.path.begin(), m.path.end(), j) == m.path.end()) continue;
    m.hi += delta;
    const auto [a, b] = out.edges[key.second];
    auto& across = out.pieces.at(a == v ? b : a);
    across.window_hi = max_of(across.window_hi, m.hi);
  }
  return out;
}

ClusterPoint random_point(const Cluster& c, Rng& rng) {
  return random_point(c, rng, static_cast<int>(rng.index(c.vertex_count())));
}

ClusterPoint random_point(const Cluster& c, Rng& rng, int v) {
  const auto& piece = c.piece(v);
  auto grid = [&](const Rational& lo, const Rational& hi, int steps) {
    Rational t(rng.uniform(0, steps), steps);
    t.canonicalize();
    return Rational(lo + (hi - lo) * t);
  };
  if (!piece.marks.empty() && rng.chance(25)) {
    const auto& [e, line] = piece.marks[rng.index(piece.marks.size())];
    const auto& across = c.piece(c.other_end(e, v)).mark(e);
    return c.canonical({v, line_point(piece.tree, line, grid(line.lo(), line.hi(), 8)),
                        grid(across.lo(), across.hi(), 8)});
  }
  const int e = static_cast<int>(rng.index(piece.tree.edge_count()));
  const auto horizontal = piece.tree.point(e, grid(0, piece.tree.edge(e).length, 8));
  return c.canonical({v, horizontal, grid(piece.window_lo, piece.window_hi, 16)});
}

FiniteGraph random_graph(Rng& rng, int max_vertices) {
  const int target = static_cast<int>(rng.uniform(1, max_vertices));
  std::vector<FiniteGraph::EdgeSpec> edges;
  std::set<std::pair<int, int>> present;
  int count = 1;
  auto add = [&](int a, int b) {
    if (a == b || !present.insert(std::minmax(a, b)).second) return;
    Rational w(rng.uniform(1, 6), 2);
    w.canonicalize();
    edges.push_back({a, b, w});
  };
  while (count < target) {
    const int anchor = static_cast<int>(rng.uniform(0, count - 1));
    const int room = target - count;
    const int kind = room >= 2 ? static_cast<int>(rng.uniform(0, 2)) : 0;
    if (kind == 0) {
      add(anchor, count++);
      continue;
    }
    const int len = static_cast<int>(std::min<std::int64_t>(rng.uniform(3, 5), room + 1));
    std::vector<int> cycle{anchor};
    for (int k = 1; k < len; ++k) cycle.push_back(count++);
    for (int k = 0; k < len; ++k) add(cycle[k], cycle[(k + 1) % len]);
    if (kind == 2 && len >= 4) add(cycle[0], cycle[2]);
  }
  if (count >= 4 && rng.chance(20)) {
    add(static_cast<int>(rng.uniform(0, count - 1)), static_cast<int>(rng.uniform(0, count - 1)));
  }
  std::vector<int> ids(count);
  std::iota(ids.begin(), ids.end(), 0);
  return FiniteGraph(ids, edges);
}

}  // namespace clustergeo

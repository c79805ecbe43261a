#include "clustergeo/cluster.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "clustergeo/errors.hpp"

namespace clustergeo {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(std::string("missing key \"") + key + "\"");
  }
  return obj.at(key);
}

int as_int(const json& v, const char* what) {
  if (!v.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return v.get<int>();
}

Rational as_rational(const json& v, const char* what) {
  if (!v.is_string()) throw ParseError(std::string(what) + " must be a rational string");
  return parse_rational(v.get<std::string>());
}

int parse_key_int(const std::string& text, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " key \"" + text + "\"");
  }
  if (used != text.size() || std::to_string(value) != text) {
    throw ParseError(std::string("bad ") + what + " key \"" + text + "\"");
  }
  return value;
}

std::string where_edge(int e) { return "Bass-Serre edge " + std::to_string(e); }

}  // namespace

ClusterSpec cluster_spec_from_json(const json& doc) {
  try {
    ClusterSpec spec;
    const auto& tree = require(doc, "tree");
    for (const auto& v : require(tree, "vertices")) spec.vertices.push_back(as_int(v, "vertex id"));
    for (const auto& e : require(tree, "edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("tree edge must be a pair");
      spec.edges.emplace_back(as_int(e[0], "edge endpoint"), as_int(e[1], "edge endpoint"));
    }
    for (const auto& [key, piece] : require(doc, "pieces").items()) {
      PieceSpec ps;
      for (const auto& te : require(piece, "tree_edges")) {
        if (!te.is_array() || te.size() != 3) throw ParseError("piece tree edge must be [a, b, len]");
        ps.tree_edges.push_back({as_int(te[0], "tree vertex"), as_int(te[1], "tree vertex"),
                                 as_rational(te[2], "edge length")});
      }
      const auto& window = require(piece, "height_window");
      if (!window.is_array() || window.size() != 2) throw ParseError("height_window must be [lo, hi]");
      ps.window_lo = as_rational(window[0], "window bound");
      ps.window_hi = as_rational(window[1], "window bound");
      if (!spec.pieces.emplace(parse_key_int(key, "piece"), std::move(ps)).second) {
        throw ParseError("duplicate piece " + key);
      }
    }
    for (const auto& [key, mark] : require(doc, "marks").items()) {
      const auto colon = key.find(':');
      if (colon == std::string::npos) throw ParseError("mark key must be \"v:e\"");
      const int v = parse_key_int(key.substr(0, colon), "mark vertex");
      const int e = parse_key_int(key.substr(colon + 1), "mark edge");
      MarkSpec ms;
      for (const auto& id : require(mark, "path")) ms.path.push_back(as_int(id, "path edge"));
      const auto& range = require(mark, "range");
      if (!range.is_array() || range.size() != 2) throw ParseError("range must be [a, b]");
      ms.lo = as_rational(range[0], "range bound");
      ms.hi = as_rational(range[1], "range bound");
      ms.origin = as_int(require(mark, "origin"), "origin");
      ms.orient = as_int(require(mark, "orient"), "orient");
      if (!spec.marks.emplace(std::make_pair(v, e), std::move(ms)).second) {
        throw ParseError("duplicate mark " + key);
      }
    }
    return spec;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed cluster JSON: ") + ex.what());
  }
}

json to_json(const ClusterSpec& spec) {
  json doc;
  doc["tree"]["vertices"] = spec.vertices;
  json edges = json::array();
  for (const auto& [a, b] : spec.edges) edges.push_back({a, b});
  doc["tree"]["edges"] = edges;
  json pieces = json::object();
  for (const auto& [v, ps] : spec.pieces) {
    json te = json::array();
    for (const auto& e : ps.tree_edges) te.push_back({e.a, e.b, to_string(e.length)});
    pieces[std::to_string(v)] = {{"tree_edges", te},
                                 {"height_window", {to_string(ps.window_lo), to_string(ps.window_hi)}}};
  }
  doc["pieces"] = pieces;
  json marks = json::object();
  for (const auto& [key, ms] : spec.marks) {
    marks[std::to_string(key.first) + ":" + std::to_string(key.second)] = {
        {"path", ms.path},
        {"range", {to_string(ms.lo), to_string(ms.hi)}},
        {"origin", ms.origin},
        {"orient", ms.orient}};
  }
  doc["marks"] = marks;
  return doc;
}

std::string dump_cluster(const ClusterSpec& spec) { return to_json(spec).dump(2) + "\n"; }

ClusterSpec load_cluster_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    throw ParseError(path + ": " + ex.what());
  }
  return cluster_spec_from_json(doc);
}

// ---------------------------------------------------------------------------

const Line& Piece::mark(int edge) const { return marks[mark_index(edge)].second; }

int Piece::mark_index(int edge) const {
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i].first == edge) return static_cast<int>(i);
  }
  throw InvalidPoint("no mark for Bass-Serre edge " + std::to_string(edge));
}

const LineRelation& Piece::relation(int from_edge, int to_edge) const {
  return relations[mark_index(from_edge) * marks.size() + mark_index(to_edge)];
}

std::optional<int> Cluster::vertex_index(int id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<int>(it - ids_.begin());
}

int Cluster::other_end(int e, int v) const {
  const auto& [a, b] = edges_.at(e);
  if (a != v && b != v) throw InvalidPoint("vertex is not an endpoint of " + where_edge(e));
  return a == v ? b : a;
}

int Cluster::edge_between(int a, int b) const {
  for (const auto& [nbr, e] : adjacent_.at(a)) {
    if (nbr == b) return e;
  }
  throw InvalidPoint("vertices " + std::to_string(ids_.at(a)) + " and " + std::to_string(ids_.at(b)) +
                     " are not adjacent");
}

std::vector<int> Cluster::tree_path(int a, int b) const {
  std::vector<int> path{a};
  while (path.back() != b) {
    const int cur = path.back();
    for (const auto& [nbr, e] : adjacent_[cur]) {
      (void)e;
      if (tree_distance(nbr, b) + 1 == tree_distance(cur, b)) {
        path.push_back(nbr);
        break;
      }
    }
  }
  return path;
}

Cluster validate(const ClusterSpec& spec) {
  Cluster c;
  c.spec_ = spec;
  c.ids_ = spec.vertices;
  std::sort(c.ids_.begin(), c.ids_.end());
  if (c.ids_.empty()) throw ValidationError("Bass-Serre tree has no vertices");
  if (std::adjacent_find(c.ids_.begin(), c.ids_.end()) != c.ids_.end()) {
    throw ValidationError("duplicate Bass-Serre vertex id");
  }
  const std::size_t n = c.ids_.size();
  if (spec.edges.size() + 1 != n) throw ValidationError("Bass-Serre tree edge count is not |V| - 1");

  c.adjacent_.resize(n);
  for (std::size_t e = 0; e < spec.edges.size(); ++e) {
    const auto a = c.vertex_index(spec.edges[e].first);
    const auto b = c.vertex_index(spec.edges[e].second);
    if (!a || !b) throw ValidationError("dangling vertex reference on " + where_edge(static_cast<int>(e)));
    if (*a == *b) throw ValidationError("self-loop on " + where_edge(static_cast<int>(e)));
    c.edges_.emplace_back(*a, *b);
    c.adjacent_[*a].emplace_back(*b, static_cast<int>(e));
    c.adjacent_[*b].emplace_back(*a, static_cast<int>(e));
  }

  c.hops_.assign(n * n, -1);
  for (std::size_t root = 0; root < n; ++root) {
    std::deque<int> queue{static_cast<int>(root)};
    c.hops_[root * n + root] = 0;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (const auto& [y, e] : c.adjacent_[x]) {
        (void)e;
        if (c.hops_[root * n + y] >= 0) continue;
        c.hops_[root * n + y] = c.hops_[root * n + x] + 1;
        queue.push_back(y);
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (c.hops_[root * n + v] < 0) throw ValidationError("Bass-Serre tree is not connected");
    }
  }

  if (spec.pieces.size() != n) throw ValidationError("piece count differs from vertex count");
  for (std::size_t v = 0; v < n; ++v) {
    const int id = c.ids_[v];
    const auto it = spec.pieces.find(id);
    if (it == spec.pieces.end()) throw ValidationError("no piece for vertex " + std::to_string(id));
    const auto& ps = it->second;
    if (ps.window_hi < ps.window_lo) {
      throw ValidationError("empty height window at vertex " + std::to_string(id));
    }
    try {
      c.pieces_.push_back(Piece{MetricTree(ps.tree_edges), ps.window_lo, ps.window_hi, {}, {}});
    } catch (const ValidationError& ex) {
      throw ValidationError("piece " + std::to_string(id) + ": " + ex.what());
    }
  }

  std::size_t expected_marks = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto& piece = c.pieces_[v];
    for (const auto& [nbr, e] : c.adjacent_[v]) {
      (void)nbr;
      ++expected_marks;
      const auto it = spec.marks.find({c.ids_[v], e});
      if (it == spec.marks.end()) {
        throw ValidationError("missing mark at vertex " + std::to_string(c.ids_[v]) + " for " + where_edge(e));
      }
      const auto& ms = it->second;
      const auto origin = piece.tree.vertex_index(ms.origin);
      if (!origin) throw ValidationError("mark origin is not a tree vertex on " + where_edge(e));
      try {
        piece.marks.emplace_back(e, Line(piece.tree, ms.path, *origin, ms.lo, ms.hi, ms.orient));
      } catch (const ValidationError& ex) {
        throw ValidationError("mark at vertex " + std::to_string(c.ids_[v]) + " on " + where_edge(e) + ": " +
                              ex.what());
      }
    }
    std::sort(piece.marks.begin(), piece.marks.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& first : piece.marks) {
      for (const auto& second : piece.marks) {
        piece.relations.push_back(relate_lines(piece.tree, first.second, second.second));
      }
    }
  }
  if (spec.marks.size() != expected_marks) {
    throw ValidationError("marks reference edges that are not incident to their vertex");
  }

  // Flip consistency: heights on one side of a wall are line parameters on the other.
  for (std::size_t e = 0; e < c.edges_.size(); ++e) {
    const auto [a, b] = c.edges_[e];
    for (const auto& [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
      const auto& line = c.pieces_[from].mark(static_cast<int>(e));
      const auto& other = c.pieces_[to];
      if (line.lo() < other.window_lo || line.hi() > other.window_hi) {
        throw ValidationError("window/range mismatch on " + where_edge(static_cast<int>(e)) + ": range [" +
                              to_string(line.lo()) + ", " + to_string(line.hi()) + "] of vertex " +
                              std::to_string(c.ids_[from]) + " exceeds window of vertex " +
                              std::to_string(c.ids_[to]));
      }
    }
  }
  return c;
}

void Cluster::check(const ClusterPoint& p) const {
  if (p.vertex < 0 || p.vertex >= static_cast<int>(vertex_count())) {
    throw InvalidPoint("point refers to unknown vertex");
  }
  const auto& piece = pieces_[p.vertex];
  piece.tree.check(p.horizontal);
  if (p.height < piece.window_lo || p.height > piece.window_hi) {
    throw InvalidPoint("height " + to_string(p.height) + " outside window of vertex " +
                       std::to_string(ids_[p.vertex]));
  }
}

std::vector<ClusterPoint> Cluster::representations(const ClusterPoint& p) const {
  check(p);
  std::vector<ClusterPoint> out{p};
  // Supports are subtrees of T, so every vertex is reached by one route only.
  for (std::size_t k = 0; k < out.size(); ++k) {
    const ClusterPoint cur = out[k];
    const auto& piece = pieces_[cur.vertex];
    for (const auto& [nbr, e] : adjacent_[cur.vertex]) {
      if (std::any_of(out.begin(), out.end(), [nbr = nbr](const auto& q) { return q.vertex == nbr; })) continue;
      const auto t = try_line_coord(piece.tree, piece.mark(e), cur.horizontal);
      if (!t) continue;
      const auto& across = pieces_[nbr].mark(e);
      if (cur.height < across.lo() || cur.height > across.hi()) continue;
      out.push_back({nbr, line_point(pieces_[nbr].tree, across, cur.height), *t});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.vertex < y.vertex; });
  return out;
}

ClusterPoint Cluster::canonical(const ClusterPoint& p) const { return representations(p).front(); }

std::optional<ClusterPoint> Cluster::represent_at(const ClusterPoint& p, int v) const {
  if (p.vertex == v) {
    check(p);
    return p;
  }
  for (auto& rep : representations(p)) {
    if (rep.vertex == v) return rep;
  }
  return std::nullopt;
}

ClusterPoint Cluster::point(int vertex_id, int tree_edge, const Rational& offset, const Rational& height) const {
  const auto v = vertex_index(vertex_id);
  if (!v) throw InvalidPoint("unknown vertex " + std::to_string(vertex_id));
  return canonical({*v, pieces_[*v].tree.point(tree_edge, offset), height});
}

ClusterPoint transfer_across_wall(const Cluster& c, int edge, int from, const ClusterPoint& pt) {
  if (pt.vertex != from) throw InvalidPoint("point is not given at the source vertex");
  c.check(pt);
  const int to = c.other_end(edge, from);
  const auto& src = c.piece(from);
  const auto t = try_line_coord(src.tree, src.mark(edge), pt.horizontal);
  if (!t) throw InvalidPoint("point is not on the wall of " + where_edge(edge));
  const auto& dst = c.piece(to);
  TreePoint horizontal;
  try {
    horizontal = line_point(dst.tree, dst.mark(edge), pt.height);
  } catch (const SegmentOverflow& ex) {
    throw SegmentOverflow(std::string(ex.what()) + " across " + where_edge(edge), edge);
  }
  return {to, horizontal, *t};
}

PieceDistance piece_distance(const Cluster& c, int v, const ClusterPoint& x, const ClusterPoint& y) {
  const auto xr = c.represent_at(x, v);
  const auto yr = c.represent_at(y, v);
  if (!xr || !yr) throw InvalidPoint("point does not lie in piece of vertex " + std::to_string(c.vertex_id(v)));
  return {c.piece(v).tree.distance(xr->horizontal, yr->horizontal), abs_diff(xr->height, yr->height)};
}

std::vector<int> supporting_vertices(const Cluster& c, const ClusterPoint& x) {
  std::vector<int> out;
  for (const auto& rep : c.representations(x)) out.push_back(rep.vertex);
  return out;
}

int bass_serre_distance(const Cluster& c, const ClusterPoint& x, const ClusterPoint& y) {
  int best = std::numeric_limits<int>::max();
  const auto sy = supporting_vertices(c, y);
  for (int a : supporting_vertices(c, x)) {
    for (int b : sy) best = std::min(best, c.tree_distance(a, b));
  }
  return best;
}

json point_to_json(const Cluster& c, const ClusterPoint& p) {
  return {{"vertex", c.vertex_id(p.vertex)},
          {"edge", p.horizontal.edge},
          {"offset", to_string(p.horizontal.offset)},
          {"height", to_string(p.height)}};
}

ClusterPoint point_from_json(const Cluster& c, const json& doc) {
  try {
    return c.point(as_int(require(doc, "vertex"), "vertex"), as_int(require(doc, "edge"), "edge"),
                   as_rational(require(doc, "offset"), "offset"), as_rational(require(doc, "height"), "height"));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed point JSON: ") + ex.what());
  }
}

}  // namespace clustergeo

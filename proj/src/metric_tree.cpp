#include "clustergeo/metric_tree.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "clustergeo/errors.hpp"

namespace clustergeo {

MetricTree::MetricTree(const std::vector<EdgeSpec>& edges) {
  if (edges.empty()) throw ValidationError("metric tree needs at least one edge");
  for (const auto& e : edges) {
    ids_.push_back(e.a);
    ids_.push_back(e.b);
  }
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  const std::size_t n = ids_.size();
  if (edges.size() + 1 != n) {
    throw ValidationError("metric tree has " + std::to_string(edges.size()) + " edges on " +
                          std::to_string(n) + " vertices");
  }

  incident_.resize(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.a == e.b) throw ValidationError("self-loop at tree vertex " + std::to_string(e.a));
    if (e.length <= 0) throw ValidationError("non-positive length on tree edge " + std::to_string(i));
    const int a = *vertex_index(e.a);
    const int b = *vertex_index(e.b);
    edges_.push_back({a, b, e.length});
    incident_[a].push_back(static_cast<int>(i));
    incident_[b].push_back(static_cast<int>(i));
    total_length_ += e.length;
  }

  dist_.assign(n * n, Rational(0));
  parent_.assign(n * n, -1);
  std::vector<int> stack;
  std::vector<char> seen(n);
  for (std::size_t root = 0; root < n; ++root) {
    std::fill(seen.begin(), seen.end(), 0);
    seen[root] = 1;
    stack.assign(1, static_cast<int>(root));
    std::size_t reached = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int e : incident_[x]) {
        const int y = other_end(e, x);
        if (seen[y]) continue;
        seen[y] = 1;
        ++reached;
        dist_[root * n + y] = dist_[root * n + x] + edges_[e].length;
        parent_[root * n + y] = e;
        stack.push_back(y);
      }
    }
    if (reached != n) throw ValidationError("metric tree is not connected");
  }
}

std::optional<int> MetricTree::vertex_index(int id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<int>(it - ids_.begin());
}

int MetricTree::other_end(int e, int v) const {
  const auto& edge = edges_[e];
  return edge.a == v ? edge.b : edge.a;
}

Rational MetricTree::min_edge_length() const {
  Rational best = edges_.front().length;
  for (const auto& e : edges_) best = min_of(best, e.length);
  return best;
}

TreePoint MetricTree::vertex_point(int v) const {
  const int e = incident_.at(v).front();
  return {e, edges_[e].a == v ? Rational(0) : edges_[e].length};
}

TreePoint MetricTree::point(int e, const Rational& offset) const {
  if (e < 0 || e >= static_cast<int>(edges_.size())) {
    throw InvalidPoint("no tree edge " + std::to_string(e));
  }
  const auto& edge = edges_[e];
  if (offset < 0 || offset > edge.length) {
    throw InvalidPoint("offset " + to_string(offset) + " outside tree edge " + std::to_string(e));
  }
  if (offset == 0) return vertex_point(edge.a);
  if (offset == edge.length) return vertex_point(edge.b);
  return {e, offset};
}

bool MetricTree::contains(const TreePoint& p) const {
  if (p.edge < 0 || p.edge >= static_cast<int>(edges_.size())) return false;
  const auto& edge = edges_[p.edge];
  if (p.offset < 0 || p.offset > edge.length) return false;
  if (p.offset == 0) return incident_[edge.a].front() == p.edge;
  if (p.offset == edge.length) return incident_[edge.b].front() == p.edge;
  return true;
}

void MetricTree::check(const TreePoint& p) const {
  if (!contains(p)) {
    throw InvalidPoint("(" + std::to_string(p.edge) + ", " + to_string(p.offset) +
                       ") is not a canonical tree point");
  }
}

std::optional<int> MetricTree::vertex_at(const TreePoint& p) const {
  const auto& edge = edges_[p.edge];
  if (p.offset == 0) return edge.a;
  if (p.offset == edge.length) return edge.b;
  return std::nullopt;
}

Rational MetricTree::distance_to_vertex(const TreePoint& p, int v) const {
  const auto& edge = edges_[p.edge];
  const std::size_t n = vertex_count();
  Rational via_a = p.offset + dist_[edge.a * n + v];
  Rational via_b = edge.length - p.offset + dist_[edge.b * n + v];
  return via_a < via_b ? via_a : via_b;
}

Rational MetricTree::distance(const TreePoint& a, const TreePoint& b) const {
  if (a.edge == b.edge) return abs_diff(a.offset, b.offset);
  const auto& ea = edges_[a.edge];
  const auto& eb = edges_[b.edge];
  const std::size_t n = vertex_count();
  const Rational a_to_b_end = ea.length - a.offset;
  const Rational b_to_b_end = eb.length - b.offset;
  const std::array<const Rational*, 2> da{&a.offset, &a_to_b_end};
  const std::array<const Rational*, 2> db{&b.offset, &b_to_b_end};
  const std::array<int, 2> va{ea.a, ea.b};
  const std::array<int, 2> vb{eb.a, eb.b};
  Rational best;
  Rational cand;
  bool first = true;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cand = *da[i] + dist_[va[i] * n + vb[j]];
      cand += *db[j];
      if (first || cand < best) {
        best = cand;
        first = false;
      }
    }
  }
  return best;
}

std::vector<int> MetricTree::vertex_path(int u, int v) const {
  const std::size_t n = vertex_count();
  std::vector<int> path{v};
  int x = v;
  while (x != u) {
    x = other_end(parent_[u * n + x], x);
    path.push_back(x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<GeodesicPiece> MetricTree::geodesic(const TreePoint& a, const TreePoint& b) const {
  check(a);
  check(b);
  std::vector<GeodesicPiece> out;
  if (a == b) return out;
  if (a.edge == b.edge) {
    out.push_back({a.edge, a.offset, b.offset});
    return out;
  }
  const auto& ea = edges_[a.edge];
  const auto& eb = edges_[b.edge];
  const std::size_t n = vertex_count();
  int best_u = -1;
  int best_w = -1;
  Rational best;
  for (int u : {ea.a, ea.b}) {
    for (int w : {eb.a, eb.b}) {
      Rational d = (u == ea.a ? a.offset : Rational(ea.length - a.offset)) + dist_[u * n + w] +
                   (w == eb.a ? b.offset : Rational(eb.length - b.offset));
      if (best_u < 0 || d < best) {
        best = d;
        best_u = u;
        best_w = w;
      }
    }
  }
  const Rational u_off = best_u == ea.a ? Rational(0) : ea.length;
  if (a.offset != u_off) out.push_back({a.edge, a.offset, u_off});
  const auto path = vertex_path(best_u, best_w);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int e = parent_[best_w * n + path[k]];
    const auto& edge = edges_[e];
    if (edge.a == path[k]) {
      out.push_back({e, Rational(0), edge.length});
    } else {
      out.push_back({e, edge.length, Rational(0)});
    }
  }
  const Rational w_off = best_w == eb.a ? Rational(0) : eb.length;
  if (b.offset != w_off) out.push_back({b.edge, w_off, b.offset});
  return out;
}

TreePoint MetricTree::point_toward(const TreePoint& a, const TreePoint& b, const Rational& along) const {
  if (along < 0) throw InvalidPoint("negative distance along a geodesic");
  Rational left = along;
  for (const auto& piece : geodesic(a, b)) {
    const Rational len = abs_diff(piece.from, piece.to);
    if (left <= len) {
      return point(piece.edge, piece.from < piece.to ? Rational(piece.from + left)
                                                     : Rational(piece.from - left));
    }
    left -= len;
  }
  if (left == 0) return b;
  throw InvalidPoint("distance " + to_string(along) + " exceeds geodesic length");
}

// ---------------------------------------------------------------------------

Line::Line(const MetricTree& tree, std::vector<int> edges, int origin, Rational lo, Rational hi,
           int orient)
    : edges_(std::move(edges)), lo_(std::move(lo)), hi_(std::move(hi)), orient_(orient) {
  if (orient_ != 1 && orient_ != -1) throw ValidationError("line orientation must be +1 or -1");
  if (edges_.empty()) throw ValidationError("line needs at least one edge");
  if (origin < 0 || origin >= static_cast<int>(tree.vertex_count())) {
    throw ValidationError("line origin is not a tree vertex");
  }
  vertices_.push_back(origin);
  arc_.push_back(Rational(0));
  for (int e : edges_) {
    if (e < 0 || e >= static_cast<int>(tree.edge_count())) {
      throw ValidationError("line uses unknown tree edge " + std::to_string(e));
    }
    const auto& edge = tree.edge(e);
    const int cur = vertices_.back();
    if (edge.a != cur && edge.b != cur) {
      throw ValidationError("line edge " + std::to_string(e) + " does not continue the path");
    }
    const int next = edge.a == cur ? edge.b : edge.a;
    if (std::find(vertices_.begin(), vertices_.end(), next) != vertices_.end()) {
      throw ValidationError("line path revisits a vertex (not geodesic)");
    }
    forward_.push_back(edge.a == cur ? 1 : 0);
    vertices_.push_back(next);
    arc_.push_back(arc_.back() + edge.length);
  }
  if (hi_ - lo_ != arc_.back()) {
    throw ValidationError("line range length " + to_string(Rational(hi_ - lo_)) +
                          " differs from path length " + to_string(arc_.back()));
  }
}

std::optional<std::size_t> Line::vertex_position(int v) const {
  const auto it = std::find(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool operator==(const Line& x, const Line& y) {
  return x.edges_ == y.edges_ && x.vertices_ == y.vertices_ && x.lo_ == y.lo_ && x.hi_ == y.hi_ &&
         x.orient_ == y.orient_;
}

TreePoint line_point_at_arc(const MetricTree& tree, const Line& line, const Rational& s) {
  if (s < 0 || s > line.length()) {
    throw SegmentOverflow("arclength " + to_string(s) + " outside line of length " +
                          to_string(line.length()));
  }
  const auto& verts = line.vertices();
  // Last vertex with arc <= s.
  std::size_t k = 0;
  std::size_t lo = 0;
  std::size_t hi = verts.size() - 1;
  while (lo <= hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (line.vertex_arc(mid) <= s) {
      k = mid;
      lo = mid + 1;
    } else {
      if (mid == 0) break;
      hi = mid - 1;
    }
  }
  if (line.vertex_arc(k) == s) return tree.vertex_point(verts[k]);
  const int e = line.edges()[k];
  const Rational into = s - line.vertex_arc(k);
  return tree.point(e, line.forward(k) ? into : Rational(tree.edge(e).length - into));
}

TreePoint line_point(const MetricTree& tree, const Line& line, const Rational& t) {
  if (t < line.lo() || t > line.hi()) {
    throw SegmentOverflow("parameter " + to_string(t) + " outside line range [" +
                          to_string(line.lo()) + ", " + to_string(line.hi()) + "]");
  }
  return line_point_at_arc(tree, line, line.arc_of_param(t));
}

std::optional<Rational> try_line_coord(const MetricTree& tree, const Line& line, const TreePoint& p) {
  if (const auto v = tree.vertex_at(p)) {
    if (const auto k = line.vertex_position(*v)) return line.param_of_arc(line.vertex_arc(*k));
    return std::nullopt;
  }
  const auto& edges = line.edges();
  const auto it = std::find(edges.begin(), edges.end(), p.edge);
  if (it == edges.end()) return std::nullopt;
  const auto k = static_cast<std::size_t>(it - edges.begin());
  const Rational into = line.forward(k) ? p.offset : Rational(tree.edge(p.edge).length - p.offset);
  return line.param_of_arc(line.vertex_arc(k) + into);
}

Rational line_coord(const MetricTree& tree, const Line& line, const TreePoint& p) {
  auto t = try_line_coord(tree, line, p);
  if (!t) throw InvalidPoint("point does not lie on the line");
  return *t;
}

Projection foot_on_line(const MetricTree& tree, const TreePoint& p, const Line& line) {
  const Rational d0 = tree.distance_to_vertex(p, line.origin());
  const Rational d1 = tree.distance_to_vertex(p, line.terminus());
  // Gromov product: arclength of the branch point of p off the path.
  const Rational s = (d0 + line.length() - d1) / 2;
  return {line_point_at_arc(tree, line, s), line.param_of_arc(s), Rational((d0 + d1 - line.length()) / 2)};
}

namespace {

// Vertex sitting at parameter t when t is a line endpoint.
std::optional<int> endpoint_at(const Line& line, const Rational& t) {
  if (t == line.lo()) return line.orient() > 0 ? line.origin() : line.terminus();
  if (t == line.hi()) return line.orient() > 0 ? line.terminus() : line.origin();
  return std::nullopt;
}

bool open_endpoint_at(const MetricTree& tree, const Line& line, const Rational& t) {
  const auto v = endpoint_at(line, t);
  return v && !tree.is_leaf(*v);
}

}  // namespace

Projection project_to_line(const MetricTree& tree, const TreePoint& p, const Line& line) {
  tree.check(p);
  auto foot = foot_on_line(tree, p, line);
  if (foot.distance > 0 && open_endpoint_at(tree, line, foot.param)) {
    throw SegmentOverflow("projection foot sits at an open end of the line");
  }
  return foot;
}

LineRelation relate_lines(const MetricTree& tree, const Line& first, const Line& second) {
  LineRelation rel;
  const auto f0 = foot_on_line(tree, tree.vertex_point(second.origin()), first);
  const auto f1 = foot_on_line(tree, tree.vertex_point(second.terminus()), first);
  if (f0.param != f1.param) {
    rel.overlapping = true;
    const Rational c0 = line_coord(tree, second, f0.point);
    const Rational c1 = line_coord(tree, second, f1.point);
    rel.sigma = ((c1 - c0) > 0) == ((f1.param - f0.param) > 0) ? 1 : -1;
    rel.shift = c0 - rel.sigma * f0.param;
    rel.overlap_lo = min_of(f0.param, f1.param);
    rel.overlap_hi = max_of(f0.param, f1.param);
    return rel;
  }
  const auto back = foot_on_line(tree, f0.point, second);
  if (back.distance == 0) {
    rel.overlapping = true;
    rel.overlap_lo = rel.overlap_hi = f0.param;
    rel.sigma = 1;
    rel.shift = back.param - f0.param;
    return rel;
  }
  rel.foot1 = f0.param;
  rel.foot2 = back.param;
  rel.gap = back.distance;
  return rel;
}

Rational line_pair_distance(const LineRelation& rel, const Rational& x, const Rational& y) {
  if (!rel.overlapping) return abs_diff(x, rel.foot1) + rel.gap + abs_diff(y, rel.foot2);
  const Rational y1 = rel.sigma * (y - rel.shift);
  const Rational xc = clamp(x, rel.overlap_lo, rel.overlap_hi);
  const Rational yc = clamp(y1, rel.overlap_lo, rel.overlap_hi);
  return abs_diff(x, xc) + abs_diff(xc, yc) + abs_diff(y1, yc);
}

Bridge bridge(const MetricTree& tree, const Line& first, const Line& second) {
  const auto rel = relate_lines(tree, first, second);
  Bridge out;
  if (!rel.overlapping) {
    if (open_endpoint_at(tree, first, rel.foot1) || open_endpoint_at(tree, second, rel.foot2)) {
      throw SegmentOverflow("bridge foot sits at an open end of a line");
    }
    out.param1 = rel.foot1;
    out.param2 = rel.foot2;
    out.p = line_point(tree, first, rel.foot1);
    out.q = line_point(tree, second, rel.foot2);
    out.distance = rel.gap;
    return out;
  }
  // The common segment could grow past an end where both lines may continue
  // and at least one continuation is unknown.
  for (const Rational* end : {&rel.overlap_lo, &rel.overlap_hi}) {
    const Rational t2 = rel.sigma * *end + rel.shift;
    const bool end1 = endpoint_at(first, *end).has_value();
    const bool end2 = endpoint_at(second, t2).has_value();
    const bool open1 = open_endpoint_at(tree, first, *end);
    const bool open2 = open_endpoint_at(tree, second, t2);
    const bool goes_on1 = !end1 || open1;
    const bool goes_on2 = !end2 || open2;
    if (goes_on1 && goes_on2 && (open1 || open2)) {
      throw SegmentOverflow("common segment of two lines ends at an open end");
    }
  }
  out.param1 = (rel.overlap_lo + rel.overlap_hi) / 2;
  out.param2 = rel.sigma * out.param1 + rel.shift;
  out.p = line_point(tree, first, out.param1);
  out.q = out.p;
  out.distance = 0;
  return out;
}

}  // namespace clustergeo

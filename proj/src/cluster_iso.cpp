#include "clustergeo/cluster_iso.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>

#include "clustergeo/distance_oracle.hpp"
#include "clustergeo/errors.hpp"

namespace clustergeo {

using nlohmann::json;

bool operator==(const MarkedTreeIso& x, const MarkedTreeIso& y) {
  return x.vertex_image == y.vertex_image && x.mark_image == y.mark_image && x.mark_shift == y.mark_shift;
}

TreePoint apply(const MetricTree& target, const MarkedTreeIso& iso, const MetricTree& source, const TreePoint& p) {
  const auto& e = source.edge(p.edge);
  return target.point_toward(iso.vertex_image.at(e.a), iso.vertex_image.at(e.b), p.offset);
}

std::vector<Line> piece_lines(const Piece& piece) {
  std::vector<Line> out;
  for (const auto& [e, line] : piece.marks) {
    (void)e;
    out.push_back(line);
  }
  return out;
}

namespace {

int lo_end(const Line& l) { return l.orient() > 0 ? l.origin() : l.terminus(); }
int hi_end(const Line& l) { return l.orient() > 0 ? l.terminus() : l.origin(); }

// The tree with degree-2 vertices that carry no mark end smoothed away. An
// isometry of marked trees is an isomorphism of these reduced trees that
// respects lengths and mark ends.
struct Reduced {
  struct Arc {
    int to;
    Rational length;
  };
  struct Inner {
    int x;
    int y;
    Rational along;  // distance from x
  };
  std::vector<int> essential;
  std::vector<int> index;  // tree vertex -> essential position or -1
  std::vector<std::vector<Arc>> adj;
  std::vector<std::array<int, 3>> label;  // degree, mark lo ends, mark hi ends
  std::vector<std::optional<Inner>> inner;
};

Reduced reduce(const MetricTree& z, const std::vector<Line>& marks) {
  const std::size_t n = z.vertex_count();
  std::vector<int> lo_count(n, 0), hi_count(n, 0);
  for (const auto& m : marks) {
    ++lo_count[lo_end(m)];
    ++hi_count[hi_end(m)];
  }
  Reduced r;
  r.index.assign(n, -1);
  r.inner.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const int vi = static_cast<int>(v);
    if (z.degree(vi) != 2 || lo_count[v] > 0 || hi_count[v] > 0) {
      r.index[v] = static_cast<int>(r.essential.size());
      r.essential.push_back(vi);
      r.label.push_back({z.degree(vi), lo_count[v], hi_count[v]});
    }
  }
  r.adj.resize(r.essential.size());
  for (std::size_t k = 0; k < r.essential.size(); ++k) {
    const int x = r.essential[k];
    for (int e : z.incident_edges(x)) {
      int came = e;
      int cur = z.other_end(e, x);
      Rational len = z.edge(e).length;
      std::vector<std::pair<int, Rational>> passed;
      while (r.index[cur] < 0) {
        passed.emplace_back(cur, len);
        const auto& inc = z.incident_edges(cur);
        const int next = inc[0] == came ? inc[1] : inc[0];
        cur = z.other_end(next, cur);
        len += z.edge(next).length;
        came = next;
      }
      r.adj[k].push_back({r.index[cur], len});
      for (auto& [w, s] : passed) {
        if (!r.inner[w]) r.inner[w] = Reduced::Inner{static_cast<int>(k), r.index[cur], s};
      }
    }
    std::sort(r.adj[k].begin(), r.adj[k].end(), [](const auto& a, const auto& b) { return a.to < b.to; });
  }
  return r;
}

bool compatible(const std::vector<int>& phi, const Reduced& r, const Reduced& r2, const Line& m, const Line& m2) {
  return phi[r.index[lo_end(m)]] == r2.index[lo_end(m2)] && phi[r.index[hi_end(m)]] == r2.index[hi_end(m2)];
}

}  // namespace

bool for_each_marked_tree_iso(const MetricTree& z, const std::vector<Line>& marks, const MetricTree& z2,
                              const std::vector<Line>& marks2, const std::optional<MarkAnchor>& anchor,
                              const std::function<bool(const MarkedTreeIso&)>& visit) {
  if (anchor) {
    if (anchor->mark < 0 || anchor->mark >= static_cast<int>(marks.size()) || anchor->image < 0 ||
        anchor->image >= static_cast<int>(marks2.size())) {
      throw ValidationError("anchor does not name a mark on both sides");
    }
    const auto& m = marks[anchor->mark];
    const auto& m2 = marks2[anchor->image];
    if (m.length() != m2.length() || m.lo() + anchor->shift != m2.lo()) {
      throw ValidationError("anchor is not a unit-speed translation onto the image mark");
    }
  }
  if (z.total_length() != z2.total_length() || marks.size() != marks2.size()) return false;
  const Reduced r = reduce(z, marks);
  const Reduced r2 = reduce(z2, marks2);
  const std::size_t m = r.essential.size();
  if (m != r2.essential.size()) return false;

  const int start = anchor ? r.index[lo_end(marks[anchor->mark])] : 0;
  std::vector<int> order{start}, parent(m, -1);
  std::vector<Rational> parent_len(m);
  std::vector<char> seen(m, 0);
  seen[start] = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (const auto& arc : r.adj[order[k]]) {
      if (seen[arc.to]) continue;
      seen[arc.to] = 1;
      parent[arc.to] = order[k];
      parent_len[arc.to] = arc.length;
      order.push_back(arc.to);
    }
  }

  std::vector<int> phi(m, -1);
  std::vector<char> used(m, 0);
  MarkedTreeIso iso;
  iso.mark_image.assign(marks.size(), -1);
  iso.mark_shift.assign(marks.size(), Rational(0));
  std::vector<char> mark_used(marks2.size(), 0);

  std::function<bool(std::size_t)> assign_marks = [&](std::size_t k) -> bool {
    if (k == marks.size()) return visit(iso);
    for (std::size_t j = 0; j < marks2.size(); ++j) {
      if (mark_used[j]) continue;
      if (anchor && static_cast<int>(k) == anchor->mark && static_cast<int>(j) != anchor->image) continue;
      if (!compatible(phi, r, r2, marks[k], marks2[j])) continue;
      mark_used[j] = 1;
      iso.mark_image[k] = static_cast<int>(j);
      iso.mark_shift[k] = marks2[j].lo() - marks[k].lo();
      const bool stop = assign_marks(k + 1);
      mark_used[j] = 0;
      if (stop) return true;
    }
    return false;
  };

  auto finish = [&]() -> bool {
    iso.vertex_image.assign(z.vertex_count(), TreePoint{});
    for (std::size_t v = 0; v < z.vertex_count(); ++v) {
      if (r.index[v] >= 0) {
        iso.vertex_image[v] = z2.vertex_point(r2.essential[phi[r.index[v]]]);
      } else {
        const auto& in = *r.inner[v];
        iso.vertex_image[v] = z2.point_toward(z2.vertex_point(r2.essential[phi[in.x]]),
                                              z2.vertex_point(r2.essential[phi[in.y]]), in.along);
      }
    }
    return assign_marks(0);
  };

  std::function<bool(std::size_t)> assign = [&](std::size_t k) -> bool {
    if (k == m) return finish();
    const int x = order[k];
    const int p = parent[x];
    for (const auto& arc : r2.adj[phi[p]]) {
      const int y = arc.to;
      if (used[y] || arc.length != parent_len[x] || r2.label[y] != r.label[x]) continue;
      used[y] = 1;
      phi[x] = y;
      const bool stop = assign(k + 1);
      used[y] = 0;
      phi[x] = -1;
      if (stop) return true;
    }
    return false;
  };

  std::vector<int> starts;
  if (anchor) {
    starts.push_back(r2.index[lo_end(marks2[anchor->image])]);
  } else {
    for (std::size_t y = 0; y < m; ++y) starts.push_back(static_cast<int>(y));
  }
  for (int y : starts) {
    if (r2.label[y] != r.label[start]) continue;
    used[y] = 1;
    phi[start] = y;
    const bool stop = assign(1);
    used[y] = 0;
    phi[start] = -1;
    if (stop) return true;
  }
  return false;
}

std::optional<MarkedTreeIso> marked_tree_extend(const MetricTree& z, const std::vector<Line>& marks,
                                                const MetricTree& z2, const std::vector<Line>& marks2,
                                                const std::optional<MarkAnchor>& anchor) {
  std::optional<MarkedTreeIso> out;
  for_each_marked_tree_iso(z, marks, z2, marks2, anchor, [&](const MarkedTreeIso& iso) {
    out = iso;
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------

GoodTriple empty_triple(const Cluster& c) { return GoodTriple{std::vector<VertexMap>(c.vertex_count())}; }

std::vector<int> triple_domain(const GoodTriple& t) {
  std::vector<int> out;
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    if (t.vertices[v].image >= 0) out.push_back(static_cast<int>(v));
  }
  return out;
}

ClusterPoint apply(const Cluster& c, const Cluster& c2, const GoodTriple& t, const ClusterPoint& p) {
  for (const auto& rep : c.representations(p)) {
    const auto& vm = t.vertices.at(rep.vertex);
    if (vm.image < 0) continue;
    const auto h = apply(c2.piece(vm.image).tree, vm.theta, c.piece(rep.vertex).tree, rep.horizontal);
    return c2.canonical({vm.image, h, rep.height + vm.height_shift});
  }
  throw InvalidPoint("point lies outside the domain of the triple");
}

namespace {

GoodReport fail(int condition, std::string detail) {
  GoodReport r;
  r.failed_condition = condition;
  r.detail = std::move(detail);
  return r;
}

std::string vid(const Cluster& c, int v) { return "vertex " + std::to_string(c.vertex_id(v)); }

// Sample points of Q_v used for distance spot checks.
std::vector<ClusterPoint> samples(const Cluster& c, int v) {
  const auto& piece = c.piece(v);
  const int last = static_cast<int>(piece.tree.vertex_count()) - 1;
  const Rational mid = (piece.window_lo + piece.window_hi) / 2;
  return {{v, piece.tree.vertex_point(0), piece.window_lo},
          {v, piece.tree.vertex_point(last), piece.window_hi},
          {v, piece.tree.point(0, piece.tree.edge(0).length / 2), mid}};
}

}  // namespace

GoodReport verify_good(const Cluster& c, const Cluster& c2, const GoodTriple& t) {
  if (t.vertices.size() != c.vertex_count()) return fail(1, "triple does not cover the vertex list");
  const auto dom = triple_domain(t);
  if (dom.empty()) return fail(1, "U is empty");

  // (1) subtree, injective, simplicial.
  {
    std::vector<char> image_used(c2.vertex_count(), 0);
    for (int v : dom) {
      const int img = t.vertices[v].image;
      if (img >= static_cast<int>(c2.vertex_count())) return fail(1, "psi of " + vid(c, v) + " is not a vertex");
      if (image_used[img]) return fail(1, "psi is not injective at " + vid(c, v));
      image_used[img] = 1;
    }
    std::size_t inner_edges = 0;
    for (std::size_t e = 0; e < c.edge_count(); ++e) {
      const auto [a, b] = c.edge(static_cast<int>(e));
      if (t.vertices[a].image < 0 || t.vertices[b].image < 0) continue;
      ++inner_edges;
      if (c2.tree_distance(t.vertices[a].image, t.vertices[b].image) != 1) {
        return fail(1, "psi does not map Bass-Serre edge " + std::to_string(e) + " to an edge");
      }
    }
    if (inner_edges + 1 != dom.size()) return fail(1, "U is not connected");
  }

  // (4) shape of the data: a tree map per vertex and one height translation.
  for (int v : dom) {
    const auto& th = t.vertices[v].theta;
    const auto& piece = c.piece(v);
    if (th.vertex_image.size() != piece.tree.vertex_count() || th.mark_image.size() != piece.marks.size() ||
        th.mark_shift.size() != piece.marks.size()) {
      return fail(4, "map at " + vid(c, v) + " is not a product of a tree map and a height map");
    }
  }

  // (2) isometric on pieces, consistent across walls, distance spot checks.
  for (int v : dom) {
    const auto& z = c.piece(v).tree;
    const auto& z2 = c2.piece(t.vertices[v].image).tree;
    const auto& img = t.vertices[v].theta.vertex_image;
    for (const auto& p : img) {
      if (!z2.contains(p)) return fail(2, "image of a vertex of " + vid(c, v) + " is not a point");
    }
    for (std::size_t a = 0; a < img.size(); ++a) {
      for (std::size_t b = a + 1; b < img.size(); ++b) {
        if (z2.distance(img[a], img[b]) != z.vertex_distance(static_cast<int>(a), static_cast<int>(b))) {
          auto r = fail(2, "tree map at " + vid(c, v) + " is not isometric");
          r.witness = std::make_pair(ClusterPoint{v, z.vertex_point(static_cast<int>(a)), c.piece(v).window_lo},
                                     ClusterPoint{v, z.vertex_point(static_cast<int>(b)), c.piece(v).window_lo});
          return r;
        }
      }
    }
  }
  auto image_at = [&](const ClusterPoint& p) -> std::optional<ClusterPoint> {
    const auto& vm = t.vertices[p.vertex];
    const auto h = apply(c2.piece(vm.image).tree, vm.theta, c.piece(p.vertex).tree, p.horizontal);
    const ClusterPoint q{vm.image, h, p.height + vm.height_shift};
    try {
      return c2.canonical(q);
    } catch (const InvalidPoint&) {
      return std::nullopt;
    }
  };
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const auto [a, b] = c.edge(static_cast<int>(e));
    if (t.vertices[a].image < 0 || t.vertices[b].image < 0) continue;
    const auto& la = c.piece(a).mark(static_cast<int>(e));
    const auto& lb = c.piece(b).mark(static_cast<int>(e));
    for (const auto& s : {la.lo(), la.hi()}) {
      for (const auto& u : {lb.lo(), lb.hi()}) {
        const ClusterPoint from_a{a, line_point(c.piece(a).tree, la, s), u};
        const ClusterPoint from_b{b, line_point(c.piece(b).tree, lb, u), s};
        const auto ia = image_at(from_a);
        const auto ib = image_at(from_b);
        if (!ia || !ib || *ia != *ib) {
          auto r = fail(2, "images disagree across the wall of Bass-Serre edge " + std::to_string(e));
          r.witness = std::make_pair(from_a, from_b);
          return r;
        }
      }
    }
  }
  {
    std::vector<ClusterPoint> pts;
    for (int v : dom) {
      for (const auto& p : samples(c, v)) pts.push_back(p);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const auto pi = image_at(pts[i]);
        const auto pj = image_at(pts[j]);
        if (!pi || !pj ||
            exact_distance(c, pts[i], pts[j]).value != exact_distance(c2, *pi, *pj).value) {
          auto r = fail(2, "distance not preserved");
          r.witness = std::make_pair(pts[i], pts[j]);
          return r;
        }
      }
    }
  }

  // (3) onto the image piece.
  for (int v : dom) {
    const auto& vm = t.vertices[v];
    const auto& p = c.piece(v);
    const auto& p2 = c2.piece(vm.image);
    if (p.tree.total_length() != p2.tree.total_length()) {
      return fail(3, "tree map at " + vid(c, v) + " is not onto");
    }
    if (p.window_lo + vm.height_shift != p2.window_lo || p.window_hi + vm.height_shift != p2.window_hi) {
      return fail(3, "height window of " + vid(c, v) + " does not map onto its image window");
    }
  }

  // (5) marks onto marks, edge by edge.
  for (int v : dom) {
    const auto& vm = t.vertices[v];
    const auto& p = c.piece(v);
    const auto& p2 = c2.piece(vm.image);
    std::vector<char> hit(p2.marks.size(), 0);
    for (std::size_t k = 0; k < p.marks.size(); ++k) {
      const int j = vm.theta.mark_image[k];
      if (j < 0 || j >= static_cast<int>(p2.marks.size()) || hit[j]) {
        return fail(5, "marks of " + vid(c, v) + " are not mapped bijectively");
      }
      hit[j] = 1;
      const auto& [e, line] = p.marks[k];
      const auto& [e2, line2] = p2.marks[j];
      const Rational& shift = vm.theta.mark_shift[k];
      const auto end_lo = apply(p2.tree, vm.theta, p.tree, line_point(p.tree, line, line.lo()));
      const auto end_hi = apply(p2.tree, vm.theta, p.tree, line_point(p.tree, line, line.hi()));
      if (line.lo() + shift != line2.lo() || line.hi() + shift != line2.hi() ||
          end_lo != line_point(p2.tree, line2, line2.lo()) || end_hi != line_point(p2.tree, line2, line2.hi())) {
        return fail(5, "mark of Bass-Serre edge " + std::to_string(e) + " at " + vid(c, v) +
                           " does not go onto a mark by a translation");
      }
      const int w = c.other_end(e, v);
      if (t.vertices[w].image >= 0 && c2.other_end(e2, vm.image) != t.vertices[w].image) {
        return fail(5, "mark of Bass-Serre edge " + std::to_string(e) + " at " + vid(c, v) +
                           " goes to the mark of a different edge");
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

bool for_each_extension(const Cluster& c, const Cluster& c2, const GoodTriple& t, int e,
                        const std::function<bool(const VertexMap&, int)>& visit) {
  if (e < 0 || e >= static_cast<int>(c.edge_count())) throw ValidationError("unknown Bass-Serre edge");
  const auto [a, b] = c.edge(e);
  const bool in_a = t.vertices.at(a).image >= 0;
  const bool in_b = t.vertices.at(b).image >= 0;
  if (in_a == in_b) throw ValidationError("edge " + std::to_string(e) + " is not on the frontier of U");
  const int w = in_a ? a : b;
  const int v = in_a ? b : a;
  const auto& wm = t.vertices[w];
  const int k = c.piece(w).mark_index(e);
  const int j = wm.theta.mark_image.at(k);
  const int e2 = c2.piece(wm.image).marks.at(j).first;
  const int v2 = c2.other_end(e2, wm.image);
  for (const auto& vm : t.vertices) {
    if (vm.image == v2) return false;
  }
  const Rational shift = wm.theta.mark_shift[k];
  const auto& p = c.piece(v);
  const auto& p2 = c2.piece(v2);
  if (p.window_lo + shift != p2.window_lo || p.window_hi + shift != p2.window_hi) return false;
  MarkAnchor anchor{p.mark_index(e), p2.mark_index(e2), wm.height_shift};
  const auto& line = p.marks[anchor.mark].second;
  const auto& line2 = p2.marks[anchor.image].second;
  if (line.length() != line2.length() || line.lo() + anchor.shift != line2.lo()) return false;
  return for_each_marked_tree_iso(p.tree, piece_lines(p), p2.tree, piece_lines(p2), anchor,
                                  [&](const MarkedTreeIso& iso) { return visit(VertexMap{v2, iso, shift}, v); });
}

std::optional<GoodTriple> try_extend(const Cluster& c, const Cluster& c2, const GoodTriple& t, int e) {
  std::optional<GoodTriple> out;
  for_each_extension(c, c2, t, e, [&](const VertexMap& added, int v) {
    out = t;
    out->vertices[v] = added;
    return true;
  });
  return out;
}

std::optional<GoodTriple> isomorphic(const Cluster& c, const Cluster& c2) {
  const std::size_t n = c.vertex_count();
  if (n != c2.vertex_count()) return std::nullopt;
  // Bass-Serre edges in breadth-first order from vertex 0.
  std::vector<int> order_edges;
  {
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (const auto& [y, e] : c.neighbors(x)) {
        if (seen[y]) continue;
        seen[y] = 1;
        order_edges.push_back(e);
        queue.push_back(y);
      }
    }
  }
  GoodTriple t = empty_triple(c);
  std::function<bool(std::size_t)> grow = [&](std::size_t k) -> bool {
    if (k == order_edges.size()) return true;
    return for_each_extension(c, c2, t, order_edges[k], [&](const VertexMap& added, int v) {
      t.vertices[v] = added;
      if (grow(k + 1)) return true;
      t.vertices[v] = VertexMap{};
      return false;
    });
  };
  const auto& root = c.piece(0);
  const auto root_lines = piece_lines(root);
  for (std::size_t r2 = 0; r2 < n; ++r2) {
    const auto& target = c2.piece(static_cast<int>(r2));
    const Rational shift = target.window_lo - root.window_lo;
    if (root.window_hi + shift != target.window_hi) continue;
    const bool found = for_each_marked_tree_iso(root.tree, root_lines, target.tree, piece_lines(target), std::nullopt,
                                                [&](const MarkedTreeIso& iso) {
                                                  t.vertices[0] = VertexMap{static_cast<int>(r2), iso, shift};
                                                  if (grow(0)) return true;
                                                  t.vertices[0] = VertexMap{};
                                                  return false;
                                                });
    if (found) return t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> leaves(const MetricTree& z) {
  std::vector<int> out;
  for (std::size_t v = 0; v < z.vertex_count(); ++v) {
    if (z.is_leaf(static_cast<int>(v))) out.push_back(static_cast<int>(v));
  }
  return out;
}

// Every isometry z -> z2, as vertex images, found by matching leaf distance
// matrices; stops when `visit` returns true.
bool brute_tree_isometries(const MetricTree& z, const MetricTree& z2,
                           const std::function<bool(const std::vector<TreePoint>&)>& visit) {
  const auto lv = leaves(z);
  const auto lv2 = leaves(z2);
  if (lv.size() != lv2.size() || z.total_length() != z2.total_length()) return false;
  if (lv.size() > 12) throw ValidationError("brute-force isometry search is limited to 12 leaves");
  std::vector<int> image(lv.size(), -1);
  std::vector<char> used(lv2.size(), 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == lv.size()) {
      std::vector<TreePoint> out(z.vertex_count());
      for (std::size_t x = 0; x < z.vertex_count(); ++x) {
        const int xi = static_cast<int>(x);
        bool placed = false;
        for (std::size_t a = 0; a < lv.size() && !placed; ++a) {
          for (std::size_t b = 0; b < lv.size() && !placed; ++b) {
            if (z.vertex_distance(lv[a], xi) + z.vertex_distance(xi, lv[b]) != z.vertex_distance(lv[a], lv[b])) {
              continue;
            }
            out[x] = z2.point_toward(z2.vertex_point(lv2[image[a]]), z2.vertex_point(lv2[image[b]]),
                                     z.vertex_distance(lv[a], xi));
            placed = true;
          }
        }
        if (!placed) return false;
      }
      for (std::size_t x = 0; x < out.size(); ++x) {
        for (std::size_t y = x + 1; y < out.size(); ++y) {
          if (z2.distance(out[x], out[y]) != z.vertex_distance(static_cast<int>(x), static_cast<int>(y))) {
            return false;
          }
        }
      }
      return visit(out);
    }
    for (std::size_t j = 0; j < lv2.size(); ++j) {
      if (used[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        ok = z2.vertex_distance(lv2[j], lv2[image[k]]) == z.vertex_distance(lv[i], lv[k]);
      }
      if (!ok) continue;
      used[j] = 1;
      image[i] = static_cast<int>(j);
      const bool stop = rec(i + 1);
      used[j] = 0;
      if (stop) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace

std::optional<GoodTriple> brute_force_iso(const Cluster& c, const Cluster& c2) {
  const std::size_t n = c.vertex_count();
  if (n > 6) throw ValidationError("brute-force cluster isomorphism is limited to 6 Bass-Serre vertices");
  if (n != c2.vertex_count()) return std::nullopt;
  std::vector<int> psi(n);
  std::iota(psi.begin(), psi.end(), 0);
  do {
    bool simplicial = true;
    for (std::size_t e = 0; e < c.edge_count() && simplicial; ++e) {
      const auto [a, b] = c.edge(static_cast<int>(e));
      simplicial = c2.tree_distance(psi[a], psi[b]) == 1;
    }
    if (!simplicial) continue;
    GoodTriple t = empty_triple(c);
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      const auto& p = c.piece(static_cast<int>(v));
      const auto& p2 = c2.piece(psi[v]);
      const Rational shift = p2.window_lo - p.window_lo;
      if (p.window_hi + shift != p2.window_hi) {
        ok = false;
        break;
      }
      // Marks are forced by psi: the mark of e goes to the mark of psi(e),
      // shifted by the height translation at the far end.
      std::vector<int> mark_image;
      std::vector<Rational> mark_shift;
      for (const auto& [e, line] : p.marks) {
        const int w = c.other_end(e, static_cast<int>(v));
        const int e2 = c2.edge_between(psi[v], psi[w]);
        mark_image.push_back(p2.mark_index(e2));
        mark_shift.push_back(c2.piece(psi[w]).window_lo - c.piece(w).window_lo);
        (void)line;
      }
      ok = brute_tree_isometries(p.tree, p2.tree, [&](const std::vector<TreePoint>& image) {
        MarkedTreeIso iso{image, mark_image, mark_shift};
        for (std::size_t k = 0; k < p.marks.size(); ++k) {
          const auto& line = p.marks[k].second;
          const auto& line2 = p2.marks[mark_image[k]].second;
          const Rational lo = line.lo() + mark_shift[k];
          const Rational hi = line.hi() + mark_shift[k];
          if (lo != line2.lo() || hi != line2.hi()) return false;
          if (apply(p2.tree, iso, p.tree, line_point(p.tree, line, line.lo())) != line_point(p2.tree, line2, lo) ||
              apply(p2.tree, iso, p.tree, line_point(p.tree, line, line.hi())) != line_point(p2.tree, line2, hi)) {
            return false;
          }
        }
        t.vertices[v] = VertexMap{psi[v], iso, shift};
        return true;
      });
    }
    if (ok) return t;
  } while (std::next_permutation(psi.begin(), psi.end()));
  return std::nullopt;
}

json iso_to_json(const Cluster& c, const Cluster& c2, const GoodTriple& t) {
  json vertices = json::array();
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    const auto& vm = t.vertices[v];
    if (vm.image < 0) continue;
    json images = json::array();
    for (const auto& p : vm.theta.vertex_image) images.push_back({p.edge, to_string(p.offset)});
    json marks = json::array();
    const auto& piece = c.piece(static_cast<int>(v));
    const auto& piece2 = c2.piece(vm.image);
    for (std::size_t k = 0; k < piece.marks.size(); ++k) {
      marks.push_back({piece.marks[k].first, piece2.marks[vm.theta.mark_image[k]].first,
                       to_string(vm.theta.mark_shift[k])});
    }
    vertices.push_back({{"vertex", c.vertex_id(static_cast<int>(v))},
                        {"image", c2.vertex_id(vm.image)},
                        {"height_shift", to_string(vm.height_shift)},
                        {"tree_vertex_images", images},
                        {"marks", marks}});
  }
  return {{"vertices", vertices}};
}

}  // namespace clustergeo

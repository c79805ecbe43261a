#include "clustergeo/special_path.hpp"

#include <algorithm>

#include "clustergeo/distance_oracle.hpp"
#include "clustergeo/errors.hpp"

namespace clustergeo {

namespace {

ClusterPoint at(const Cluster& c, const ClusterPoint& p, int v) {
  auto rep = c.represent_at(p, v);
  if (!rep) throw InvalidPoint("point is not supported at vertex " + std::to_string(c.vertex_id(v)));
  return *rep;
}

template <typename F>
auto on_edge(int e, F&& f) {
  try {
    return f();
  } catch (const SegmentOverflow& ex) {
    if (ex.edge() >= 0) throw;
    throw SegmentOverflow(std::string(ex.what()) + " (Bass-Serre edge " + std::to_string(e) + ")", e);
  }
}

SpecialPath build(const Cluster& c, const ClusterPoint& y0, const ClusterPoint& zn, int from, int to) {
  SpecialPath out;
  out.vertices = c.tree_path(from, to);
  const auto& path = out.vertices;
  const std::size_t n = path.size() - 1;
  if (n == 0) {
    out.segments.push_back({from, y0, zn});
    out.length = path_length(c, out);
    return out;
  }
  std::vector<int> edges(n);
  for (std::size_t i = 0; i < n; ++i) edges[i] = c.edge_between(path[i], path[i + 1]);

  // p[i], q[i] in Z_{v_i}.
  std::vector<TreePoint> p(n + 1), q(n + 1);
  p[0] = y0.horizontal;
  q[n] = zn.horizontal;
  {
    const auto& piece = c.piece(path[0]);
    q[0] = on_edge(edges[0], [&] { return project_to_line(piece.tree, p[0], piece.mark(edges[0])).point; });
  }
  {
    const auto& piece = c.piece(path[n]);
    p[n] = on_edge(edges[n - 1], [&] { return project_to_line(piece.tree, q[n], piece.mark(edges[n - 1])).point; });
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto& piece = c.piece(path[i]);
    const auto b = on_edge(edges[i], [&] { return bridge(piece.tree, piece.mark(edges[i - 1]), piece.mark(edges[i])); });
    p[i] = b.p;
    q[i] = b.q;
  }

  // (q_i, u_i) in Q_{v_i} is (p_{i+1}, t_{i+1}) in Q_{v_{i+1}}.
  std::vector<Rational> t(n + 1), u(n + 1);
  t[0] = y0.height;
  u[n] = zn.height;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& here = c.piece(path[i]);
    const auto& there = c.piece(path[i + 1]);
    t[i + 1] = line_coord(here.tree, here.mark(edges[i]), q[i]);
    u[i] = line_coord(there.tree, there.mark(edges[i]), p[i + 1]);
  }
  for (std::size_t i = 0; i <= n; ++i) {
    out.segments.push_back({path[i], {path[i], p[i], t[i]}, {path[i], q[i], u[i]}});
  }
  out.length = path_length(c, out);
  return out;
}

}  // namespace

std::pair<int, int> special_path_ends(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn) {
  const auto s0 = supporting_vertices(c, x0);
  const auto sn = supporting_vertices(c, xn);
  std::pair<int, int> best{s0.front(), sn.front()};
  for (int a : s0) {
    for (int b : sn) {
      if (c.tree_distance(a, b) < c.tree_distance(best.first, best.second)) best = {a, b};
    }
  }
  return best;
}

SpecialPath special_path(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn) {
  const auto [from, to] = special_path_ends(c, x0, xn);
  return build(c, at(c, x0, from), at(c, xn, to), from, to);
}

SpecialPath special_path_along(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn, int from, int to) {
  return build(c, at(c, x0, from), at(c, xn, to), from, to);
}

Rational path_length(const Cluster& c, const SpecialPath& path) {
  Rational total;
  for (const auto& s : path.segments) total += piece_distance(c, s.vertex, s.entry, s.exit).total();
  return total;
}

std::vector<PathSegment> middle_segments(const SpecialPath& path) {
  const std::size_t n = path.vertices.size() - 1;
  if (n < 4) return {};
  return {path.segments.begin() + 2, path.segments.begin() + static_cast<std::ptrdiff_t>(n - 1)};
}

std::optional<PathSegment> segment_at(const SpecialPath& path, int vertex) {
  for (const auto& s : path.segments) {
    if (s.vertex == vertex) return s;
  }
  return std::nullopt;
}

void check_gluing(const Cluster& c, const SpecialPath& path) {
  for (std::size_t i = 0; i + 1 < path.segments.size(); ++i) {
    const auto& z = path.segments[i].exit;
    const auto& y = path.segments[i + 1].entry;
    const int e = c.edge_between(z.vertex, y.vertex);
    if (transfer_across_wall(c, e, z.vertex, z) != y) {
      throw Error("special path segments " + std::to_string(i) + " and " + std::to_string(i + 1) +
                  " are not glued across Bass-Serre edge " + std::to_string(e));
    }
  }
}

BilipschitzReport verify_bilipschitz(const Cluster& c, const std::vector<PointPair>& pairs,
                                     std::size_t subpath_pairs) {
  BilipschitzReport report;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [x, y] = pairs[k];
    ++report.pairs;
    SpecialPath sp;
    try {
      sp = special_path(c, x, y);
    } catch (const SegmentOverflow&) {
      ++report.overflow_count;
      continue;
    }
    const Rational d = exact_distance(c, x, y).value;
    if (sp.length < d) ++report.lower_bound_violations;
    const Rational ratio = d == 0 ? Rational(1) : Rational(sp.length / d);
    if (!report.attaining_pair || ratio > report.max_ratio) {
      report.attaining_pair = k;
      report.max_ratio = ratio;
    }
    if (k >= subpath_pairs) continue;
    const std::size_t n = sp.segments.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        ++report.subpath_checks;
        const auto& from = sp.segments[i];
        const auto& to = sp.segments[j];
        const auto sub = special_path_along(c, from.entry, to.exit, from.vertex, to.vertex);
        if (sub.segments.size() != j - i + 1 ||
            !std::equal(sub.segments.begin(), sub.segments.end(), sp.segments.begin() + i)) {
          ++report.subpath_mismatches;
        }
        const Rational sd = exact_distance(c, from.entry, to.exit).value;
        if (sub.length < sd) ++report.lower_bound_violations;
        const Rational sr = sd == 0 ? Rational(1) : Rational(sub.length / sd);
        report.subpath_max_ratio = max_of(report.subpath_max_ratio, sr);
      }
    }
  }
  return report;
}

std::vector<StarTerm> star_audit(const Cluster& c, const SpecialPath& path, const ClusterPoint& x0,
                                 const ClusterPoint& xn) {
  const std::size_t n = path.vertices.size() - 1;
  const auto opt = exact_distance_along(c, x0, xn, path.vertices.front(), path.vertices.back()).profile;
  std::vector<StarTerm> out;
  for (std::size_t i = 0; i <= n; ++i) {
    const auto& seg = path.segments[i];
    const Rational& t_i = seg.entry.height;
    const Rational& u_i = seg.exit.height;
    const Rational y = i == 0 ? t_i : opt.s[i - 1];
    const Rational z = i == n ? u_i : opt.h[i];
    out.push_back({abs_diff(t_i, u_i), abs_diff(y, z) + abs_diff(t_i, y) + abs_diff(z, u_i)});
  }
  return out;
}

}  // namespace clustergeo

#include "clustergeo/distance_oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "clustergeo/errors.hpp"

namespace clustergeo {

namespace {

void check_geodesic(const Cluster& c, const std::vector<int>& vertices) {
  if (vertices.empty()) throw InvalidPoint("crossing profile has no vertices");
  const int n = static_cast<int>(vertices.size()) - 1;
  for (int v : vertices) {
    if (v < 0 || v >= static_cast<int>(c.vertex_count())) throw InvalidPoint("profile names an unknown vertex");
  }
  if (c.tree_distance(vertices.front(), vertices.back()) != n) {
    throw InvalidPoint("profile vertices are not a Bass-Serre geodesic");
  }
  for (int i = 0; i < n; ++i) c.edge_between(vertices[i], vertices[i + 1]);
}

ClusterPoint require_at(const Cluster& c, const ClusterPoint& p, int v) {
  auto rep = c.represent_at(p, v);
  if (!rep) throw InvalidPoint("point is not supported at vertex " + std::to_string(c.vertex_id(v)));
  return *rep;
}

const ClusterPoint* find_at(const std::vector<ClusterPoint>& reps, int v) {
  for (const auto& r : reps) {
    if (r.vertex == v) return &r;
  }
  return nullptr;
}

CrossingProblem build_problem(const Cluster& c, const std::vector<int>& path, const ClusterPoint& p0,
                              const ClusterPoint& pn) {
  const int n = static_cast<int>(path.size()) - 1;
  std::vector<int> edges(n);
  for (int i = 0; i < n; ++i) edges[i] = c.edge_between(path[i], path[i + 1]);

  CrossingProblem out;
  out.s_slot.assign(n, -1);
  out.h_slot.assign(n, -1);
  auto& vars = out.chain.variables;
  auto& links = out.chain.links;

  auto push = [&](ChainVariable var, const ChainLink* link) {
    if (!vars.empty()) links.push_back(link ? *link : ChainLink{});
    vars.push_back(std::move(var));
    return static_cast<int>(vars.size()) - 1;
  };

  // Chain A is h0, s1, h2, ...; chain B is s0, h1, s2, ...
  for (int start_with_s = 0; start_with_s < 2; ++start_with_s) {
    for (int k = 0; k < n; ++k) {
      const bool is_s = (k % 2 == 0) == (start_with_s == 1);
      // s_k lives on gamma_{v_k,e_k}; h_k on gamma_{v_{k+1},e_k}.
      const auto& line = is_s ? c.piece(path[k]).mark(edges[k]) : c.piece(path[k + 1]).mark(edges[k]);
      ChainVariable var{line.lo(), line.hi(), 0, 0, {}};
      if (k == 0) {
        if (is_s) {
          const auto foot = foot_on_line(c.piece(path[0]).tree, p0.horizontal, line);
          var.constant += foot.distance;
          var.abs_terms.emplace_back(foot.param, 1);
        } else {
          var.abs_terms.emplace_back(p0.height, 1);
        }
      }
      if (k == n - 1) {
        if (is_s) {
          var.abs_terms.emplace_back(pn.height, 1);
        } else {
          const auto foot = foot_on_line(c.piece(path[n]).tree, pn.horizontal, line);
          var.constant += foot.distance;
          var.abs_terms.emplace_back(foot.param, 1);
        }
      }

      int slot = -1;
      if (k == 0) {
        slot = push(std::move(var), nullptr);
      } else if (!is_s) {
        // Vertical leg in Q_{v_k}: |s_{k-1} - h_k|.
        const ChainLink link{true, 1, 0, 0};
        slot = push(std::move(var), &link);
      } else {
        // Horizontal leg in Z_{v_k} from gamma_{v_k,e_{k-1}}(h_{k-1}) to gamma_{v_k,e_k}(s_k).
        const auto& rel = c.piece(path[k]).relation(edges[k - 1], edges[k]);
        if (!rel.overlapping) {
          vars.back().abs_terms.emplace_back(rel.foot1, 1);
          var.abs_terms.emplace_back(rel.foot2, 1);
          const ChainLink link{false, 1, 0, rel.gap};
          slot = push(std::move(var), &link);
        } else {
          const ChainLink plain{true, 1, 0, 0};
          push(ChainVariable{rel.overlap_lo, rel.overlap_hi, 0, 0, {}}, &plain);
          push(ChainVariable{rel.overlap_lo, rel.overlap_hi, 0, 0, {}}, &plain);
          const ChainLink last{true, rel.sigma, Rational(-rel.sigma * rel.shift), 0};
          slot = push(std::move(var), &last);
        }
      }
      (is_s ? out.s_slot : out.h_slot)[k] = slot;
    }
  }
  return out;
}

ExactDistance along(const Cluster& c, const ClusterPoint& p0, const ClusterPoint& pn, int from, int to) {
  ExactDistance out;
  if (from == to) {
    out.value = c.piece(from).tree.distance(p0.horizontal, pn.horizontal) + abs_diff(p0.height, pn.height);
    out.profile.vertices = {from};
    return out;
  }
  const auto path = c.tree_path(from, to);
  const auto problem = build_problem(c, path, p0, pn);
  const auto best = minimize_convex_pl(problem.chain);
  out.value = best.value;
  out.profile.vertices = path;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    out.profile.s.push_back(best.argmin[problem.s_slot[k]]);
    out.profile.h.push_back(best.argmin[problem.h_slot[k]]);
  }
  return out;
}

}  // namespace

Rational crossing_objective(const Cluster& c, const CrossingProfile& profile, const ClusterPoint& x0,
                            const ClusterPoint& xn) {
  const auto& path = profile.vertices;
  check_geodesic(c, path);
  const std::size_t n = path.size() - 1;
  if (profile.s.size() != n || profile.h.size() != n) throw InvalidPoint("crossing profile has wrong length");

  ClusterPoint entry = require_at(c, x0, path.front());
  const ClusterPoint last = require_at(c, xn, path.back());
  Rational total;
  for (std::size_t i = 0; i < n; ++i) {
    const int e = c.edge_between(path[i], path[i + 1]);
    const auto& here = c.piece(path[i]);
    const auto& there = c.piece(path[i + 1]);
    const ClusterPoint exit{path[i], line_point(here.tree, here.mark(e), profile.s[i]), profile.h[i]};
    if (exit.height < here.window_lo || exit.height > here.window_hi) {
      throw SegmentOverflow("crossing height outside window", e);
    }
    total += here.tree.distance(entry.horizontal, exit.horizontal) + abs_diff(entry.height, exit.height);
    entry = {path[i + 1], line_point(there.tree, there.mark(e), profile.h[i]), profile.s[i]};
  }
  total += c.piece(path.back()).tree.distance(entry.horizontal, last.horizontal) + abs_diff(entry.height, last.height);
  return total;
}

CrossingProblem crossing_problem(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn, int from,
                                 int to) {
  if (from == to) throw InvalidPoint("crossing problem needs distinct endpoints");
  return build_problem(c, c.tree_path(from, to), require_at(c, x0, from), require_at(c, xn, to));
}

ExactDistance exact_distance_along(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn, int from,
                                   int to) {
  return along(c, require_at(c, x0, from), require_at(c, xn, to), from, to);
}

ExactDistance exact_distance(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn) {
  const auto r0 = c.representations(x0);
  const auto rn = c.representations(xn);
  for (const auto& a : r0) {
    if (const auto* b = find_at(rn, a.vertex)) return along(c, a, *b, a.vertex, a.vertex);
  }
  std::optional<ExactDistance> best;
  for (const auto& a : r0) {
    for (const auto& b : rn) {
      auto d = along(c, a, b, a.vertex, b.vertex);
      if (!best || d.value < best->value) best = std::move(d);
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------

Rational default_epsilon(const Cluster& c) {
  Rational shortest = c.piece(0).tree.min_edge_length();
  for (std::size_t v = 1; v < c.vertex_count(); ++v) shortest = min_of(shortest, c.piece(v).tree.min_edge_length());
  return shortest / 8;
}

namespace {

std::vector<Rational> line_grid(const Line& line, const Rational& eps) {
  std::vector<Rational> out;
  for (Rational t = line.lo(); t < line.hi(); t += eps) out.push_back(t);
  out.push_back(line.hi());
  return out;
}

struct PieceGrid {
  // Sorted interior offsets per tree edge; horizontal node ids follow the
  // vertices, edge by edge.
  std::vector<std::vector<Rational>> interior;
  std::vector<int> first_interior;
  std::size_t horizontal_count = 0;
  std::vector<Rational> heights;
  std::size_t base = 0;

  std::size_t hid(const MetricTree& tree, const TreePoint& p) const {
    const auto& e = tree.edge(p.edge);
    if (p.offset == 0) return e.a;
    if (p.offset == e.length) return e.b;
    const auto& offs = interior[p.edge];
    const auto it = std::lower_bound(offs.begin(), offs.end(), p.offset);
    if (it == offs.end() || *it != p.offset) throw Error("grid point missing");
    return first_interior[p.edge] + static_cast<std::size_t>(it - offs.begin());
  }
  std::size_t kid(const Rational& height) const {
    const auto it = std::lower_bound(heights.begin(), heights.end(), height);
    if (it == heights.end() || *it != height) throw Error("grid height missing");
    return static_cast<std::size_t>(it - heights.begin());
  }
  std::size_t node(std::size_t h, std::size_t k) const { return base + h * heights.size() + k; }
};

class Scaler {
 public:
  void add(const Rational& r) { mpz_lcm(den_.get_mpz_t(), den_.get_mpz_t(), r.get_den().get_mpz_t()); }
  const mpz_class& denominator() const { return den_; }
  std::int64_t operator()(const Rational& r) const {
    const mpz_class scaled = r.get_num() * (den_ / r.get_den());
    if (!scaled.fits_slong_p()) throw CapExceeded("grid weights overflow 64-bit integers");
    return scaled.get_si();
  }

 private:
  mpz_class den_ = 1;
};

}  // namespace

Rational discretized_distance(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn,
                              const Rational& eps, std::size_t node_cap) {
  if (eps <= 0) throw ValidationError("grid spacing must be positive");
  const auto r0 = c.representations(x0);
  const auto rn = c.representations(xn);
  const std::size_t nv = c.vertex_count();

  Scaler scale;
  scale.add(eps);
  std::vector<PieceGrid> grids(nv);
  std::size_t total = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& piece = c.piece(v);
    const auto& tree = piece.tree;
    std::vector<std::set<Rational>> offsets(tree.edge_count());
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
      const auto& len = tree.edge(e).length;
      scale.add(len);
      for (Rational s = eps; s < len; s += eps) offsets[e].insert(s);
    }
    std::set<Rational> heights;
    for (Rational t = piece.window_lo; t < piece.window_hi; t += eps) heights.insert(t);
    heights.insert(piece.window_hi);
    scale.add(piece.window_lo);
    scale.add(piece.window_hi);

    auto add_horizontal = [&](const TreePoint& p) {
      const auto& len = tree.edge(p.edge).length;
      if (p.offset > 0 && p.offset < len) offsets[p.edge].insert(p.offset);
      scale.add(p.offset);
    };
    for (const auto& [nbr, e] : c.neighbors(v)) {
      const auto& own = piece.mark(e);
      scale.add(own.lo());
      for (const auto& t : line_grid(own, eps)) add_horizontal(line_point(tree, own, t));
      for (const auto& u : line_grid(c.piece(nbr).mark(e), eps)) heights.insert(u);
    }
    for (const auto* reps : {&r0, &rn}) {
      if (const auto* p = find_at(*reps, static_cast<int>(v))) {
        add_horizontal(p->horizontal);
        heights.insert(p->height);
        scale.add(p->height);
      }
    }

    auto& g = grids[v];
    g.interior.resize(tree.edge_count());
    g.first_interior.resize(tree.edge_count());
    std::size_t next = tree.vertex_count();
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
      g.first_interior[e] = static_cast<int>(next);
      g.interior[e].assign(offsets[e].begin(), offsets[e].end());
      next += g.interior[e].size();
    }
    g.horizontal_count = next;
    g.heights.assign(heights.begin(), heights.end());
    g.base = total;
    total += g.horizontal_count * g.heights.size();
    if (total > node_cap) {
      throw CapExceeded("grid needs more than " + std::to_string(node_cap) + " nodes");
    }
  }

  // Horizontal adjacency per piece and vertical steps per height, in scaled units.
  std::vector<std::vector<std::vector<std::pair<std::size_t, std::int64_t>>>> hadj(nv);
  std::vector<std::vector<std::int64_t>> vstep(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& tree = c.piece(v).tree;
    const auto& g = grids[v];
    hadj[v].resize(g.horizontal_count);
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
      const auto& edge = tree.edge(e);
      std::size_t prev = edge.a;
      Rational prev_off = 0;
      for (std::size_t k = 0; k <= g.interior[e].size(); ++k) {
        const bool end = k == g.interior[e].size();
        const std::size_t cur = end ? static_cast<std::size_t>(edge.b) : g.first_interior[e] + k;
        const Rational off = end ? edge.length : g.interior[e][k];
        const auto w = scale(off - prev_off);
        hadj[v][prev].emplace_back(cur, w);
        hadj[v][cur].emplace_back(prev, w);
        prev = cur;
        prev_off = off;
      }
    }
    for (std::size_t k = 0; k + 1 < g.heights.size(); ++k) vstep[v].push_back(scale(g.heights[k + 1] - g.heights[k]));
  }

  // Wall gluing: (gamma_{a,e}(t), u) in Q_a is (gamma_{b,e}(u), t) in Q_b.
  std::vector<std::pair<std::size_t, std::size_t>> glue;
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const auto [a, b] = c.edge(static_cast<int>(e));
    const auto& la = c.piece(a).mark(static_cast<int>(e));
    const auto& lb = c.piece(b).mark(static_cast<int>(e));
    const auto ga = line_grid(la, eps);
    const auto gb = line_grid(lb, eps);
    std::vector<std::size_t> ha, hb;
    for (const auto& t : ga) ha.push_back(grids[a].hid(c.piece(a).tree, line_point(c.piece(a).tree, la, t)));
    for (const auto& u : gb) hb.push_back(grids[b].hid(c.piece(b).tree, line_point(c.piece(b).tree, lb, u)));
    for (std::size_t i = 0; i < ga.size(); ++i) {
      const std::size_t kb = grids[b].kid(ga[i]);
      for (std::size_t j = 0; j < gb.size(); ++j) {
        const std::size_t x = grids[a].node(ha[i], grids[a].kid(gb[j]));
        const std::size_t y = grids[b].node(hb[j], kb);
        glue.emplace_back(x, y);
        glue.emplace_back(y, x);
      }
    }
  }
  std::sort(glue.begin(), glue.end());
  std::vector<std::size_t> glue_start(total + 1, 0);
  for (const auto& [x, y] : glue) {
    (void)y;
    ++glue_start[x + 1];
  }
  for (std::size_t i = 0; i < total; ++i) glue_start[i + 1] += glue_start[i];

  std::vector<std::size_t> owner(total);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto size = grids[v].horizontal_count * grids[v].heights.size();
    std::fill(owner.begin() + grids[v].base, owner.begin() + grids[v].base + size, v);
  }

  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(total, kInf);
  using Item = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (const auto& p : r0) {
    const auto& g = grids[p.vertex];
    const auto s = g.node(g.hid(c.piece(p.vertex).tree, p.horizontal), g.kid(p.height));
    dist[s] = 0;
    queue.emplace(0, s);
  }
  std::vector<char> target(total, 0);
  for (const auto& p : rn) {
    const auto& g = grids[p.vertex];
    target[g.node(g.hid(c.piece(p.vertex).tree, p.horizontal), g.kid(p.height))] = 1;
  }

  auto relax = [&](std::size_t to, std::int64_t d) {
    if (d < dist[to]) {
      dist[to] = d;
      queue.emplace(d, to);
    }
  };
  while (!queue.empty()) {
    const auto [d, x] = queue.top();
    queue.pop();
    if (d != dist[x]) continue;
    if (target[x]) {
      Rational out(mpz_class(static_cast<long>(d)), scale.denominator());
      out.canonicalize();
      return out;
    }
    const std::size_t v = owner[x];
    const auto& g = grids[v];
    const std::size_t k_count = g.heights.size();
    const std::size_t local = x - g.base;
    const std::size_t h = local / k_count;
    const std::size_t k = local % k_count;
    for (const auto& [nh, w] : hadj[v][h]) relax(g.node(nh, k), d + w);
    if (k > 0) relax(x - 1, d + vstep[v][k - 1]);
    if (k + 1 < k_count) relax(x + 1, d + vstep[v][k]);
    for (std::size_t i = glue_start[x]; i < glue_start[x + 1]; ++i) relax(glue[i].second, d);
  }
  throw Error("grid graph is disconnected");
}

}  // namespace clustergeo

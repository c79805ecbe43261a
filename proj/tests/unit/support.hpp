#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "clustergeo/cluster.hpp"
#include "clustergeo/generator.hpp"
#include "clustergeo/metric_tree.hpp"

namespace testing_support {

using clustergeo::ClusterSpec;
using clustergeo::MarkSpec;
using clustergeo::MetricTree;
using clustergeo::PieceSpec;
using clustergeo::Rational;

inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Tripod with center 0 and leaves 1, 2, 3 at the given leg lengths.
inline std::vector<MetricTree::EdgeSpec> tripod(const Rational& a, const Rational& b, const Rational& c) {
  return {{0, 1, a}, {0, 2, b}, {0, 3, c}};
}

// Random tree on n vertices with ids 0..n-1 and lengths k/den, k in [1, max_k].
inline std::vector<MetricTree::EdgeSpec> random_tree(clustergeo::Rng& rng, int n, int max_k, int den) {
  std::vector<MetricTree::EdgeSpec> edges;
  for (int v = 1; v < n; ++v) {
    const int parent = static_cast<int>(rng.uniform(0, v - 1));
    edges.push_back({parent, v, q(rng.uniform(1, max_k), den)});
  }
  rng.shuffle(edges);
  return edges;
}

// All-pairs vertex distances by Floyd-Warshall over the edge list, indexed by
// external id (ids must be 0..n-1).
inline std::vector<std::vector<std::optional<Rational>>> floyd(const std::vector<MetricTree::EdgeSpec>& edges, int n) {
  std::vector<std::vector<std::optional<Rational>>> d(n, std::vector<std::optional<Rational>>(n));
  for (int v = 0; v < n; ++v) d[v][v] = Rational(0);
  for (const auto& e : edges) {
    d[e.a][e.b] = e.length;
    d[e.b][e.a] = e.length;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!d[i][k] || !d[k][j]) continue;
        const Rational via = *d[i][k] + *d[k][j];
        if (!d[i][j] || via < *d[i][j]) d[i][j] = via;
      }
    }
  }
  return d;
}

// A point given by edge-list index and offset from that edge's first end,
// measured against the Floyd-Warshall table: in a tree the shortest route
// between points on different edges leaves through one end of each.
inline Rational brute_distance(const std::vector<MetricTree::EdgeSpec>& edges, int n, int e1, const Rational& o1,
                               int e2, const Rational& o2) {
  const auto d = floyd(edges, n);
  if (e1 == e2) return o1 < o2 ? Rational(o2 - o1) : Rational(o1 - o2);
  const auto& x = edges[e1];
  const auto& y = edges[e2];
  const std::pair<int, Rational> xs[] = {{x.a, o1}, {x.b, x.length - o1}};
  const std::pair<int, Rational> ys[] = {{y.a, o2}, {y.b, y.length - o2}};
  std::optional<Rational> best;
  for (const auto& [u, du] : xs) {
    for (const auto& [w, dw] : ys) {
      const Rational total = du + *d[u][w] + dw;
      if (!best || total < *best) best = total;
    }
  }
  return *best;
}

// Two pieces, each a single edge of length 20 parametrized over [-10, 10]
// from tree vertex 0, windows [-10, 10].
inline ClusterSpec two_piece_spec() {
  ClusterSpec s;
  s.vertices = {0, 1};
  s.edges = {{0, 1}};
  for (int v : {0, 1}) {
    s.pieces[v] = PieceSpec{{{0, 1, q(20)}}, q(-10), q(10)};
    s.marks[{v, 0}] = MarkSpec{{0}, q(-10), q(10), 0, 1};
  }
  return s;
}

// Chain u=0 - v=1 - w=2 of tripods with center 0. In Q_u and Q_w the mark
// runs leaf 1 -> center -> leaf 2 (legs 2, 2) and leaf 3 hangs off at
// distance 1. In Q_v all legs have length 2 and the two marks share the leg
// to leaf 1, so the special path is forced through their common segment.
inline ClusterSpec tripod_chain_spec() {
  ClusterSpec s;
  s.vertices = {0, 1, 2};
  s.edges = {{0, 1}, {1, 2}};
  s.pieces[0] = PieceSpec{tripod(q(2), q(2), q(1)), q(0), q(4)};
  s.pieces[1] = PieceSpec{tripod(q(2), q(2), q(2)), q(0), q(4)};
  s.pieces[2] = PieceSpec{tripod(q(2), q(2), q(1)), q(0), q(4)};
  s.marks[{0, 0}] = MarkSpec{{0, 1}, q(0), q(4), 1, 1};
  s.marks[{1, 0}] = MarkSpec{{0, 1}, q(0), q(4), 1, 1};  // leaf 1 -> center -> leaf 2
  s.marks[{1, 1}] = MarkSpec{{0, 2}, q(0), q(4), 1, 1};  // leaf 1 -> center -> leaf 3
  s.marks[{2, 1}] = MarkSpec{{0, 1}, q(0), q(4), 1, 1};
  return s;
}

}  // namespace testing_support

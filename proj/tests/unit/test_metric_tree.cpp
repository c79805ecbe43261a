#include <gtest/gtest.h>

#include "clustergeo/errors.hpp"
#include "clustergeo/metric_tree.hpp"
#include "support.hpp"

using namespace clustergeo;
using testing_support::q;

TEST(Rational, CanonicalText) {
  EXPECT_EQ(to_string(parse_rational("7/2")), "7/2");
  EXPECT_EQ(to_string(parse_rational("-3")), "-3");
  EXPECT_EQ(to_string(parse_rational("0")), "0");
  EXPECT_EQ(parse_rational("-5/4"), q(-5, 4));
  for (const char* bad : {"", "4/2", "1/1", "2/-3", "0/5", "x", "1/0", "+1", "1.5", " 1", "01"}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
}

TEST(Rational, RoundTrip) {
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const Rational r = q(rng.uniform(-1000, 1000), rng.uniform(1, 60));
    EXPECT_EQ(parse_rational(to_string(r)), r);
  }
}

TEST(MetricTree, RejectsNonTrees) {
  EXPECT_THROW(MetricTree({{0, 1, q(1)}, {1, 2, q(1)}, {2, 0, q(1)}}), ValidationError);
  EXPECT_THROW(MetricTree({{0, 1, q(1)}, {2, 3, q(1)}}), ValidationError);
  EXPECT_THROW(MetricTree({{0, 1, q(0)}}), ValidationError);
  EXPECT_THROW(MetricTree({{0, 0, q(1)}}), ValidationError);
  EXPECT_THROW(MetricTree({}), ValidationError);
}

TEST(MetricTree, DistanceExamples) {
  const MetricTree edge({{0, 1, q(7, 2)}});
  EXPECT_EQ(edge.distance(edge.vertex_point(0), edge.vertex_point(1)), q(7, 2));
  const auto p = edge.point(0, q(1));
  EXPECT_EQ(edge.distance(p, p), 0);

  const auto legs = testing_support::tripod(q(1), q(2), q(3));
  const MetricTree t(legs);
  EXPECT_EQ(t.distance(t.vertex_point(1), t.vertex_point(3)), 4);
  EXPECT_EQ(testing_support::brute_distance(legs, 4, 0, q(1), 2, q(3)), 4);
}

TEST(MetricTree, GeodesicExamples) {
  const MetricTree t(testing_support::tripod(q(1), q(2), q(3)));
  const auto a = t.point(1, q(1, 2));
  EXPECT_TRUE(t.geodesic(a, a).empty());
  const auto inside = t.geodesic(t.point(1, q(1, 2)), t.point(1, q(3, 2)));
  ASSERT_EQ(inside.size(), 1u);
  EXPECT_EQ(inside[0].edge, 1);
  EXPECT_EQ(inside[0].from, q(1, 2));
  EXPECT_EQ(inside[0].to, q(3, 2));

  const auto legs = t.geodesic(t.vertex_point(1), t.vertex_point(3));
  ASSERT_EQ(legs.size(), 2u);
  EXPECT_EQ(legs[0].edge, 0);
  EXPECT_EQ(legs[0].from, 1);
  EXPECT_EQ(legs[0].to, 0);
  EXPECT_EQ(legs[1].edge, 2);
  EXPECT_EQ(legs[1].from, 0);
  EXPECT_EQ(legs[1].to, 3);
}

TEST(MetricTree, VertexPointsAreCanonical) {
  const MetricTree t(testing_support::tripod(q(1), q(2), q(3)));
  // The center is the a-end of every edge; it lives on edge 0.
  EXPECT_EQ(t.point(2, q(0)), t.point(0, q(0)));
  EXPECT_EQ(t.point(1, q(2)), t.vertex_point(2));
  EXPECT_THROW(t.point(1, q(3)), InvalidPoint);
  EXPECT_THROW(t.check(TreePoint{2, q(0)}), InvalidPoint);
}

// Property: distances and geodesic lengths agree with Floyd-Warshall on random
// trees, at random points.
TEST(MetricTreeProperty, DistanceMatchesFloyd) {
  Rng rng(11);
  for (int round = 0; round < 60; ++round) {
    const int n = static_cast<int>(rng.uniform(2, 12));
    const auto edges = testing_support::random_tree(rng, n, 6, 2);
    const MetricTree t(edges);
    for (int k = 0; k < 20; ++k) {
      const int e1 = static_cast<int>(rng.index(edges.size()));
      const int e2 = static_cast<int>(rng.index(edges.size()));
      const Rational o1 = edges[e1].length * q(rng.uniform(0, 4), 4);
      const Rational o2 = edges[e2].length * q(rng.uniform(0, 4), 4);
      const auto a = t.point(e1, o1), b = t.point(e2, o2);
      const Rational expected = testing_support::brute_distance(edges, n, e1, o1, e2, o2);
      ASSERT_EQ(t.distance(a, b), expected);
      ASSERT_EQ(t.distance(b, a), expected);
      Rational along = 0;
      for (const auto& piece : t.geodesic(a, b)) along += abs_diff(piece.from, piece.to);
      ASSERT_EQ(along, expected);
      // point_toward lands on the geodesic at the requested distance.
      const Rational frac = expected * q(rng.uniform(0, 3), 3);
      const auto m = t.point_toward(a, b, frac);
      ASSERT_EQ(t.distance(a, m), frac);
      ASSERT_EQ(t.distance(m, b), expected - frac);
    }
  }
}

namespace {

// Path 0-1-2-3-4 with unit edges plus a branch 2-5 of length 2.
std::vector<MetricTree::EdgeSpec> comb() {
  return {{0, 1, q(1)}, {1, 2, q(1)}, {2, 3, q(1)}, {3, 4, q(1)}, {2, 5, q(2)}};
}

}  // namespace

TEST(Line, PointAndCoordinate) {
  const MetricTree t(comb());
  const Line line(t, {0, 1, 2, 3}, 0, q(-1), q(3), 1);
  EXPECT_EQ(line_point(t, line, q(-1)), t.vertex_point(0));
  EXPECT_EQ(line_point(t, line, q(3)), t.vertex_point(4));
  const auto mid = line_point(t, line, q(1));
  EXPECT_EQ(t.distance(mid, t.vertex_point(0)), 2);
  EXPECT_EQ(t.distance(mid, t.vertex_point(4)), 2);
  for (int k = 0; k <= 16; ++k) {
    const Rational s = q(-1) + q(k, 4);
    EXPECT_EQ(line_coord(t, line, line_point(t, line, s)), s);
  }
  EXPECT_THROW(line_point(t, line, q(4)), SegmentOverflow);
  EXPECT_THROW(line_coord(t, line, t.vertex_point(5)), InvalidPoint);

  const Line reversed(t, {0, 1, 2, 3}, 0, q(-1), q(3), -1);
  EXPECT_EQ(line_point(t, reversed, q(3)), t.vertex_point(0));
  EXPECT_THROW(Line(t, {0, 2}, 0, q(0), q(2), 1), ValidationError);
  EXPECT_THROW(Line(t, {0, 1}, 0, q(0), q(3), 1), ValidationError);
}

TEST(Line, ProjectionExamples) {
  const MetricTree t(comb());
  const Line line(t, {0, 1, 2, 3}, 0, q(0), q(4), 1);
  // On the line: itself.
  const auto on = t.point(1, q(1, 2));
  const auto self = project_to_line(t, on, line);
  EXPECT_EQ(self.point, on);
  EXPECT_EQ(self.distance, 0);
  // Leaf 5 at distance 2 from the branch point 2.
  const auto foot = project_to_line(t, t.vertex_point(5), line);
  EXPECT_EQ(foot.point, t.vertex_point(2));
  EXPECT_EQ(foot.param, 2);
  EXPECT_EQ(foot.distance, 2);
}

TEST(Line, ProjectionOverflowAtOpenEnd) {
  const MetricTree t(comb());
  // Ends at vertex 3, which is not a leaf: points beyond it overflow.
  const Line open(t, {0, 1, 2}, 0, q(0), q(3), 1);
  EXPECT_THROW(project_to_line(t, t.vertex_point(4), open), SegmentOverflow);
  // Feet strictly inside never depend on the continuation.
  EXPECT_EQ(project_to_line(t, t.vertex_point(5), open).param, 2);
  // The stored-segment foot never throws.
  EXPECT_EQ(foot_on_line(t, t.vertex_point(4), open).param, 3);
}

// Property: the projection minimizes distance over a fine sample of the line
// (feet of grid points sit on vertices or on the point itself).
TEST(LineProperty, ProjectionIsClosestPoint) {
  Rng rng(5);
  for (int round = 0; round < 60; ++round) {
    const int n = static_cast<int>(rng.uniform(3, 10));
    const auto edges = testing_support::random_tree(rng, n, 4, 1);
    const MetricTree t(edges);
    // A leaf-to-leaf line never overflows.
    std::vector<int> leaves;
    for (int v = 0; v < static_cast<int>(t.vertex_count()); ++v) {
      if (t.is_leaf(v)) leaves.push_back(v);
    }
    const int a = leaves[rng.index(leaves.size())];
    int b = leaves[rng.index(leaves.size())];
    if (a == b) b = leaves[(std::find(leaves.begin(), leaves.end(), a) - leaves.begin() + 1) % leaves.size()];
    const auto verts = t.vertex_path(a, b);
    std::vector<int> path;
    for (std::size_t k = 0; k + 1 < verts.size(); ++k) {
      for (int e : t.incident_edges(verts[k])) {
        if (t.other_end(e, verts[k]) == verts[k + 1]) path.push_back(e);
      }
    }
    const Rational len = t.vertex_distance(a, b);
    const Line line(t, path, a, q(0), len, 1);
    for (int k = 0; k < 10; ++k) {
      const int e = static_cast<int>(rng.index(edges.size()));
      const auto p = t.point(e, edges[e].length * q(rng.uniform(0, 4), 4));
      const auto proj = project_to_line(t, p, line);
      std::optional<Rational> best;
      for (Rational s = 0; s <= len; s += q(1, 4)) {
        const Rational d = t.distance(p, line_point(t, line, s));
        if (!best || d < *best) best = d;
      }
      ASSERT_EQ(proj.distance, *best);
      ASSERT_EQ(t.distance(p, proj.point), proj.distance);
      ASSERT_EQ(line_coord(t, line, proj.point), proj.param);
    }
  }
}

TEST(Bridge, Examples) {
  // Two leaf-to-leaf lines joined by the edge 2-3 of length 5/4.
  const std::vector<MetricTree::EdgeSpec> h{{0, 2, q(1)}, {1, 2, q(1)}, {2, 3, q(5, 4)}, {3, 4, q(1)}, {3, 5, q(1)}};
  const MetricTree t(h);
  const Line l1(t, {0, 1}, 0, q(0), q(2), 1);
  const Line l2(t, {3, 4}, 4, q(0), q(2), 1);
  const auto b = bridge(t, l1, l2);
  EXPECT_EQ(b.p, t.vertex_point(2));
  EXPECT_EQ(b.q, t.vertex_point(3));
  EXPECT_EQ(b.distance, q(5, 4));
  EXPECT_EQ(b.param1, 1);
  EXPECT_EQ(b.param2, 1);

  // Same line: midpoint of the overlap.
  const auto same = bridge(t, l1, l1);
  EXPECT_EQ(same.p, same.q);
  EXPECT_EQ(same.distance, 0);
  EXPECT_EQ(same.param1, 1);

  // Overlap on [1, 3] of a common parametrization.
  const MetricTree path({{0, 1, q(1)}, {1, 2, q(2)}, {2, 3, q(1)}, {1, 4, q(1)}, {2, 5, q(1)}});
  const Line x(path, {0, 1, 2}, 0, q(0), q(4), 1);
  const Line y(path, {3, 1, 4}, 4, q(0), q(4), 1);
  const auto r = relate_lines(path, x, y);
  EXPECT_TRUE(r.overlapping);
  EXPECT_EQ(r.overlap_lo, 1);
  EXPECT_EQ(r.overlap_hi, 3);
  const auto mb = bridge(path, x, y);
  EXPECT_EQ(mb.p, mb.q);
  EXPECT_EQ(mb.param1, 2);
  EXPECT_EQ(mb.param2, 2);
}

// Property: line_pair_distance agrees with the tree distance of the points.
TEST(LineProperty, RelationMatchesDistances) {
  Rng rng(19);
  for (int round = 0; round < 40; ++round) {
    const int n = static_cast<int>(rng.uniform(4, 10));
    const auto edges = testing_support::random_tree(rng, n, 3, 1);
    const MetricTree t(edges);
    auto random_line = [&]() {
      int a = static_cast<int>(rng.index(t.vertex_count()));
      int b = static_cast<int>(rng.index(t.vertex_count()));
      while (b == a) b = static_cast<int>(rng.index(t.vertex_count()));
      const auto verts = t.vertex_path(a, b);
      std::vector<int> path;
      for (std::size_t k = 0; k + 1 < verts.size(); ++k) {
        for (int e : t.incident_edges(verts[k])) {
          if (t.other_end(e, verts[k]) == verts[k + 1]) path.push_back(e);
        }
      }
      const Rational lo = q(rng.uniform(-3, 3));
      return Line(t, path, a, lo, lo + t.vertex_distance(a, b), rng.chance(50) ? 1 : -1);
    };
    const Line l1 = random_line(), l2 = random_line();
    const auto rel = relate_lines(t, l1, l2);
    for (int k = 0; k < 10; ++k) {
      const Rational x = l1.lo() + l1.length() * q(rng.uniform(0, 8), 8);
      const Rational y = l2.lo() + l2.length() * q(rng.uniform(0, 8), 8);
      ASSERT_EQ(line_pair_distance(rel, x, y), t.distance(line_point(t, l1, x), line_point(t, l2, y)));
    }
  }
}

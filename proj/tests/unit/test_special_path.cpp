#include <gtest/gtest.h>

#include "clustergeo/distance_oracle.hpp"
#include "clustergeo/errors.hpp"
#include "clustergeo/generator.hpp"
#include "clustergeo/special_path.hpp"
#include "support.hpp"

using namespace clustergeo;
using testing_support::q;

TEST(SpecialPath, SamePieceIsGeodesic) {
  const Cluster c = validate(testing_support::tripod_chain_spec());
  const auto x = c.point(0, 2, q(1), q(3));
  const auto y = c.point(0, 1, q(1), q(1, 2));
  const auto sp = special_path(c, x, y);
  ASSERT_EQ(sp.vertices, std::vector<int>{0});
  ASSERT_EQ(sp.segments.size(), 1u);
  EXPECT_EQ(sp.length, piece_distance(c, 0, x, y).total());
  EXPECT_EQ(path_length(c, sp), sp.length);
  EXPECT_EQ(sp.length, exact_distance(c, x, y).value);
}

TEST(SpecialPath, TwoPieceExample) {
  const Cluster c = validate(testing_support::two_piece_spec());
  const auto x0 = c.point(0, 0, q(10), q(0));
  const auto xn = c.point(1, 0, q(15), q(3));
  EXPECT_EQ(special_path(c, x0, xn).length, 8);
  const auto along = special_path_along(c, x0, xn, 0, 1);
  EXPECT_EQ(along.length, 8);
  EXPECT_NO_THROW(check_gluing(c, along));
  // The wall point is xn seen from Q_0 at the height of its parameter.
  EXPECT_EQ(along.segments[0].exit.horizontal, c.piece(0).tree.point(0, q(10)));
  EXPECT_EQ(along.segments[0].exit.height, 5);
}

TEST(SpecialPath, OverlappingMarksAreNotGeodesic) {
  const Cluster c = validate(testing_support::tripod_chain_spec());
  const auto x0 = c.point(0, 2, q(1), q(3));
  const auto xn = c.point(2, 2, q(1), q(3));
  const auto sp = special_path(c, x0, xn);
  ASSERT_EQ(sp.vertices, (std::vector<int>{0, 1, 2}));
  EXPECT_NO_THROW(check_gluing(c, sp));
  // Through the overlap midpoint: 1 + 2 in Q_0, 0 in Q_1, 1 + 2 in Q_2.
  EXPECT_EQ(sp.length, 6);
  EXPECT_EQ(exact_distance(c, x0, xn).value, 4);
  const auto& middle = sp.segments[1];
  EXPECT_EQ(middle.entry.horizontal, middle.exit.horizontal);
  EXPECT_EQ(middle.entry.height, middle.exit.height);
  EXPECT_EQ(piece_distance(c, 1, middle.entry, middle.exit).total(), 0);

  const auto report = verify_bilipschitz(c, {{x0, xn}});
  EXPECT_EQ(report.max_ratio, q(3, 2));
  EXPECT_EQ(report.lower_bound_violations, 0u);
  EXPECT_EQ(report.subpath_mismatches, 0u);
  for (const auto& term : star_audit(c, sp, x0, xn)) EXPECT_LE(term.lhs, term.rhs);
}

TEST(SpecialPath, OverflowNamesTheEdge) {
  ClusterSpec s;
  s.vertices = {0, 1};
  s.edges = {{0, 1}};
  // Z_0 is a path 0 - 1 - 2 whose mark stops at the inner vertex 1.
  s.pieces[0] = PieceSpec{{{0, 1, q(2)}, {1, 2, q(2)}}, q(0), q(2)};
  s.pieces[1] = PieceSpec{testing_support::tripod(q(1), q(1), q(1)), q(0), q(2)};
  s.marks[{0, 0}] = MarkSpec{{0}, q(0), q(2), 0, 1};
  s.marks[{1, 0}] = MarkSpec{{0, 1}, q(0), q(2), 1, 1};
  const Cluster c = validate(s);
  const auto x0 = c.point(0, 1, q(2), q(1));  // tree vertex 2, past the open end
  const auto xn = c.point(1, 2, q(1), q(1));
  try {
    special_path(c, x0, xn);
    FAIL() << "expected SegmentOverflow";
  } catch (const SegmentOverflow& err) {
    EXPECT_EQ(err.edge(), 0);
  }
  const auto report = verify_bilipschitz(c, {{x0, xn}});
  EXPECT_EQ(report.overflow_count, 1u);
}

TEST(Bilipschitz, DegenerateAndSamePiece) {
  const Cluster c = validate(testing_support::tripod_chain_spec());
  const auto x = c.point(1, 1, q(1), q(1));
  const auto report = verify_bilipschitz(c, {{x, x}, {x, c.point(1, 0, q(1, 2), q(3))}});
  EXPECT_EQ(report.pairs, 2u);
  EXPECT_EQ(report.max_ratio, 1);
}

namespace {

// A generator-pinned chain of 6 pieces; vertex index k is the k-th link.
Cluster chain6(std::uint64_t seed) {
  GeneratorParams params;
  params.seed = seed;
  params.chain = true;
  params.t_min = 6;
  params.t_max = 6;
  params.tree_edges_max = 10;
  return validate(generate(params));
}

// A point of Q_v whose only support is v.
ClusterPoint interior_point(const Cluster& c, Rng& rng, int v) {
  for (;;) {
    const auto p = random_point(c, rng, v);
    if (supporting_vertices(c, p) == std::vector<int>{v}) return p;
  }
}

}  // namespace

TEST(SpecialPath, MiddleSegmentsDependOnlyOnTheVertexPath) {
  const Cluster c = chain6(42);
  Rng rng(1);
  const auto a = special_path(c, interior_point(c, rng, 0), interior_point(c, rng, 5));
  const auto b = special_path(c, interior_point(c, rng, 0), interior_point(c, rng, 5));
  ASSERT_EQ(a.vertices, b.vertices);
  ASSERT_EQ(a.vertices.size(), 6u);
  const auto ma = middle_segments(a);
  ASSERT_EQ(ma.size(), 2u);
  EXPECT_EQ(ma, middle_segments(b));

  const auto short_path = special_path(c, interior_point(c, rng, 0), interior_point(c, rng, 3));
  EXPECT_TRUE(middle_segments(short_path).empty());
}

TEST(SpecialPath, DeepVertexSegmentsAgree) {
  const Cluster c = chain6(7);
  Rng rng(2);
  // Through v = 2 from different ends, one of them reversed.
  const auto a = special_path(c, interior_point(c, rng, 0), interior_point(c, rng, 4));
  const auto b = special_path(c, interior_point(c, rng, 5), interior_point(c, rng, 0));
  const auto sa = segment_at(a, 2);
  const auto sb = segment_at(b, 2);
  ASSERT_TRUE(sa && sb);
  EXPECT_EQ(sa->entry, sb->exit);
  EXPECT_EQ(sa->exit, sb->entry);
  // Vertex 1 is adjacent to the end vertex 0: its segment depends on the ends.
  EXPECT_TRUE(segment_at(a, 1).has_value());
}

// Property: on generated clusters special paths are glued, never shorter
// than the distance, and their sub-paths are the special paths of their ends.
TEST(SpecialPathProperty, GluedAndAboveDistance) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GeneratorParams params;
    params.seed = seed;
    params.t_min = 3;
    params.t_max = 7;
    params.tree_edges_max = 15;
    const Cluster c = validate(generate(params));
    Rng rng(seed);
    std::vector<PointPair> pairs;
    for (int k = 0; k < 20; ++k) pairs.push_back({random_point(c, rng), random_point(c, rng)});
    for (const auto& [x, y] : pairs) {
      const auto sp = special_path(c, x, y);
      ASSERT_NO_THROW(check_gluing(c, sp));
      ASSERT_GE(sp.length, exact_distance(c, x, y).value);
      for (const auto& term : star_audit(c, sp, x, y)) ASSERT_LE(term.lhs, term.rhs);
    }
    const auto report = verify_bilipschitz(c, pairs);
    ASSERT_EQ(report.overflow_count, 0u);
    ASSERT_EQ(report.lower_bound_violations, 0u);
    ASSERT_EQ(report.subpath_mismatches, 0u);
  }
}

#include <gtest/gtest.h>

#include "clustergeo/cluster.hpp"
#include "clustergeo/errors.hpp"
#include "clustergeo/generator.hpp"
#include "support.hpp"

using namespace clustergeo;
using testing_support::q;
using testing_support::two_piece_spec;

TEST(Validate, SingleVertex) {
  ClusterSpec s;
  s.vertices = {7};
  s.pieces[7] = PieceSpec{{{0, 1, q(3)}, {1, 2, q(1)}}, q(-1), q(1)};
  const Cluster c = validate(s);
  EXPECT_EQ(c.vertex_count(), 1u);
  EXPECT_TRUE(c.piece(0).marks.empty());
  const auto p = c.point(7, 1, q(1, 2), q(1));
  EXPECT_EQ(supporting_vertices(c, p), std::vector<int>{0});
  EXPECT_THROW(c.point(7, 1, q(1, 2), q(2)), InvalidPoint);
}

TEST(Validate, WindowRangeMismatch) {
  ClusterSpec s = two_piece_spec();
  s.pieces[1].window_lo = q(0);
  s.pieces[1].window_hi = q(5);
  s.marks[{0, 0}].lo = q(0);
  s.marks[{0, 0}].hi = q(20);
  try {
    validate(s);
    FAIL() << "expected a window/range mismatch";
  } catch (const ValidationError& err) {
    EXPECT_NE(std::string(err.what()).find("window/range mismatch"), std::string::npos) << err.what();
  }
}

TEST(Validate, StructuralErrors) {
  auto expect_invalid = [](ClusterSpec s) { EXPECT_THROW(validate(s), ValidationError); };
  {
    auto s = two_piece_spec();
    s.marks.erase({1, 0});
    expect_invalid(s);
  }
  {
    auto s = two_piece_spec();
    s.marks[{0, 0}].hi = q(11);  // range length differs from path length
    expect_invalid(s);
  }
  {
    auto s = two_piece_spec();
    s.edges = {{0, 0}};
    expect_invalid(s);
  }
  {
    auto s = two_piece_spec();
    s.pieces.erase(1);
    expect_invalid(s);
  }
  {
    auto s = two_piece_spec();
    s.pieces[0].window_hi = q(-11);
    expect_invalid(s);
  }
  {
    auto s = two_piece_spec();
    s.marks[{0, 0}].origin = 9;
    expect_invalid(s);
  }
  {
    auto s = two_piece_spec();
    s.vertices = {0, 1, 2};
    expect_invalid(s);
  }
}

TEST(Cluster, JsonRoundTrip) {
  GeneratorParams params;
  params.seed = 3;
  const ClusterSpec s = generate(params);
  const std::string text = dump_cluster(s);
  const ClusterSpec back = cluster_spec_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(dump_cluster(back), text);
  EXPECT_THROW(cluster_spec_from_json(nlohmann::json::parse(R"({"tree": {}})")), ParseError);
  auto bad = to_json(s);
  bad["pieces"].begin().value()["height_window"] = {"0", "1.5"};
  EXPECT_THROW(cluster_spec_from_json(bad), ParseError);
}

TEST(Wall, TransferExamples) {
  const Cluster c = validate(two_piece_spec());
  // (t, u) = (0, 0): parameter 0 is offset 10 from tree vertex 0.
  const ClusterPoint origin{0, c.piece(0).tree.point(0, q(10)), q(0)};
  const auto across = transfer_across_wall(c, 0, 0, origin);
  EXPECT_EQ(across.vertex, 1);
  EXPECT_EQ(across.horizontal, c.piece(1).tree.point(0, q(10)));
  EXPECT_EQ(across.height, 0);

  // (3, 5) -> (5, 3).
  const ClusterPoint p{0, c.piece(0).tree.point(0, q(13)), q(5)};
  const auto flipped = transfer_across_wall(c, 0, 0, p);
  EXPECT_EQ(flipped.horizontal, c.piece(1).tree.point(0, q(15)));
  EXPECT_EQ(flipped.height, 3);
}

// Property: transferring twice is the identity on random wall points.
TEST(WallProperty, DoubleTransferIsIdentity) {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 100; ++seed) {
    GeneratorParams params;
    params.seed = seed;
    params.t_min = 2;
    params.t_max = 5;
    params.tree_edges_max = 12;
    const Cluster c = validate(generate(params));
    Rng rng(seed);
    for (int k = 0; k < 10 && checked < 100; ++k) {
      const int e = static_cast<int>(rng.index(c.edge_count()));
      const auto [a, b] = c.edge(e);
      const int from = rng.chance(50) ? a : b;
      const auto& line = c.piece(from).mark(e);
      const auto& other = c.piece(c.other_end(e, from)).mark(e);
      const ClusterPoint p{from, line_point(c.piece(from).tree, line, line.lo() + line.length() * q(rng.uniform(0, 8), 8)),
                           other.lo() + other.length() * q(rng.uniform(0, 8), 8)};
      const auto there = transfer_across_wall(c, e, from, p);
      ASSERT_EQ(transfer_across_wall(c, e, there.vertex, there), p);
      ASSERT_EQ(c.canonical(p), c.canonical(there));
      ++checked;
    }
  }
}

TEST(Cluster, PieceDistanceExamples) {
  const Cluster c = validate(two_piece_spec());
  const auto x = c.point(0, 0, q(3), q(2));
  EXPECT_EQ(piece_distance(c, 0, x, x).total(), 0);
  EXPECT_EQ(piece_distance(c, 0, x, c.point(0, 0, q(3), q(9))).total(), 7);
  EXPECT_EQ(piece_distance(c, 0, x, c.point(0, 0, q(7), q(5))).total(), 7);
}

TEST(Cluster, SupportsAndBassSerreDistance) {
  const Cluster c = validate(testing_support::tripod_chain_spec());
  const auto u = c.point(0, 2, q(1), q(1));  // leaf 3 of Q_0, off the mark
  const auto w = c.point(2, 2, q(1), q(1));
  EXPECT_EQ(supporting_vertices(c, u), std::vector<int>{0});
  EXPECT_EQ(bass_serre_distance(c, u, u), 0);
  EXPECT_EQ(bass_serre_distance(c, u, w), 2);
  // Height 3 is parameter 3 of Q_1's first mark, on the leg only that mark uses.
  const auto wall01 = c.point(0, 0, q(1), q(3));
  EXPECT_EQ(supporting_vertices(c, wall01), (std::vector<int>{0, 1}));
  EXPECT_EQ(bass_serre_distance(c, wall01, w), 1);
  // Height 1 lands on the leg both marks of Q_1 share, hence on both walls.
  const auto triple = c.point(0, 0, q(1), q(1));
  EXPECT_EQ(supporting_vertices(c, triple), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(c.representations(triple).size(), 3u);
  EXPECT_EQ(bass_serre_distance(c, triple, w), 0);
  // On the wall between Q_1 and Q_2: distance 0 to points of Q_2.
  const auto wall12 = c.point(1, 2, q(1), q(1));
  EXPECT_EQ(supporting_vertices(c, wall12), (std::vector<int>{1, 2}));
  EXPECT_EQ(bass_serre_distance(c, wall12, w), 0);
}

TEST(Cluster, HeightOutsideTransferRange) {
  // Mark of (0, e) covers [-10, 10]; Q_1's mark range is shrunk to [0, 10]
  // by making its tree longer than the wall.
  ClusterSpec s;
  s.vertices = {0, 1};
  s.edges = {{0, 1}};
  s.pieces[0] = PieceSpec{{{0, 1, q(20)}}, q(-10), q(10)};
  s.pieces[1] = PieceSpec{{{0, 1, q(10)}, {1, 2, q(10)}}, q(-10), q(10)};
  s.marks[{0, 0}] = MarkSpec{{0}, q(-10), q(10), 0, 1};
  s.marks[{1, 0}] = MarkSpec{{0}, q(0), q(10), 0, 1};
  const Cluster c = validate(s);
  // On gamma_{0,e} with height -5: outside the range of gamma_{1,e}.
  const ClusterPoint p{0, c.piece(0).tree.point(0, q(4)), q(-5)};
  EXPECT_EQ(supporting_vertices(c, p), std::vector<int>{0});
  EXPECT_THROW(transfer_across_wall(c, 0, 0, p), SegmentOverflow);
  const ClusterPoint r{0, c.piece(0).tree.point(0, q(4)), q(5)};
  EXPECT_EQ(supporting_vertices(c, r), (std::vector<int>{0, 1}));
  // Interior points of adjacent pieces.
  const auto far = c.point(1, 1, q(5), q(0));
  EXPECT_EQ(supporting_vertices(c, far), std::vector<int>{1});
  EXPECT_EQ(bass_serre_distance(c, c.canonical(p), far), 1);
  EXPECT_THROW(piece_distance(c, 0, p, far), InvalidPoint);
}

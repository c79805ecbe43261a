#pragma once

#include <optional>
#include <vector>

#include "clustergeo/rational.hpp"

namespace clustergeo {

// Internal vertex indices are positions in the sorted list of external ids;
// edge ids are positions in the edge list the tree was built from.
struct TreeEdge {
  int a = 0;
  int b = 0;
  Rational length;
};

// A point of a metric tree: `offset` is measured from edge(edge).a. Vertex
// points always live on their lowest-id incident edge, so two TreePoints are
// the same geometric point iff they compare equal.
struct TreePoint {
  int edge = 0;
  Rational offset;
};

inline bool operator==(const TreePoint& x, const TreePoint& y) {
  return x.edge == y.edge && x.offset == y.offset;
}
inline bool operator!=(const TreePoint& x, const TreePoint& y) { return !(x == y); }

// Piece of a geodesic along one edge, offsets in travel order.
struct GeodesicPiece {
  int edge = 0;
  Rational from;
  Rational to;
};

class MetricTree {
 public:
  struct EdgeSpec {
    int a = 0;
    int b = 0;
    Rational length;
  };

  // Throws ValidationError unless the edges form a tree with positive lengths.
  explicit MetricTree(const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const TreeEdge& edge(int e) const { return edges_.at(e); }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  int vertex_id(int v) const { return ids_.at(v); }
  std::optional<int> vertex_index(int id) const;
  const std::vector<int>& incident_edges(int v) const { return incident_.at(v); }
  int degree(int v) const { return static_cast<int>(incident_.at(v).size()); }
  bool is_leaf(int v) const { return degree(v) == 1; }
  int other_end(int e, int v) const;
  const Rational& total_length() const { return total_length_; }
  Rational min_edge_length() const;

  TreePoint vertex_point(int v) const;
  // Canonical point at `offset` from edge(e).a; InvalidPoint when out of range.
  TreePoint point(int e, const Rational& offset) const;
  // Throws InvalidPoint unless `p` is a canonical point of this tree.
  void check(const TreePoint& p) const;
  bool contains(const TreePoint& p) const;
  std::optional<int> vertex_at(const TreePoint& p) const;

  const Rational& vertex_distance(int u, int v) const { return dist_[u * vertex_count() + v]; }
  Rational distance(const TreePoint& a, const TreePoint& b) const;
  Rational distance_to_vertex(const TreePoint& p, int v) const;
  std::vector<GeodesicPiece> geodesic(const TreePoint& a, const TreePoint& b) const;
  // Vertices on the path from u to v, both included.
  std::vector<int> vertex_path(int u, int v) const;
  // The point at distance `along` from a on the geodesic [a, b].
  TreePoint point_toward(const TreePoint& a, const TreePoint& b, const Rational& along) const;

 private:
  std::vector<int> ids_;
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<Rational> dist_;
  // parent_[root * n + v]: edge leaving v towards root, -1 at the root.
  std::vector<int> parent_;
  Rational total_length_;
};

// A finite geodesic segment of a tree with a unit-speed parametrization over
// [lo, hi]. The path runs from its origin vertex; orient = +1 puts lo at the
// origin, orient = -1 puts hi there.
class Line {
 public:
  // `origin` is an internal vertex index. Throws ValidationError when the
  // edge path is not a simple path from origin or the range length differs
  // from the path length.
  Line(const MetricTree& tree, std::vector<int> edges, int origin, Rational lo, Rational hi,
       int orient);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational length() const { return hi_ - lo_; }
  int orient() const { return orient_; }
  const std::vector<int>& edges() const { return edges_; }
  const std::vector<int>& vertices() const { return vertices_; }
  int origin() const { return vertices_.front(); }
  int terminus() const { return vertices_.back(); }

  // Arclength <-> parameter.
  Rational param_of_arc(const Rational& s) const { return orient_ > 0 ? Rational(lo_ + s) : Rational(hi_ - s); }
  Rational arc_of_param(const Rational& t) const { return orient_ > 0 ? Rational(t - lo_) : Rational(hi_ - t); }
  // Arclength from origin of the k-th path vertex.
  const Rational& vertex_arc(std::size_t k) const { return arc_[k]; }
  std::optional<std::size_t> vertex_position(int v) const;
  bool forward(std::size_t k) const { return forward_[k] != 0; }

  friend bool operator==(const Line& x, const Line& y);

 private:
  std::vector<int> edges_;
  std::vector<int> vertices_;
  std::vector<Rational> arc_;
  std::vector<char> forward_;
  Rational lo_;
  Rational hi_;
  int orient_ = 1;
};

inline bool operator!=(const Line& x, const Line& y) { return !(x == y); }

// SegmentOverflow when t is outside [lo, hi].
TreePoint line_point(const MetricTree& tree, const Line& line, const Rational& t);
TreePoint line_point_at_arc(const MetricTree& tree, const Line& line, const Rational& s);
std::optional<Rational> try_line_coord(const MetricTree& tree, const Line& line, const TreePoint& p);
// InvalidPoint when p is not on the line.
Rational line_coord(const MetricTree& tree, const Line& line, const TreePoint& p);

struct Projection {
  TreePoint point;
  Rational param;
  Rational distance;
};

// Closest point of the stored segment; never overflows.
Projection foot_on_line(const MetricTree& tree, const TreePoint& p, const Line& line);

// Closest point of the line viewed as a piece of a longer geodesic. A line
// endpoint that is not a leaf of the tree is open: the geodesic could go on
// past it. When the foot sits at an open endpoint and p is elsewhere, the foot
// of the extension is unknown and SegmentOverflow is thrown.
Projection project_to_line(const MetricTree& tree, const TreePoint& p, const Line& line);

// How two lines of the same tree sit relative to each other. When they meet,
// the common part is [overlap_lo, overlap_hi] in first-line parameters and a
// parameter t there corresponds to sigma * t + shift on the second line. When
// they are disjoint, foot1/foot2 are the parameters of the unique bridge and
// gap its length.
struct LineRelation {
  bool overlapping = false;
  Rational overlap_lo;
  Rational overlap_hi;
  int sigma = 1;
  Rational shift;
  Rational foot1;
  Rational foot2;
  Rational gap;
};

LineRelation relate_lines(const MetricTree& tree, const Line& first, const Line& second);

// Distance between first(x) and second(y), computed from the relation alone.
Rational line_pair_distance(const LineRelation& rel, const Rational& x, const Rational& y);

struct Bridge {
  TreePoint p;
  TreePoint q;
  Rational param1;
  Rational param2;
  Rational distance;
};

// Shortest connector between two lines. Intersecting lines return the
// midpoint of their common segment twice. Throws SegmentOverflow when a foot
// depends on how an open endpoint would continue.
Bridge bridge(const MetricTree& tree, const Line& first, const Line& second);

}  // namespace clustergeo

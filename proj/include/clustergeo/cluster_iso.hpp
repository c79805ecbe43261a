#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clustergeo/cluster.hpp"

namespace clustergeo {

// An isometry of marked trees Z -> Z'. It is stored as the images of the
// vertices of Z (degree-2 vertices may land inside edges of Z'); mark k of Z
// goes onto mark mark_image[k] of Z' with parameter map t -> t + mark_shift[k].
struct MarkedTreeIso {
  std::vector<TreePoint> vertex_image;
  std::vector<int> mark_image;
  std::vector<Rational> mark_shift;
};

bool operator==(const MarkedTreeIso& x, const MarkedTreeIso& y);

// Image of a point of Z under the isometry.
TreePoint apply(const MetricTree& target, const MarkedTreeIso& iso, const MetricTree& source, const TreePoint& p);

// Fixes mark `mark` of Z onto mark `image` of Z' with t -> t + shift.
struct MarkAnchor {
  int mark = 0;
  int image = 0;
  Rational shift;
};

// Calls `visit` on every marked-tree isomorphism (extending the anchor when
// given) in a fixed order until it returns true. Returns whether some visit
// returned true. ValidationError when the anchor is not a unit-speed
// translation between marks of equal length.
bool for_each_marked_tree_iso(const MetricTree& z, const std::vector<Line>& marks, const MetricTree& z2,
                              const std::vector<Line>& marks2, const std::optional<MarkAnchor>& anchor,
                              const std::function<bool(const MarkedTreeIso&)>& visit);

std::optional<MarkedTreeIso> marked_tree_extend(const MetricTree& z, const std::vector<Line>& marks,
                                                const MetricTree& z2, const std::vector<Line>& marks2,
                                                const std::optional<MarkAnchor>& anchor);

// The lines of a piece in mark order (sorted by Bass-Serre edge).
std::vector<Line> piece_lines(const Piece& piece);

// Data of a good triple at one vertex of U: psi(v), the marked-tree isometry
// Z_v -> Z'_{psi(v)} and the height translation. Mark indices follow
// Piece::marks on both sides.
struct VertexMap {
  int image = -1;
  MarkedTreeIso theta;
  Rational height_shift;
};

// U is the set of vertices with image >= 0.
struct GoodTriple {
  std::vector<VertexMap> vertices;
};

GoodTriple empty_triple(const Cluster& c);
std::vector<int> triple_domain(const GoodTriple& t);

// phi on points of Q_v for v in U, canonical in c'.
ClusterPoint apply(const Cluster& c, const Cluster& c2, const GoodTriple& t, const ClusterPoint& p);

struct GoodReport {
  int failed_condition = 0;  // 0 when all five hold
  std::string detail;
  // For condition 2: two points of c whose distance the map does not preserve.
  std::optional<std::pair<ClusterPoint, ClusterPoint>> witness;
  bool ok() const { return failed_condition == 0; }
};

// Conditions, in order: (1) U is a subtree and psi a simplicial embedding;
// (2) phi is isometric on each piece and agrees across walls, with exact
// distance spot checks; (3) phi(Q_v) = Q'_{psi(v)}; (4) the map is a product
// of a tree isometry and a height translation; (5) F_v goes bijectively onto
// F'_{psi(v)}, each mark of e onto the mark of psi(e).
GoodReport verify_good(const Cluster& c, const Cluster& c2, const GoodTriple& t);

// Every extension of t to the far endpoint of frontier edge e, in canonical
// order, until `visit` returns true. ValidationError unless exactly one end
// of e is in U.
bool for_each_extension(const Cluster& c, const Cluster& c2, const GoodTriple& t, int e,
                        const std::function<bool(const VertexMap& added, int vertex)>& visit);
std::optional<GoodTriple> try_extend(const Cluster& c, const Cluster& c2, const GoodTriple& t, int e);

// A structure-preserving isometry c -> c' whose psi is onto T', or none.
std::optional<GoodTriple> isomorphic(const Cluster& c, const Cluster& c2);

// Exhaustive oracle: every bijection of Bass-Serre vertices, and per vertex
// every isometry found from leaf-image permutations. Throws ValidationError
// beyond 6 Bass-Serre vertices or 12 leaves per piece.
std::optional<GoodTriple> brute_force_iso(const Cluster& c, const Cluster& c2);

nlohmann::json iso_to_json(const Cluster& c, const Cluster& c2, const GoodTriple& t);

}  // namespace clustergeo

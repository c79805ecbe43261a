#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "clustergeo/cluster.hpp"

namespace clustergeo {

// The part of a special path inside Q_{vertex}: an l1 geodesic from
// entry = (p_i, t_i) to exit = (q_i, u_i), both given at `vertex` (wall
// points are not canonicalized here).
struct PathSegment {
  int vertex = 0;
  ClusterPoint entry;
  ClusterPoint exit;
};

inline bool operator==(const PathSegment& x, const PathSegment& y) {
  return x.vertex == y.vertex && x.entry == y.entry && x.exit == y.exit;
}

struct SpecialPath {
  std::vector<int> vertices;  // Bass-Serre geodesic v_0 .. v_n
  std::vector<PathSegment> segments;
  Rational length;
};

// Supporting vertices of x0 and xn closest in T, ties to the lower vertex of
// x0 and then of xn.
std::pair<int, int> special_path_ends(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn);

// SegmentOverflow (with the Bass-Serre edge) when a projection or bridge runs
// off an open mark end.
SpecialPath special_path(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn);
// Same construction along the geodesic from `from` to `to`; both must support
// their point.
SpecialPath special_path_along(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn, int from, int to);

Rational path_length(const Cluster& c, const SpecialPath& path);

// gamma_2 .. gamma_{n-2}; empty when n < 4.
std::vector<PathSegment> middle_segments(const SpecialPath& path);

std::optional<PathSegment> segment_at(const SpecialPath& path, int vertex);

// Throws Error unless consecutive segments are glued by the flip.
void check_gluing(const Cluster& c, const SpecialPath& path);

using PointPair = std::pair<ClusterPoint, ClusterPoint>;

struct BilipschitzReport {
  std::size_t pairs = 0;
  std::size_t overflow_count = 0;
  std::size_t lower_bound_violations = 0;  // path shorter than the distance
  Rational max_ratio = 1;
  std::optional<std::size_t> attaining_pair;
  std::size_t subpath_checks = 0;
  std::size_t subpath_mismatches = 0;  // sub-range differs from the special path of its ends
  Rational subpath_max_ratio = 1;
};

// Ratio path_length / exact_distance per pair (1 for coincident points).
// Sub-paths are checked for the first `subpath_pairs` pairs: every contiguous
// range of segments must equal the special path between its own ends along
// the same vertices, and its ratio joins subpath_max_ratio.
BilipschitzReport verify_bilipschitz(const Cluster& c, const std::vector<PointPair>& pairs,
                                     std::size_t subpath_pairs = static_cast<std::size_t>(-1));

// Inequality (*) per segment, all in heights of Q_{v_i}:
//   |t_i - u_i| <= |y'_i - z'_i| + |z'_{i-1} - y'_i| + |z'_i - y'_{i+1}|
// where y'_i, z'_i are the crossings of an optimal path along the same
// vertices. z'_{i-1} lies on {q_{i-1}} x R, so its height seen from v_i is t_i;
// likewise y'_{i+1} has height u_i.
struct StarTerm {
  Rational lhs;
  Rational rhs;
};
std::vector<StarTerm> star_audit(const Cluster& c, const SpecialPath& path, const ClusterPoint& x0,
                                 const ClusterPoint& xn);

}  // namespace clustergeo

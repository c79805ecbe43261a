#pragma once

#include <cstddef>
#include <vector>

#include "clustergeo/cluster.hpp"
#include "clustergeo/convex_pl.hpp"

namespace clustergeo {

// Where a path crosses the walls of a Bass-Serre geodesic v_0 .. v_n. Wall i
// (between v_i and v_{i+1}) is crossed at the point of Q_{v_i} with
// horizontal gamma_{v_i,e_i}(s[i]) and height h[i]; seen from v_{i+1} that
// point is (gamma_{v_{i+1},e_i}(h[i]), s[i]).
struct CrossingProfile {
  std::vector<int> vertices;
  std::vector<Rational> s;
  std::vector<Rational> h;
};

// Length of the path that runs along l1 geodesics inside each piece between
// consecutive crossings, from x0 to xn. SegmentOverflow when a crossing is off
// its wall.
Rational crossing_objective(const Cluster& c, const CrossingProfile& profile, const ClusterPoint& x0,
                            const ClusterPoint& xn);

struct ExactDistance {
  Rational value;
  CrossingProfile profile;
};

// Global distance. Every path between the points crosses the walls of the
// Bass-Serre geodesic between their supports in order, and a piece of path
// between two consecutive crossings can be replaced by the l1 geodesic of the
// piece it starts and ends in (pieces are convex: each branch hanging off a
// wall retracts 1-Lipschitz onto that wall). So the distance is the minimum
// of crossing_objective over crossing profiles, a convex piecewise-linear
// problem that splits into chains.
ExactDistance exact_distance(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn);

// Same minimization along a fixed Bass-Serre geodesic from `from` to `to`;
// both must support their point.
ExactDistance exact_distance_along(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn, int from,
                                   int to);

// The chain problem behind exact_distance_along, plus how its variables map
// back to the profile (-1 for auxiliary variables).
struct CrossingProblem {
  ChainProblem chain;
  std::vector<int> s_slot;  // chain index of s[i]
  std::vector<int> h_slot;  // chain index of h[i]
};
CrossingProblem crossing_problem(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn, int from,
                                 int to);

// Additive error of the grid oracle is at most kDiscretizationSlack * eps * (n+1):
// each crossing coordinate is within eps/2 of a grid value and moves the
// objective by at most twice that.
inline constexpr int kDiscretizationSlack = 2;
inline constexpr std::size_t kDefaultNodeCap = 200000;

// eps defaults to 1/8 of the shortest tree edge in the cluster.
Rational default_epsilon(const Cluster& c);

// Shortest path in a graph of eps-samples of every piece (tree samples x
// height samples, l1 grid moves) glued across walls by the flip. Throws
// CapExceeded when the graph would exceed `node_cap` nodes.
Rational discretized_distance(const Cluster& c, const ClusterPoint& x0, const ClusterPoint& xn,
                              const Rational& eps, std::size_t node_cap = kDefaultNodeCap);

}  // namespace clustergeo

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "clustergeo/cluster.hpp"
#include "clustergeo/tree_graded.hpp"

namespace clustergeo {

// The single source of randomness. Integer sampling is done here rather than
// through <random> distributions so that streams are identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool chance(int percent) { return uniform(0, 99) < percent; }
  std::size_t index(std::size_t size) { return static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(size) - 1)); }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorParams {
  std::uint64_t seed = 42;
  int t_min = 1;  // Bass-Serre vertices
  int t_max = 8;
  int tree_edges_min = 1;  // edges per piece tree, raised when marks need more
  int tree_edges_max = 40;
  int length_min = 1;  // edge length = k / length_den, k in [length_min, length_max]
  int length_max = 8;
  int length_den = 2;
  int range_shift = 3;  // mark ranges start in [-range_shift, range_shift]
  Rational slack = 2;   // window width over the hull of the ranges it must hold
  bool chain = false;   // Bass-Serre tree is a path
  // Chance that a mark shares a branch with an earlier mark. Shared branches
  // make marks overlap in segments; by default marks meet in at most a point.
  int overlap_percent = 0;
};

// ValidationError on empty ranges or slack below 2.
void check_params(const GeneratorParams& params);

// Deterministic in params.seed; the result always passes validate().
ClusterSpec generate(const GeneratorParams& params);
ClusterSpec generate(const GeneratorParams& params, Rng& rng);

// An isomorphic copy: relabeled vertices, permuted edge lists, re-based mark
// paths and per-vertex height translations.
ClusterSpec planted_copy(const ClusterSpec& spec, Rng& rng);

enum class Mutation { any, window, edge_length };

// A copy that is certainly not isomorphic: one height window is widened or one
// tree edge is lengthened (with the marks and windows it touches adjusted).
ClusterSpec mutate(const ClusterSpec& spec, Rng& rng, Mutation kind = Mutation::any);

// A random point, on a wall about a quarter of the time.
ClusterPoint random_point(const Cluster& c, Rng& rng);
// Same, drawn from Q_vertex (the result is canonical, so it may be stored at a
// lower neighbor when it lies on a wall).
ClusterPoint random_point(const Cluster& c, Rng& rng, int vertex);

// Connected simple graph built by gluing edges, cycles and chorded cycles at
// cut vertices, plus occasional extra edges.
FiniteGraph random_graph(Rng& rng, int max_vertices);

}  // namespace clustergeo

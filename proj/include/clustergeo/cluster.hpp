#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clustergeo/metric_tree.hpp"
#include "clustergeo/rational.hpp"
#include "json.hpp"

namespace clustergeo {

// ---------------------------------------------------------------------------
// Instance description, as read from / written to JSON. All ids external.

struct PieceSpec {
  std::vector<MetricTree::EdgeSpec> tree_edges;
  Rational window_lo;
  Rational window_hi;
};

struct MarkSpec {
  std::vector<int> path;  // edge ids of the piece tree
  Rational lo;
  Rational hi;
  int origin = 0;  // piece-tree vertex id where the path starts
  int orient = 1;
};

struct ClusterSpec {
  std::vector<int> vertices;
  std::vector<std::pair<int, int>> edges;
  std::map<int, PieceSpec> pieces;
  // Keyed by (Bass-Serre vertex id, Bass-Serre edge index).
  std::map<std::pair<int, int>, MarkSpec> marks;
};

ClusterSpec cluster_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ClusterSpec& spec);
// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string dump_cluster(const ClusterSpec& spec);
ClusterSpec load_cluster_file(const std::string& path);

// ---------------------------------------------------------------------------

// A point of a piece Q_v = Z_v x window(v). `vertex` is an internal index.
// Canonical points are stored at their lowest supporting vertex; other
// representations of the same point are ordinary values too and are produced
// by Cluster::represent_at / transfer_across_wall.
struct ClusterPoint {
  int vertex = 0;
  TreePoint horizontal;
  Rational height;
};

inline bool operator==(const ClusterPoint& x, const ClusterPoint& y) {
  return x.vertex == y.vertex && x.horizontal == y.horizontal && x.height == y.height;
}
inline bool operator!=(const ClusterPoint& x, const ClusterPoint& y) { return !(x == y); }

struct Piece {
  MetricTree tree;
  Rational window_lo;
  Rational window_hi;
  // (Bass-Serre edge, line) sorted by edge.
  std::vector<std::pair<int, Line>> marks;
  // relations[i * marks.size() + j] relates marks[i] (first) to marks[j].
  std::vector<LineRelation> relations;

  const Line& mark(int edge) const;
  int mark_index(int edge) const;
  const LineRelation& relation(int from_edge, int to_edge) const;
};

class Cluster {
 public:
  std::size_t vertex_count() const { return ids_.size(); }
  int vertex_id(int v) const { return ids_.at(v); }
  std::optional<int> vertex_index(int id) const;
  std::size_t edge_count() const { return edges_.size(); }
  const std::pair<int, int>& edge(int e) const { return edges_.at(e); }
  int other_end(int e, int v) const;
  // Edge joining adjacent vertices; InvalidPoint when they are not adjacent.
  int edge_between(int a, int b) const;
  // (neighbor, edge) pairs sorted by edge index.
  const std::vector<std::pair<int, int>>& neighbors(int v) const { return adjacent_.at(v); }
  int tree_distance(int a, int b) const { return hops_[a * vertex_count() + b]; }
  std::vector<int> tree_path(int a, int b) const;
  const Piece& piece(int v) const { return pieces_.at(v); }
  const ClusterSpec& spec() const { return spec_; }

  // Throws InvalidPoint unless p is a point of Q_{p.vertex}.
  void check(const ClusterPoint& p) const;
  // Every representation of the point, one per supporting vertex, by vertex.
  std::vector<ClusterPoint> representations(const ClusterPoint& p) const;
  ClusterPoint canonical(const ClusterPoint& p) const;
  std::optional<ClusterPoint> represent_at(const ClusterPoint& p, int v) const;
  // Canonical point from a raw triple given in external ids.
  ClusterPoint point(int vertex_id, int tree_edge, const Rational& offset, const Rational& height) const;

  friend Cluster validate(const ClusterSpec& spec);

 private:
  Cluster() = default;

  ClusterSpec spec_;
  std::vector<int> ids_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacent_;
  std::vector<int> hops_;
  std::vector<Piece> pieces_;
};

// Checks every structural invariant; ValidationError names the offending
// vertex or edge.
Cluster validate(const ClusterSpec& spec);

// pt must be given at `from` and lie on the wall of `edge`. Returns the same
// point as seen from the other endpoint of `edge`.
ClusterPoint transfer_across_wall(const Cluster& c, int edge, int from, const ClusterPoint& pt);

struct PieceDistance {
  Rational horizontal;
  Rational vertical;
  Rational total() const { return horizontal + vertical; }
};

// l1 distance inside Q_v; InvalidPoint when a point does not lie in Q_v.
PieceDistance piece_distance(const Cluster& c, int v, const ClusterPoint& x, const ClusterPoint& y);

std::vector<int> supporting_vertices(const Cluster& c, const ClusterPoint& x);

int bass_serre_distance(const Cluster& c, const ClusterPoint& x, const ClusterPoint& y);

nlohmann::json point_to_json(const Cluster& c, const ClusterPoint& p);
ClusterPoint point_from_json(const Cluster& c, const nlohmann::json& doc);

}  // namespace clustergeo

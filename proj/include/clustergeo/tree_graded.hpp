#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clustergeo/rational.hpp"
#include "json.hpp"

namespace clustergeo {

struct GraphEdge {
  int a = 0;  // internal vertex indices
  int b = 0;
  Rational length;
};

// Simple connected graph with positive edge weights. Vertex indices are
// positions in the sorted id list, as for MetricTree.
class FiniteGraph {
 public:
  struct EdgeSpec {
    int a = 0;  // external ids
    int b = 0;
    Rational length;
  };

  // ValidationError on duplicate ids, dangling ends, self-loops, parallel
  // edges, non-positive weights or a disconnected graph.
  FiniteGraph(std::vector<int> vertex_ids, const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  int vertex_id(int v) const { return ids_.at(v); }
  std::optional<int> vertex_index(int id) const;
  const GraphEdge& edge(int e) const { return edges_.at(e); }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  // (neighbor, edge) pairs.
  const std::vector<std::pair<int, int>>& neighbors(int v) const { return adjacent_.at(v); }

 private:
  std::vector<int> ids_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacent_;
};

FiniteGraph graph_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const FiniteGraph& g);

struct BlockDecomposition {
  std::vector<int> cut_vertices;            // sorted
  std::vector<std::vector<int>> blocks;     // sorted vertex sets, sorted lexicographically
  std::vector<std::pair<int, int>> block_cut_tree;  // (block index, cut vertex)
};

std::vector<int> cut_points(const FiniteGraph& g);
BlockDecomposition blocks(const FiniteGraph& g);
nlohmann::json to_json(const FiniteGraph& g, const BlockDecomposition& d);

// Maximal vertex sets whose induced subgraph is connected and has no cut
// vertex, by exhaustive search over subsets. Limited to 16 vertices.
std::vector<std::vector<int>> brute_force_blocks(const FiniteGraph& g);

struct TreeGradedReport {
  bool cover = true;
  std::optional<int> uncovered_edge;
  bool t1 = true;
  std::optional<std::pair<int, int>> t1_witness;  // piece indices
  bool t2 = true;
  std::vector<int> t2_witness;  // a simple cycle (vertex sequence) inside no piece
};

// Pieces are vertex sets; an edge belongs to a piece when both ends do. (T2)
// is checked in its finite form: every simple cycle lies in one piece.
TreeGradedReport check_T1_T2(const FiniteGraph& g, const std::vector<std::vector<int>>& pieces);

struct BlockOf {
  std::optional<int> block;       // index into blocks(g).blocks
  std::optional<int> cut_vertex;  // witness when s meets several blocks
};

// s must induce a connected subgraph (ValidationError otherwise).
BlockOf block_of(const FiniteGraph& g, const BlockDecomposition& d, const std::vector<int>& s);

}  // namespace clustergeo

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qgalloy {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

// Oriented metric edge: coordinate 0 at `from`, coordinate `length` at `to`.
struct Edge {
  EdgeId id;
  VertexId from;
  VertexId to;
  double length;
};

// Finite metric graph.  Loops and multi-edges are allowed; loops count
// twice toward degree.  Isolated vertices are rejected at construction.
class MetricGraph {
 public:
  MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges,
              std::map<VertexId, std::vector<int>> embedding = {});

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_vertex(VertexId v) const;
  bool has_edge(EdgeId e) const;
  const Edge& edge(EdgeId e) const;
  int degree(VertexId v) const;

  // Edge ends meeting v as (edge id, end) with end 0 at `from` and 1 at
  // `to`; a loop contributes both ends.  Sorted by (edge id, end).
  const std::vector<std::pair<EdgeId, int>>& incidences(VertexId v) const;

  const std::map<VertexId, std::vector<int>>& embedding() const { return embedding_; }
  double total_length() const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::map<EdgeId, std::size_t> edge_index_;
  std::map<VertexId, std::vector<std::pair<EdgeId, int>>> incidences_;
  std::map<VertexId, std::vector<int>> embedding_;
};

// Edge subset Λ with the vertex partition it induces:
//   interior: deg_{G_Λ}(v) = deg_G(v) > 0
//   exterior: deg_{G_Λ}(v) = 0
//   boundary: strictly between.
struct InducedSubgraph {
  const MetricGraph* parent = nullptr;
  std::set<EdgeId> edges;
  std::set<VertexId> interior;
  std::set<VertexId> boundary;
  std::set<VertexId> exterior;

  std::vector<VertexId> subgraph_vertices() const;  // interior ∪ boundary, sorted
  int subgraph_degree(VertexId v) const;            // degree within Λ, loops twice
  double volume() const;
  std::size_t edge_count() const { return edges.size(); }
};

InducedSubgraph induced_subgraph(const MetricGraph& graph, const std::set<EdgeId>& lambda);

// ℤ^ν window: ambient graph is the unit-edge grid on [-1, l+1]^ν so that
// every vertex touched by the window keeps its full ambient degree 2ν;
// window_edges are the edges whose open interior lies in (0,l)^ν.
struct LatticeWindow {
  MetricGraph graph;
  std::set<EdgeId> window_edges;
};

LatticeWindow build_lattice_graph(int nu, int l, long long size_cap = 2000000);

MetricGraph make_interval(double length);
MetricGraph make_loop(double length);
MetricGraph make_star(int arms, double arm_length);

// Substitution chain a -> ab, b -> a starting from "a"; edge lengths
// follow the letter sequence.
MetricGraph make_fibonacci_chain(int generations, double a_length, double b_length);
std::string fibonacci_word(int generations);

// Line format: `vertex <id>`, `edge <id> <from> <to> <length>` and, when an
// embedding is present, `embed <id> <c_1> ... <c_nu>`.  Exact round-trip.
void save_graph(const MetricGraph& g, const std::string& path);
MetricGraph load_graph(const std::string& path);

}  // namespace qgalloy

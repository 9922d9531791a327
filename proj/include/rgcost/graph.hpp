#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rgcost/error.hpp"

namespace rgcost {

using Vertex = std::uint32_t;

inline constexpr int kUnreached = std::numeric_limits<int>::max();

/// Unordered vertex pair, stored with u <= v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  bool is_loop() const { return u == v; }
  auto operator<=>(const Edge&) const = default;
};

/// Finite multigraph with loops and an explicit degree bound D.
///
/// Edges are kept sorted, which fixes the iteration order used by every
/// algorithm in the library. A loop contributes 2 to the degree of its vertex.
/// Distances ignore multiplicities and loops.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<Edge> edges, int degree_bound);

  /// Same as the constructor with D set to the maximum degree (at least 1).
  static Graph with_tight_bound(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  int degree_bound() const { return degree_bound_; }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t id) const { return edges_[id]; }

  /// Neighbors with multiplicity; a loop lists the vertex itself once.
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  /// Ids of edges incident to v, parallel to neighbors(v).
  std::span<const std::uint32_t> incident_edges(Vertex v) const {
    return {adj_edge_.data() + offsets_[v], adj_edge_.data() + offsets_[v + 1]};
  }
  int degree(Vertex v) const;
  int max_degree() const;

  bool has_edge(Vertex a, Vertex b) const;

  /// The simple graph on the same vertices: loops dropped, parallels merged.
  Graph simplified() const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && degree_bound_ == other.degree_bound_ && edges_ == other.edges_;
  }

 private:
  std::size_t n_ = 0;
  int degree_bound_ = 1;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;
  std::vector<std::uint32_t> adj_edge_;
};

/// Reusable breadth-first search state. Not thread-safe; one per thread.
class Bfs {
 public:
  explicit Bfs(std::size_t n = 0) { resize(n); }
  void resize(std::size_t n);

  /// Runs BFS from `source` up to `max_depth`. Returns visited vertices in
  /// BFS order (source first, ties by neighbor order).
  std::span<const Vertex> run(const Graph& g, Vertex source, int max_depth = kUnreached);

  /// Distance of v from the last source, or kUnreached.
  int dist(Vertex v) const { return stamp_[v] == epoch_ ? dist_[v] : kUnreached; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::vector<int> dist_;
  std::vector<Vertex> order_;
  std::uint32_t epoch_ = 0;
};

/// Single-source distances (kUnreached for other components).
std::vector<int> distances_from(const Graph& g, Vertex source);

/// Length of the shortest cycle; nullopt-like sentinel kUnreached for forests.
/// A loop has girth 1 and a parallel pair girth 2.
int girth(const Graph& g);

struct Coloring;

/// Greedy proper coloring of the distance-<=d relation (lowest id first,
/// smallest free color). Colors are 1-based.
Coloring power_distance_coloring(const Graph& g, int d);

/// Loose a-priori bound 1 + D (D-1)^(d-1) d on the color count of
/// power_distance_coloring, saturated at the vertex count.
std::size_t power_distance_color_bound(const Graph& g, int d);

/// Components as blocks of sorted vertex ids, ordered by smallest member.
std::vector<std::vector<Vertex>> connected_components(const Graph& g);

/// Component index per vertex, numbered as in connected_components.
std::vector<int> component_labels(const Graph& g);

// Text format: `graph <n> <m> <D>` then m lines `<u> <v>`; `#` starts a comment.
Graph parse_graph(std::istream& in);
Graph parse_graph_text(const std::string& text);
Graph read_graph_file(const std::string& path);
std::string format_graph(const Graph& g);
void write_graph_file(const Graph& g, const std::string& path);

// Small constructors used by tests, families and the CLI.
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
Graph torus_graph(std::size_t rows, std::size_t cols);
Graph petersen_graph();
Graph disjoint_union(const Graph& a, const Graph& b);

}  // namespace rgcost

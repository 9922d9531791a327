#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "rgcost/graph.hpp"

namespace rgcost {

struct SpectralResult {
  double lambda1 = 0.0;   // top adjacency eigenvalue
  double lambda2 = 0.0;   // second-largest adjacency eigenvalue
  double gap = 0.0;       // algebraic connectivity of the Laplacian (D - lambda2 when D-regular)
  double residual = 0.0;  // max eigen-residual of the reported pair
  bool connected = true;
  bool regular = false;
  std::string method;     // "dense" or "lanczos"
};

/// Adjacency spectrum extremes and Laplacian gap. A loop adds 2 to the
/// diagonal. Disconnected input reports gap 0 and connected = false.
SpectralResult spectral_gap(const Graph& g);

/// Where the boundary count S A \ A looks. For a plain graph the steps are
/// the neighbors; for a Schreier graph they are the forward generator images.
struct StepStructure {
  Graph graph;                              // undirected support, used for cuts
  std::vector<std::vector<Vertex>> steps;   // steps[x] = images of x
  int step_count = 0;                       // |S| in the double-counting bounds
  bool symmetric = true;                    // steps are the full neighborhoods

  static StepStructure from_graph(const Graph& g);
};

struct Partition {
  int k = 1;
  std::vector<int> block_of;                    // 0-based block index per vertex
  std::vector<std::vector<Vertex>> blocks;
  std::vector<Edge> boundary_edges;             // support edges across blocks
  std::vector<double> block_fractions;
  std::size_t boundary_vertex_sum = 0;          // sum_i |S A_i \ A_i|
};

/// Fills blocks, boundary and fractions from block_of.
Partition make_partition(const StepStructure& s, std::vector<int> block_of, int k);

struct PartitionVerdict {
  double epsilon = 0.0;
  bool sizes_ok = false;      // 1/k - eps <= |A_i|/|V| <= 1/k + eps
  bool boundary_ok = false;   // sum |S A_i \ A_i| < eps |V|
  bool budget_exhausted = false;
  /// "conditions hold", "not found within budget" or "conditions violated by best found"
  std::string status;
};

PartitionVerdict check_partition(const Partition& p, double epsilon, bool budget_exhausted = false);

struct PartitionOptions {
  std::size_t budget = 200000;  // refinement move evaluations
  int restarts = 8;             // k-means restarts on the embedding
  std::uint64_t seed = 1;
  std::size_t dense_limit = 3000;
};

struct PartitionResult {
  Partition partition;
  PartitionVerdict verdict;
  std::string origin;  // which candidate family produced the winner
};

/// Spectral embedding, sweep cuts and k-means candidates, balanced into the
/// block-size window and refined by greedy single-vertex moves on
/// boundary_vertex_sum. Ties go to the lexicographically smallest assignment.
PartitionResult balanced_partition(const StepStructure& s, int k, double epsilon, const PartitionOptions& opts);
PartitionResult balanced_partition(const Graph& g, int k, double epsilon, const PartitionOptions& opts);

nlohmann::json to_json(const SpectralResult& r);
nlohmann::json to_json(const PartitionResult& r);

}  // namespace rgcost

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rgcost/ball.hpp"
#include "rgcost/coloring.hpp"
#include "rgcost/graph.hpp"
#include "rgcost/local_stats.hpp"

namespace rgcost {

/// Verdict on whether h is an L-rewiring of g: every g-edge spans h-distance
/// <= L and every h-edge spans g-distance <= L.
struct RewiringCertificate {
  int L = 1;
  bool valid = false;
  std::optional<std::pair<Vertex, Vertex>> witness;  // first violating edge
  bool witness_in_base = true;                       // witness is a g-edge (else an h-edge)

  nlohmann::json to_json() const;
};

/// Throws InputError when the vertex counts differ or L < 1.
RewiringCertificate is_rewiring(const Graph& g, const Graph& h, int L);

double edge_density(const Graph& g);

struct DensityReport {
  std::vector<double> densities;
  std::vector<double> running_min;
  double liminf_proxy = 0.0;  // min over the last half (rounded up) of the sequence
};

DensityReport density_report(std::span<const Graph> hs);
DensityReport density_report(std::span<const double> densities);

struct AnnealOptions {
  std::size_t budget = 20000;  // proposals per stage
  std::uint64_t seed = 1;
  double cooling = 0.995;      // per sweep
  double initial_accept = 0.5; // acceptance of a +1 move at the start
};

struct RewiringResult {
  Graph h;
  RewiringCertificate cert;
  std::size_t proposals = 0;
};

/// Simulated annealing over simple rewirings: deletions with local
/// revalidation, shortcut additions at g-distance <= L and add-then-delete
/// moves. Stages l = 2..L each warm-start from the previous best, which
/// makes the result non-increasing in L for a fixed seed and budget.
/// Throws InputError on budget 0 or L < 1.
RewiringResult optimize_rewiring(const Graph& g, int L, const AnnealOptions& opts);

/// Largest candidate set (pairs at g-distance 1..L) the exact search accepts.
inline constexpr std::size_t kExactCandidateLimit = 25;

/// Minimum-edge simple L-rewiring by exhaustive search in increasing size.
/// Throws AnalysisError when the candidate set exceeds the limit.
Graph exact_rewiring(const Graph& g, int L);
double exact_cL(const Graph& g, int L);

/// Type of a vertex: its colored R-ball with the h-edges inside marked.
struct TypeTable {
  int r = 0;
  int R = 0;
  Coloring eta;                       // symmetry-breaking colors on g
  std::vector<CanonicalCode> types;   // sorted distinct type codes
  Coloring phi;                       // type index (1-based) per vertex
};

TypeTable type_colors(const Graph& g, const Graph& h, int L);

/// True if the marked edges of a decoded type reach every neighbor of the
/// root by a path of at most L marked edges.
bool witnesses_at_root(const RootedBall& type, int L);

struct TransferOptions {
  ModelOptions model;
  bool self_seed = true;  // seed the model with the source types when g2 == g1
};

struct TransferReport {
  int r = 0;
  int R = 0;
  int eta_colors = 0;
  std::size_t type_count = 0;
  double model_tv = 1.0;
  double y1_fraction = 0.0;
  double problematic_fraction = 0.0;   // |Y_2| / n before patching
  double patched_fraction = 0.0;       // problematic set after patching
  int patch_rounds = 0;
  std::size_t decoded_edges = 0;
  double density_source = 0.0;
  double density_result = 0.0;

  nlohmann::json to_json() const;
};

struct TransferResult {
  Graph h2;
  RewiringCertificate cert;
  TransferReport report;
};

/// Carries an L-rewiring h1 of g1 over to g2 through modeled type colors,
/// decoding, and patching at problematic vertices until certified.
/// Throws InputError when (g1, h1) is not an L-rewiring.
TransferResult transfer_rewiring(const Graph& g1, const Graph& h1, const Graph& g2, int L, const TransferOptions& opts);

}  // namespace rgcost

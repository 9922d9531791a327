#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "rgcost/ball.hpp"
#include "rgcost/coloring.hpp"
#include "rgcost/graph.hpp"

namespace rgcost {

/// Distribution of canonical r-ball codes. color_count 0 means uncolored.
/// Weights are kept sorted by code.
struct NeighborhoodDistribution {
  int radius = 0;
  int color_count = 0;
  std::map<std::string, double> weights;

  double total_mass() const;
  bool operator==(const NeighborhoodDistribution&) const = default;
};

/// P_{G,r}: empirical law of the r-ball of a uniform vertex.
/// Throws InputError on an empty graph.
NeighborhoodDistribution neighborhood_distribution(const Graph& g, int r);

/// P_{G,r}[phi]. Throws InputError when phi is out of range.
NeighborhoodDistribution colored_neighborhood_distribution(const Graph& g, int r, const Coloring& phi);

/// Pushes a colored distribution forward along "forget the colors".
NeighborhoodDistribution forget_colors(const NeighborhoodDistribution& d);

/// Half L1 distance. Throws InputError when (r, k) differ.
double tv_distance(const NeighborhoodDistribution& a, const NeighborhoodDistribution& b);

/// max over r <= r_max of the uncolored tv distance.
double bs_distance(const Graph& a, const Graph& b, int r_max);

struct ModelOptions {
  std::size_t budget = 20000;     // single-vertex recolor evaluations, all restarts together
  int restarts = 4;
  std::uint64_t seed = 1;
  std::vector<Coloring> starts;   // tried before random restarts
  int threads = 1;
};

struct ModelResult {
  Coloring coloring;
  double achieved_tv = 1.0;
  std::size_t evaluations = 0;
  int best_restart = 0;
};

/// Greedy single-vertex recolor descent with restarts for a coloring psi of
/// `target` whose colored r-statistics approach `goal`. achieved_tv is the
/// exact distance of the returned coloring.
ModelResult model_coloring(const Graph& target, const NeighborhoodDistribution& goal, const ModelOptions& opts);

struct LgProbe {
  std::string family;
  bool from_first = true;   // coloring lives on the first graph
  double residual = 0.0;
};

struct LgEstimate {
  double heuristic_lower = 0.0;  // max model residual over probes (not certified)
  double certified_lower = 0.0;  // uncolored tv at radius r
  double upper = 1.0;
  std::vector<LgProbe> probes;
};

struct LabeledColoring {
  std::string family;
  Coloring coloring;
};

/// Probes the Hausdorff distance between Q^k_{a,r} and Q^k_{b,r}: every probe
/// coloring of one graph is modeled on the other.
LgEstimate lg_distance_estimate(const Graph& a, const Graph& b, int r, int k,
                                const std::vector<LabeledColoring>& probes_a,
                                const std::vector<LabeledColoring>& probes_b, const ModelOptions& opts);

struct ProbeFamilies {
  int random = 4;
  bool partition = true;
  bool distance = true;
  std::vector<Coloring> user;
};

/// The fixed probing families: random colorings, partition indicators,
/// folded distance colorings and user-supplied colorings.
std::vector<LabeledColoring> standard_probes(const Graph& g, int r, int k, const ProbeFamilies& fam,
                                             std::uint64_t seed);

nlohmann::json to_json(const NeighborhoodDistribution& d);
NeighborhoodDistribution distribution_from_json(const nlohmann::json& j);

}  // namespace rgcost

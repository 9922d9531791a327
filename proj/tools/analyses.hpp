#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rgcost/graph.hpp"
#include "rgcost/schreier.hpp"

namespace rgcost::cli {

/// Graphs under analysis. Schreier inputs also fill `graphs` with their
/// undirected graphs so graph analyses apply to them.
struct Inputs {
  std::vector<Graph> graphs;
  std::vector<std::string> names;
  std::optional<Presentation> presentation;
  std::vector<SchreierGraph> schreier;
  std::vector<std::vector<Word>> candidates;
  CayleyKind cayley = CayleyKind::none;

  void add_schreier(const SchreierGraph& s, const std::string& name);
};

/// Where inputs come from. Entries of `graphs` ending in .json are Schreier
/// graphs; other entries are graph files or generator specs.
struct InputSpec {
  std::vector<std::string> graphs;
  std::string presentation;
  std::vector<std::string> subgroups;  // one .sub file per Schreier graph
  std::string family;
  std::vector<long long> family_params;
  std::uint64_t seed = 1;

  /// The files among the above, for digests.
  std::vector<std::string> files() const;
};

Inputs load_inputs(const InputSpec& spec);

struct Params {
  int r = 2;
  int k = 2;
  int L = 3;
  double eps = 0.05;
  double c = 0.5;
  std::optional<std::size_t> budget;  // each analysis falls back to its own default
  std::size_t max_cosets = kDefaultCosetCap;
  std::size_t tietze_budget = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<std::string> words;     // farber; defaults to the generators
  std::optional<int> radius;          // farber ball matching

  nlohmann::json to_json() const;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json json;

  std::string csv() const;
};

const std::vector<std::string>& analysis_names();

/// Runs one named analysis. Throws InputError for unknown names or inputs the
/// analysis cannot use.
Table run_analysis(const std::string& name, const Inputs& in, const Params& p);

}  // namespace rgcost::cli

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rgcost/partition.hpp"
#include "rgcost/schreier.hpp"
#include "rgcost/util.hpp"

namespace rgcost {

/// Least k >= 1 with (3/2 |S| + 1) / k <= c / 2. Throws InputError for c <= 0.
int choose_k(std::size_t s_size, double c);

/// One recorded inequality lhs <= rhs (or lhs < rhs when strict).
struct BoundCheck {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool strict = false;
  bool holds = false;
};

struct AmalgamCertificate {
  int k = 1;
  std::size_t index = 0;
  std::size_t s_size = 0;
  std::size_t relator_mass = 0;             // M
  std::vector<SchreierEdge> boundary;       // Schreier edges across blocks
  std::vector<std::size_t> y;               // sorted generator indices; also generates L_amal
  std::vector<std::vector<std::size_t>> x;  // per block, generators with both ends inside
  std::vector<std::size_t> block_sizes;
  std::size_t heavy_block = 0;              // block with the largest X, used in the d bound
  std::size_t d_bound = 0;                  // |X_heavy| + |Y| + k - 1
  Rational quotient_bound;                  // (d_bound - 1) / index
  bool covers = false;                      // Y and the X_i cover every generator
  bool boundary_in_y = false;               // every boundary generator lies in Y
  bool amalgam_structure = false;           // every lift is inside one block or only uses Y
  std::vector<BoundCheck> chain;            // unconditional inequalities, all must hold
  std::vector<BoundCheck> hypotheses;       // the partition conditions used by the contrapositive

  /// H_i generators: Y together with X_i, sorted.
  std::vector<std::size_t> block_generators(std::size_t block) const;
  /// All chain entries hold and the coverage checks pass.
  bool verified() const;
  nlohmann::json to_json() const;
};

/// Builds Y, X_i and the bound chain for a partition of the cosets of `sch`.
/// `c`, when given, adds the hypotheses that depend on it. Throws InputError
/// when sp, sch and part do not describe the same Schreier graph.
AmalgamCertificate amalgam_certificate(const SchreierGraph& sch, const SchreierPresentation& sp, const Partition& part,
                                       std::optional<double> c = std::nullopt);

struct TrichotomyOptions {
  PartitionOptions partition;
  std::size_t tietze_budget = 100000;
  int threads = 1;
};

struct TrichotomyRow {
  std::size_t index = 0;
  RankRow rank;
  SpectralResult spectral;
  int k = 1;
  double epsilon = 0.0;                 // partition tolerance implied by the boundary condition
  std::optional<PartitionResult> partition;  // absent when k exceeds the index
  bool sizes_ok = false;                // n/(2k) < |A_i| < 3n/(2k)
  bool boundary_ok = false;             // |boundary| (1 + M^2) k < n
  bool index_ok = false;                // (k - 1) / n <= c / 2
  std::optional<AmalgamCertificate> certificate;
  std::string branch;                   // "1", "2", "3" or "undetermined"
  std::string inference;

  nlohmann::json to_json() const;
};

/// Per-graph rank bounds, spectral gap, balanced partition at k = choose_k
/// and, when the partition conditions hold and the rank quotient exceeds c,
/// the amalgam certificate. Graphs are processed concurrently.
std::vector<TrichotomyRow> trichotomy_report(const Presentation& p, const std::vector<SchreierGraph>& graphs,
                                             const std::vector<std::vector<Word>>& candidates, double c,
                                             const TrichotomyOptions& opts = {});

}  // namespace rgcost

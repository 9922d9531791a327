#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rgcost/ball.hpp"
#include "rgcost/graph.hpp"
#include "rgcost/partition.hpp"
#include "rgcost/util.hpp"

namespace rgcost {

/// A word over a generator alphabet. Letter 2i is generator i, 2i+1 its
/// inverse. Words act on cosets from the right, read left to right.
using Word = std::vector<int>;

inline int inverse_letter(int l) { return l ^ 1; }
Word inverse_word(const Word& w);
Word free_reduce(const Word& w);
/// Free reduction followed by cancelling matching ends.
Word cyclic_reduce(const Word& w);

struct Presentation {
  std::vector<char> generators;       // lowercase names; uppercase denotes the inverse
  std::vector<Word> relators;         // freely and cyclically reduced, nonempty
  std::vector<std::string> warnings;  // notes from parsing (auto-reduced relators)

  std::size_t generator_count() const { return generators.size(); }
  /// Sum of relator lengths.
  std::size_t total_relator_length() const;
};

Word parse_word(const std::string& text, const std::vector<char>& generators);
std::string format_word(const Word& w, const std::vector<char>& generators);

/// Text format: `gens: a b` then `rel: <word>` lines; `#` starts a comment.
Presentation parse_presentation(const std::string& text);
Presentation read_presentation_file(const std::string& path);
std::string format_presentation(const Presentation& p);

/// `sub: <word>` lines.
std::vector<Word> parse_subgroup(const std::string& text, const std::vector<char>& generators);

/// Transitive right action of the generators on cosets 0..n-1, root 0.
class SchreierGraph {
 public:
  SchreierGraph() = default;
  /// Validates permutations and transitivity (InputError listing orbits otherwise).
  SchreierGraph(std::vector<char> generators, std::vector<std::vector<Vertex>> perms);

  std::size_t coset_count() const { return n_; }
  std::size_t generator_count() const { return names_.size(); }
  const std::vector<char>& generators() const { return names_; }
  const std::vector<Vertex>& perm(std::size_t gen) const { return perm_[gen]; }

  Vertex act(Vertex x, int letter) const { return (letter & 1 ? inv_ : perm_)[letter >> 1][x]; }
  Vertex apply(Vertex x, const Word& w) const;

  /// Undirected multigraph with one edge x -- x.s per (coset, generator),
  /// loops included, with aligned orientation labels.
  Graph to_graph() const;
  std::vector<EdgeLabel> edge_labels() const;
  /// Forward steps x -> x.s for boundary counts.
  StepStructure to_steps() const;

  nlohmann::json to_json() const;
  static SchreierGraph from_json(const nlohmann::json& j);

  bool operator==(const SchreierGraph& o) const { return names_ == o.names_ && perm_ == o.perm_; }

 private:
  std::size_t n_ = 0;
  std::vector<char> names_;
  std::vector<std::vector<Vertex>> perm_;
  std::vector<std::vector<Vertex>> inv_;
};

SchreierGraph schreier_from_permutations(const std::vector<std::vector<Vertex>>& perms,
                                         const std::vector<char>& generators);

inline constexpr std::size_t kDefaultCosetCap = 1000000;

/// HLT coset enumeration with a lookahead pass when the live coset count
/// reaches the cap. The result is renumbered in breadth-first order from the
/// subgroup coset. Throws AnalysisError when the cap is still exceeded.
SchreierGraph todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup,
                           std::size_t max_cosets = kDefaultCosetCap);

struct RelatorCheck {
  bool ok = true;
  std::size_t relator = 0;  // first failing relator index
  Vertex coset = 0;         // first coset it moves
};

/// Throws InputError when the alphabets differ.
RelatorCheck check_relators(const SchreierGraph& sch, const Presentation& p);

/// Undirected Schreier edge x -- x.s, identified by (coset, generator).
struct SchreierEdge {
  Vertex coset = 0;
  int gen = 0;
  auto operator<=>(const SchreierEdge&) const = default;
};

struct SchreierPresentation {
  std::size_t index = 0;
  std::size_t base_generators = 0;          // |S|
  std::size_t relator_mass = 0;             // M, total length of the base relators
  std::vector<SchreierEdge> tree;           // spanning tree edges
  std::vector<Word> transversal;            // per coset, over the base alphabet
  std::vector<SchreierEdge> generators;     // non-tree edges; generator g is T(generators[g])
  std::vector<Vertex> generator_target;     // coset x.s for each generator edge
  std::vector<int> generator_of;            // per edge id coset*|S|+gen: generator index or -1
  std::vector<Word> relators;               // lifted relators over the T alphabet, unreduced
  std::vector<std::pair<std::size_t, Vertex>> relator_source;  // (base relator, coset)
  std::vector<std::vector<SchreierEdge>> edge_trace;           // every edge each lift walks

  std::size_t generator_count() const { return generators.size(); }
  /// T(e) spelled over the base alphabet, freely reduced.
  Word generator_word(std::size_t g) const;
  nlohmann::json to_json(const std::vector<char>& names) const;
};

/// BFS tree with letters tried in the order a, A, b, B, ...; T(e) = t_x s t_{x.s}^-1.
/// Throws InputError when a relator does not act trivially.
SchreierPresentation reidemeister_schreier(const SchreierGraph& sch, const Presentation& p);

struct TietzeResult {
  std::size_t generator_count = 0;   // generators left
  std::vector<Word> relators;        // over the surviving generators, renumbered
  std::size_t d_upper = 0;
  std::size_t steps = 0;
  bool budget_exhausted = false;
};

/// Deletes trivial relators, eliminates generators occurring once in a
/// relator, and applies length-reducing substitutions, until nothing changes
/// or the step budget runs out.
TietzeResult tietze_simplify(std::size_t generator_count, const std::vector<Word>& relators, std::size_t budget = 100000);
TietzeResult tietze_simplify(const SchreierPresentation& sp, std::size_t budget = 100000);

/// Free rank of the abelianization: generators minus the rational rank of
/// the relator exponent matrix (exact integer elimination).
std::size_t abelianized_rank(std::size_t generator_count, const std::vector<Word>& relators);
std::size_t abelianized_rank(const SchreierPresentation& sp);
std::size_t abelianized_rank(const Presentation& p);

/// (d - 1) / index. Throws InputError for index 0.
Rational rank_quotient(std::size_t d, std::size_t index);

struct VerifyResult {
  bool pass = false;
  std::size_t expected_index = 0;
  std::size_t found_index = 0;
};

/// Certifies d(H) <= |candidates| by enumerating cosets of the subgroup they
/// generate. Throws InputError if a candidate moves the root coset.
VerifyResult verify_generators(const Presentation& p, const SchreierGraph& sch, const std::vector<Word>& candidates,
                               std::size_t max_cosets = kDefaultCosetCap);

struct RankRow {
  std::size_t index = 0;
  std::size_t d_lower = 0;
  std::size_t d_upper = 0;
  Rational r_lower;
  Rational r_upper;
  std::string method;   // "free", "tietze" or "verified"
};

/// Throws InputError when a graph fails the relator check.
std::vector<RankRow> rank_gradient_table(const Presentation& p, const std::vector<SchreierGraph>& graphs,
                                         const std::vector<std::vector<Word>>& candidates = {},
                                         std::size_t tietze_budget = 100000);

/// Cayley geometry used for exact ball matching.
enum class CayleyKind { none, free, free_abelian };

struct FarberRow {
  std::string word;
  double fixed_fraction = 0.0;
};

struct FarberReport {
  std::vector<FarberRow> words;
  std::optional<int> radius;
  std::optional<double> ball_match_fraction;
};

FarberReport farber_statistic(const SchreierGraph& sch, const std::vector<Word>& words, CayleyKind kind = CayleyKind::none,
                              std::optional<int> radius = std::nullopt);

struct Family {
  std::string name;
  Presentation presentation;
  std::vector<SchreierGraph> graphs;
  std::vector<std::vector<Word>> candidates;  // per graph, generators known to span H (may be empty)
  CayleyKind cayley = CayleyKind::none;
};

/// Families: "Z-cycle" (n...), "Z2-torus" (m...), "F2-random" (n...),
/// "Fk-random" (k, n...), "cyclic" (N, d... with d | N).
Family builtin_family(const std::string& name, const std::vector<long long>& params, std::uint64_t seed);

}  // namespace rgcost

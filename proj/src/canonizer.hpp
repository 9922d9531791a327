#pragma once

// Individualization-refinement canonical labeling for small decorated
// graphs (rooted balls). Exact: the code is the minimum leaf encoding over
// the whole search tree, with subtrees skipped only when a discovered
// automorphism proves them redundant.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rgcost::detail {

struct DecoratedArc {
  std::uint32_t from;
  std::uint32_t to;
  std::uint32_t kind;
};

struct DecoratedGraph {
  std::vector<std::array<std::uint32_t, 2>> keys;  // initial vertex invariants
  std::vector<DecoratedArc> arcs;                  // directed, both ways for edges
  std::vector<std::uint32_t> header;               // mixed into the code verbatim
};

struct Canonization {
  std::string code;
  std::vector<std::uint32_t> labeling;  // vertex -> canonical position
};

Canonization canonize(const DecoratedGraph& g);

}  // namespace rgcost::detail

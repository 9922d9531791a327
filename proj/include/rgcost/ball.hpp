#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgcost/coloring.hpp"
#include "rgcost/graph.hpp"

namespace rgcost {

/// Orientation-aware generator label of a graph edge. The arc runs
/// u -> v of the stored (sorted) edge unless `reversed` is set.
struct EdgeLabel {
  int label = 0;
  bool reversed = false;
  auto operator<=>(const EdgeLabel&) const = default;
};

/// Decorated r-ball around a root. Local vertex ids are 0..m-1 with the
/// root at 0. When `labels` is non-empty, edges[i] is an arc
/// edges[i].first -> edges[i].second carrying labels[i]; otherwise edges are
/// undirected. `distinguished` holds the extra edge set (not necessarily a
/// subset of `edges`).
struct RootedBall {
  struct Arc {
    Vertex from = 0;
    Vertex to = 0;
    auto operator<=>(const Arc&) const = default;
  };

  int radius = 0;
  std::vector<Vertex> origin;     // local id -> vertex of the source graph
  std::vector<int> dist;          // distance from the root
  std::vector<Arc> edges;
  std::vector<int> colors;        // empty when uncolored
  std::vector<int> labels;        // empty when unlabeled
  std::vector<Arc> distinguished;

  std::size_t size() const { return dist.size(); }
  bool operator==(const RootedBall&) const = default;
};

/// Byte string identifying a decorated rooted ball up to isomorphism.
struct CanonicalCode {
  std::string bytes;
  auto operator<=>(const CanonicalCode&) const = default;
};

struct BallDecorations {
  const Coloring* colors = nullptr;
  std::span<const EdgeLabel> labels;       // one per graph edge, or empty
  std::span<const Edge> distinguished;     // sorted edge set, or empty
};

/// Induced subgraph on vertices within distance r of v, rooted at v, in BFS
/// order. Throws InputError for an invalid vertex.
RootedBall ball(const Graph& g, Vertex v, int r, const BallDecorations& deco = {});

/// Vertices of the ball of radius r (ball.restrict) without rebuilding from g.
RootedBall restrict_ball(const RootedBall& b, int r);

CanonicalCode canonical_code(const RootedBall& b);

/// The ball relabeled by its canonical labeling; `origin` is carried along.
/// canonical_form(canonical_form(b)) reproduces the same vertex order.
RootedBall canonical_form(const RootedBall& b);

/// Rebuilds the canonical form (without `origin`) from a code.
RootedBall decode_code(const CanonicalCode& code);

/// Canonical code of a whole graph with all vertices treated alike (no root).
CanonicalCode canonical_graph_code(const Graph& g);

}  // namespace rgcost

#include "rgcost/ball.hpp"

#include <algorithm>
#include <tuple>

#include "canonizer.hpp"

namespace rgcost {

RootedBall ball(const Graph& g, Vertex v, int r, const BallDecorations& deco) {
  if (v >= g.vertex_count()) throw InputError("invalid vertex id " + std::to_string(v));
  if (r < 0) throw InputError("radius must be nonnegative");
  if (deco.colors) deco.colors->validate(g.vertex_count());
  if (!deco.labels.empty() && deco.labels.size() != g.edge_count()) {
    throw InputError("edge labeling size does not match the edge count");
  }

  Bfs bfs(g.vertex_count());
  auto order = bfs.run(g, v, r);

  RootedBall b;
  b.radius = r;
  b.origin.assign(order.begin(), order.end());
  b.dist.reserve(order.size());
  for (Vertex x : order) b.dist.push_back(bfs.dist(x));
  if (deco.colors) {
    b.colors.reserve(order.size());
    for (Vertex x : order) b.colors.push_back(deco.colors->colors[x]);
  }

  std::vector<std::uint32_t> local(g.vertex_count(), 0);
  for (std::uint32_t i = 0; i < order.size(); ++i) local[order[i]] = i;
  auto inside = [&](Vertex x) { return bfs.dist(x) != kUnreached; };

  const bool labeled = !deco.labels.empty();
  std::vector<std::tuple<Vertex, Vertex, int>> arcs;
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    Vertex x = order[i];
    auto nbrs = g.neighbors(x);
    auto ids = g.incident_edges(x);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      Vertex y = nbrs[j];
      if (!inside(y)) continue;
      const Edge& e = g.edge(ids[j]);
      // Visit each edge once: from its smaller endpoint (loops once anyway).
      if (x != e.u) continue;
      Vertex a = local[e.u], c = local[e.v];
      if (labeled) {
        const EdgeLabel& lab = deco.labels[ids[j]];
        if (lab.reversed) std::swap(a, c);
        arcs.emplace_back(a, c, lab.label);
      } else {
        arcs.emplace_back(std::min(a, c), std::max(a, c), 0);
      }
    }
  }
  std::sort(arcs.begin(), arcs.end());
  b.edges.reserve(arcs.size());
  for (auto& [a, c, l] : arcs) {
    b.edges.push_back({a, c});
    if (labeled) b.labels.push_back(l);
  }

  for (const Edge& e : deco.distinguished) {
    if (e.v >= g.vertex_count()) throw InputError("distinguished edge out of range");
    if (inside(e.u) && inside(e.v)) {
      Vertex a = local[e.u], c = local[e.v];
      b.distinguished.push_back({std::min(a, c), std::max(a, c)});
    }
  }
  std::sort(b.distinguished.begin(), b.distinguished.end());
  return b;
}

RootedBall restrict_ball(const RootedBall& b, int r) {
  RootedBall out;
  out.radius = r;
  std::size_t m = 0;
  while (m < b.dist.size() && b.dist[m] <= r) ++m;
  // BFS order places every vertex within distance r before any farther one.
  out.origin.assign(b.origin.begin(), b.origin.begin() + static_cast<std::ptrdiff_t>(m));
  out.dist.assign(b.dist.begin(), b.dist.begin() + static_cast<std::ptrdiff_t>(m));
  if (!b.colors.empty()) out.colors.assign(b.colors.begin(), b.colors.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t i = 0; i < b.edges.size(); ++i) {
    if (b.edges[i].from < m && b.edges[i].to < m) {
      out.edges.push_back(b.edges[i]);
      if (!b.labels.empty()) out.labels.push_back(b.labels[i]);
    }
  }
  for (const auto& e : b.distinguished) {
    if (e.from < m && e.to < m) out.distinguished.push_back(e);
  }
  return out;
}

namespace {

enum ArcKind : std::uint32_t { kPlain = 0, kPlainLoop = 1, kMarked = 2, kMarkedLoop = 3, kLabelBase = 4 };

detail::DecoratedGraph decorate(const RootedBall& b) {
  detail::DecoratedGraph dg;
  const std::size_t m = b.size();
  dg.keys.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    dg.keys[i] = {static_cast<std::uint32_t>(b.dist[i]),
                  b.colors.empty() ? 0u : static_cast<std::uint32_t>(b.colors[i])};
  }
  const bool labeled = !b.labels.empty();
  for (std::size_t i = 0; i < b.edges.size(); ++i) {
    Vertex a = b.edges[i].from, c = b.edges[i].to;
    if (labeled) {
      auto t = kLabelBase + 2 * static_cast<std::uint32_t>(b.labels[i]);
      dg.arcs.push_back({a, c, t});
      dg.arcs.push_back({c, a, t + 1});
    } else if (a == c) {
      dg.arcs.push_back({a, a, kPlainLoop});
    } else {
      dg.arcs.push_back({a, c, kPlain});
      dg.arcs.push_back({c, a, kPlain});
    }
  }
  for (const auto& e : b.distinguished) {
    if (e.from == e.to) {
      dg.arcs.push_back({e.from, e.from, kMarkedLoop});
    } else {
      dg.arcs.push_back({e.from, e.to, kMarked});
      dg.arcs.push_back({e.to, e.from, kMarked});
    }
  }
  dg.header = {static_cast<std::uint32_t>(b.radius), labeled ? 1u : 0u, b.colors.empty() ? 0u : 1u};
  return dg;
}

}  // namespace

CanonicalCode canonical_code(const RootedBall& b) {
  return {detail::canonize(decorate(b)).code};
}

RootedBall canonical_form(const RootedBall& b) {
  auto result = detail::canonize(decorate(b));
  const auto& lab = result.labeling;  // old id -> new id
  const std::size_t m = b.size();
  RootedBall out;
  out.radius = b.radius;
  out.origin.resize(m);
  out.dist.resize(m);
  if (!b.colors.empty()) out.colors.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.origin[lab[i]] = b.origin.empty() ? static_cast<Vertex>(i) : b.origin[i];
    out.dist[lab[i]] = b.dist[i];
    if (!b.colors.empty()) out.colors[lab[i]] = b.colors[i];
  }
  const bool labeled = !b.labels.empty();
  std::vector<std::tuple<Vertex, Vertex, int>> arcs;
  for (std::size_t i = 0; i < b.edges.size(); ++i) {
    Vertex a = lab[b.edges[i].from], c = lab[b.edges[i].to];
    if (!labeled && a > c) std::swap(a, c);
    arcs.emplace_back(a, c, labeled ? b.labels[i] : 0);
  }
  std::sort(arcs.begin(), arcs.end());
  for (auto& [a, c, l] : arcs) {
    out.edges.push_back({a, c});
    if (labeled) out.labels.push_back(l);
  }
  for (const auto& e : b.distinguished) {
    Vertex a = lab[e.from], c = lab[e.to];
    out.distinguished.push_back({std::min(a, c), std::max(a, c)});
  }
  std::sort(out.distinguished.begin(), out.distinguished.end());
  return out;
}

CanonicalCode canonical_graph_code(const Graph& g) {
  detail::DecoratedGraph dg;
  dg.keys.assign(g.vertex_count(), {0u, 0u});
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) {
      dg.arcs.push_back({e.u, e.u, kPlainLoop});
    } else {
      dg.arcs.push_back({e.u, e.v, kPlain});
      dg.arcs.push_back({e.v, e.u, kPlain});
    }
  }
  dg.header = {0xffffffffu};
  return {detail::canonize(dg).code};
}

}  // namespace rgcost

namespace rgcost {

RootedBall decode_code(const CanonicalCode& code) {
  const std::string& s = code.bytes;
  std::size_t pos = 0;
  auto get = [&]() -> std::uint32_t {
    if (pos + 4 > s.size()) throw InputError("truncated canonical code");
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x = (x << 8) | static_cast<unsigned char>(s[pos++]);
    return x;
  };
  RootedBall b;
  b.radius = static_cast<int>(get());
  const bool labeled = get() != 0;
  const bool colored = get() != 0;
  const std::uint32_t m = get();
  b.origin.resize(m);
  b.dist.resize(m);
  if (colored) b.colors.resize(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    b.origin[i] = i;
    b.dist[i] = static_cast<int>(get());
    int c = static_cast<int>(get());
    if (colored) b.colors[i] = c;
  }
  const std::uint32_t arcs = get();
  std::vector<std::tuple<Vertex, Vertex, int>> edges;
  for (std::uint32_t i = 0; i < arcs; ++i) {
    Vertex a = get(), c = get();
    std::uint32_t kind = get();
    if (kind == kPlain) {
      if (a < c) edges.emplace_back(a, c, 0);
    } else if (kind == kPlainLoop) {
      edges.emplace_back(a, a, 0);
    } else if (kind == kMarked) {
      if (a < c) b.distinguished.push_back({a, c});
    } else if (kind == kMarkedLoop) {
      b.distinguished.push_back({a, a});
    } else if ((kind - kLabelBase) % 2 == 0) {
      edges.emplace_back(a, c, static_cast<int>((kind - kLabelBase) / 2));
    }
  }
  if (pos != s.size()) throw InputError("trailing bytes in canonical code");
  std::sort(edges.begin(), edges.end());
  for (auto& [a, c, l] : edges) {
    b.edges.push_back({a, c});
    if (labeled) b.labels.push_back(l);
  }
  std::sort(b.distinguished.begin(), b.distinguished.end());
  return b;
}

}  // namespace rgcost

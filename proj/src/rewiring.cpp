#include "rgcost/rewiring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "rgcost/util.hpp"

namespace rgcost {

namespace {

std::uint64_t pair_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Every non-loop g-edge whose endpoints are more than L apart in h, in edge order.
std::vector<Edge> stretched_edges(const Graph& g, const Graph& h, int L, bool first_only) {
  std::vector<Edge> out;
  Bfs bfs(h.vertex_count());
  Vertex current = static_cast<Vertex>(-1);
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) continue;
    if (e.u != current) {
      current = e.u;
      bfs.run(h, current, L);
    }
    if (bfs.dist(e.v) > L) {
      out.push_back(e);
      if (first_only) break;
    }
  }
  return out;
}

}  // namespace

nlohmann::json RewiringCertificate::to_json() const {
  nlohmann::json j{{"L", L}, {"valid", valid}};
  if (witness) {
    j["witness"] = {witness->first, witness->second};
    j["witness_graph"] = witness_in_base ? "base" : "rewired";
  }
  return j;
}

RewiringCertificate is_rewiring(const Graph& g, const Graph& h, int L) {
  if (g.vertex_count() != h.vertex_count()) {
    throw InputError("rewiring check on different vertex sets (" + std::to_string(g.vertex_count()) + " vs " +
                     std::to_string(h.vertex_count()) + ")");
  }
  if (L < 1) throw InputError("L must be at least 1");
  RewiringCertificate cert;
  cert.L = L;
  auto bad = stretched_edges(g, h, L, true);
  if (!bad.empty()) {
    cert.witness = {bad[0].u, bad[0].v};
    cert.witness_in_base = true;
    return cert;
  }
  bad = stretched_edges(h, g, L, true);
  if (!bad.empty()) {
    cert.witness = {bad[0].u, bad[0].v};
    cert.witness_in_base = false;
    return cert;
  }
  cert.valid = true;
  return cert;
}

double edge_density(const Graph& g) {
  if (g.vertex_count() == 0) throw InputError("edge density of an empty graph");
  return static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
}

DensityReport density_report(std::span<const double> densities) {
  if (densities.empty()) throw InputError("density report of an empty sequence");
  DensityReport rep;
  rep.densities.assign(densities.begin(), densities.end());
  double m = rep.densities[0];
  for (double d : rep.densities) {
    m = std::min(m, d);
    rep.running_min.push_back(m);
  }
  const std::size_t tail = (rep.densities.size() + 1) / 2;
  rep.liminf_proxy = *std::min_element(rep.densities.end() - static_cast<std::ptrdiff_t>(tail), rep.densities.end());
  return rep;
}

DensityReport density_report(std::span<const Graph> hs) {
  std::vector<double> d;
  for (const Graph& h : hs) d.push_back(edge_density(h));
  return density_report(std::span<const double>(d));
}

namespace {

// Candidate pairs {x, y}, x < y, with 1 <= d_g(x, y) <= L.
std::vector<Edge> shortcut_candidates(const Graph& g, int L) {
  std::vector<Edge> out;
  Bfs bfs(g.vertex_count());
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    for (Vertex y : bfs.run(g, x, L)) {
      if (y > x) out.emplace_back(x, y);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Mutable simple graph used by the annealer.
class WorkGraph {
 public:
  explicit WorkGraph(std::size_t n) : adj_(n), stamp_(n, 0), dist_(n, 0) {}

  bool has(Vertex a, Vertex b) const { return pos_.count(pair_key(a, b)) > 0; }
  void add(Vertex a, Vertex b) {
    pos_.emplace(pair_key(a, b), edges_.size());
    edges_.emplace_back(a, b);
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  void remove(Vertex a, Vertex b) {
    auto it = pos_.find(pair_key(a, b));
    std::size_t i = it->second;
    pos_.erase(it);
    if (i + 1 != edges_.size()) {
      edges_[i] = edges_.back();
      pos_[pair_key(edges_[i].u, edges_[i].v)] = i;
    }
    edges_.pop_back();
    auto drop = [](std::vector<Vertex>& v, Vertex x) { v.erase(std::find(v.begin(), v.end(), x)); };
    drop(adj_[a], b);
    drop(adj_[b], a);
  }
  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  std::vector<Edge> sorted_edges() const {
    std::vector<Edge> e = edges_;
    std::sort(e.begin(), e.end());
    return e;
  }

  // Vertices within distance `depth` of any source.
  const std::vector<Vertex>& ball(std::initializer_list<Vertex> sources, int depth) {
    ++epoch_;
    order_.clear();
    for (Vertex s : sources) {
      if (stamp_[s] != epoch_) {
        stamp_[s] = epoch_;
        dist_[s] = 0;
        order_.push_back(s);
      }
    }
    for (std::size_t i = 0; i < order_.size(); ++i) {
      Vertex x = order_[i];
      if (dist_[x] == depth) continue;
      for (Vertex y : adj_[x]) {
        if (stamp_[y] != epoch_) {
          stamp_[y] = epoch_;
          dist_[y] = dist_[x] + 1;
          order_.push_back(y);
        }
      }
    }
    return order_;
  }
  bool reached(Vertex v) const { return stamp_[v] == epoch_; }

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> pos_;
  std::vector<std::uint32_t> stamp_;
  std::vector<int> dist_;
  std::vector<Vertex> order_;
  std::uint32_t epoch_ = 0;
};

class Annealer {
 public:
  Annealer(const Graph& g, int L, std::vector<Edge> start) : g_(g), L_(L), h_(g.vertex_count()) {
    for (const Edge& e : start) h_.add(e.u, e.v);
    candidates_ = shortcut_candidates(g, L);
  }

  // Deletes {a, b} if every g-edge near it keeps h-distance <= L.
  bool try_delete(Vertex a, Vertex b) {
    std::vector<Vertex> affected = h_.ball({a, b}, L_);
    h_.remove(a, b);
    for (Vertex x : affected) {
      bool need = false;
      for (Vertex y : g_.neighbors(x)) need = need || y != x;
      if (!need) continue;
      h_.ball({x}, L_);
      for (Vertex y : g_.neighbors(x)) {
        if (y != x && !h_.reached(y)) {
          h_.add(a, b);
          return false;
        }
      }
    }
    return true;
  }

  std::vector<Edge> run(std::size_t budget, std::uint64_t seed, double cooling, double initial_accept,
                        std::size_t& proposals) {
    Rng rng(seed);
    double temperature = -1.0 / std::log(initial_accept);
    const std::size_t sweep = std::max<std::size_t>(candidates_.size(), 1);
    std::vector<Edge> best = h_.sorted_edges();
    std::vector<Edge> removed;
    for (std::size_t step = 1; step <= budget; ++step) {
      ++proposals;
      const std::uint64_t kind = uniform_below(rng, 10);
      if (kind < 4 && h_.edge_count() > 0) {
        Edge e = h_.edge(uniform_below(rng, h_.edge_count()));
        try_delete(e.u, e.v);
      } else if (!candidates_.empty()) {
        Edge c = candidates_[uniform_below(rng, candidates_.size())];
        if (!h_.has(c.u, c.v)) {
          h_.add(c.u, c.v);
          long delta = 1;
          removed.clear();
          if (kind >= 6) {
            std::vector<Edge> near;
            for (Vertex x : {c.u, c.v}) {
              for (Vertex y : h_.neighbors(x)) {
                Edge e(x, y);
                if (e != c) near.push_back(e);
              }
            }
            std::sort(near.begin(), near.end());
            near.erase(std::unique(near.begin(), near.end()), near.end());
            for (std::size_t i = near.size(); i > 1; --i) std::swap(near[i - 1], near[uniform_below(rng, i)]);
            for (const Edge& e : near) {
              if (try_delete(e.u, e.v)) {
                removed.push_back(e);
                --delta;
              }
            }
          }
          bool accept = delta <= 0 || uniform_unit(rng) < std::exp(-static_cast<double>(delta) / temperature);
          if (!accept) {
            h_.remove(c.u, c.v);
            for (const Edge& e : removed) h_.add(e.u, e.v);
          }
        }
      }
      if (h_.edge_count() < best.size()) best = h_.sorted_edges();
      if (step % sweep == 0) temperature *= cooling;
    }
    return best;
  }

  std::vector<Edge> greedy_prune(std::vector<Edge> start) {
    WorkGraph fresh(g_.vertex_count());
    h_ = fresh;
    for (const Edge& e : start) h_.add(e.u, e.v);
    for (const Edge& e : start) try_delete(e.u, e.v);
    return h_.sorted_edges();
  }

 private:
  const Graph& g_;
  int L_;
  WorkGraph h_;
  std::vector<Edge> candidates_;
};

std::vector<Edge> simple_edges(const Graph& g) {
  auto s = g.simplified();
  return {s.edges().begin(), s.edges().end()};
}

}  // namespace

RewiringResult optimize_rewiring(const Graph& g, int L, const AnnealOptions& opts) {
  if (L < 1) throw InputError("L must be at least 1");
  if (opts.budget == 0) throw InputError("annealing budget must be positive");
  if (!(opts.initial_accept > 0.0 && opts.initial_accept < 1.0)) throw InputError("initial acceptance must lie in (0, 1)");
  RewiringResult res;
  std::vector<Edge> best = simple_edges(g);
  for (int stage = 2; stage <= L; ++stage) {
    Annealer a(g, stage, best);
    best = a.run(opts.budget, derive_seed(opts.seed, stage), opts.cooling, opts.initial_accept, res.proposals);
  }
  if (L >= 2) {
    Annealer a(g, L, {});
    best = a.greedy_prune(best);
  }
  res.h = Graph::with_tight_bound(g.vertex_count(), best);
  res.cert = is_rewiring(g, res.h, L);
  if (!res.cert.valid) throw AnalysisError("optimizer produced an invalid rewiring");
  return res;
}

namespace {

// Exhaustive subset search on compressed vertex ids with bitmask BFS.
class ExactSearch {
 public:
  ExactSearch(const Graph& g, int L) : L_(L) {
    cands_ = shortcut_candidates(g, L);
    if (cands_.size() > kExactCandidateLimit) {
      throw AnalysisError("exact search needs at most " + std::to_string(kExactCandidateLimit) +
                          " candidate pairs, instance has " + std::to_string(cands_.size()));
    }
    std::vector<int> id(g.vertex_count(), -1);
    for (const Edge& e : cands_) {
      for (Vertex v : {e.u, e.v}) {
        if (id[v] < 0) {
          id[v] = static_cast<int>(orig_.size());
          orig_.push_back(v);
        }
      }
    }
    m_ = orig_.size();
    for (const Edge& e : cands_) local_.emplace_back(id[e.u], id[e.v]);
    const Graph simple = g.simplified();
    for (const Edge& e : simple.edges()) {
      if (!e.is_loop()) base_.emplace_back(id[e.u], id[e.v]);
    }
    last_.assign(m_, -1);
    for (std::size_t i = 0; i < local_.size(); ++i) {
      last_[local_[i].first] = static_cast<int>(i);
      last_[local_[i].second] = static_cast<int>(i);
    }
    components_ = connected_components(Graph(m_, to_edges(base_), std::max<int>(1, 2 * static_cast<int>(m_)))).size();
  }

  std::vector<Edge> solve() {
    if (m_ == 0) return {};
    const std::size_t floor = m_ - components_;
    for (std::size_t k = floor; k <= local_.size(); ++k) {
      chosen_.clear();
      count_.assign(m_, 0);
      if (dfs(0, k)) {
        std::vector<Edge> out;
        for (std::size_t i : chosen_) out.emplace_back(orig_[local_[i].first], orig_[local_[i].second]);
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    throw AnalysisError("exact search found no rewiring");  // unreachable: g itself qualifies
  }

 private:
  static std::vector<Edge> to_edges(const std::vector<std::pair<int, int>>& p) {
    std::vector<Edge> e;
    for (auto [a, b] : p) e.emplace_back(a, b);
    return e;
  }

  bool dfs(std::size_t i, std::size_t k) {
    if (chosen_.size() == k) return valid();
    if (chosen_.size() + (local_.size() - i) < k) return false;
    auto [a, b] = local_[i];
    chosen_.push_back(i);
    ++count_[a];
    ++count_[b];
    if (dfs(i + 1, k)) return true;
    chosen_.pop_back();
    --count_[a];
    --count_[b];
    // Skipping the last candidate at an endpoint that has none chosen isolates it.
    for (int v : {a, b}) {
      if (last_[v] == static_cast<int>(i) && count_[v] == 0) return false;
    }
    return dfs(i + 1, k);
  }

  bool valid() const {
    std::vector<std::uint64_t> adj(m_, 0);
    for (std::size_t i : chosen_) {
      auto [a, b] = local_[i];
      adj[a] |= std::uint64_t{1} << b;
      adj[b] |= std::uint64_t{1} << a;
    }
    std::vector<std::uint64_t> reach(m_, 0);
    std::vector<char> done(m_, 0);
    for (auto [x, y] : base_) {
      if (!done[x]) {
        std::uint64_t r = std::uint64_t{1} << x;
        for (int step = 0; step < L_; ++step) {
          std::uint64_t next = r;
          for (std::uint64_t bits = r; bits; bits &= bits - 1) next |= adj[__builtin_ctzll(bits)];
          r = next;
        }
        reach[x] = r;
        done[x] = 1;
      }
      if (!(reach[x] >> y & 1)) return false;
    }
    return true;
  }

  int L_;
  std::vector<Edge> cands_;
  std::vector<Vertex> orig_;
  std::size_t m_ = 0;
  std::size_t components_ = 0;
  std::vector<std::pair<int, int>> local_;
  std::vector<std::pair<int, int>> base_;
  std::vector<int> last_;
  std::vector<std::size_t> chosen_;
  std::vector<int> count_;
};

}  // namespace

Graph exact_rewiring(const Graph& g, int L) {
  if (L < 1) throw InputError("L must be at least 1");
  ExactSearch search(g, L);
  return Graph::with_tight_bound(g.vertex_count(), search.solve());
}

double exact_cL(const Graph& g, int L) { return edge_density(exact_rewiring(g, L)); }

TypeTable type_colors(const Graph& g, const Graph& h, int L) {
  if (L < 1) throw InputError("L must be at least 1");
  if (g.vertex_count() != h.vertex_count()) throw InputError("type table needs graphs on the same vertices");
  TypeTable t;
  t.r = L * L + 1;
  t.R = 2 * t.r;
  t.eta = power_distance_coloring(g, 2 * t.R);
  const auto marks = simple_edges(h);
  BallDecorations deco;
  deco.colors = &t.eta;
  deco.distinguished = marks;
  std::vector<CanonicalCode> per(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) per[v] = canonical_code(ball(g, v, t.R, deco));
  t.types = per;
  std::sort(t.types.begin(), t.types.end());
  t.types.erase(std::unique(t.types.begin(), t.types.end()), t.types.end());
  t.phi.color_count = static_cast<int>(t.types.size());
  t.phi.colors.resize(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    t.phi.colors[v] = 1 + static_cast<int>(std::lower_bound(t.types.begin(), t.types.end(), per[v]) - t.types.begin());
  }
  return t;
}

namespace {

Vertex root_of(const RootedBall& b) {
  for (Vertex i = 0; i < b.size(); ++i) {
    if (b.dist[i] == 0) return i;
  }
  throw InputError("decorated ball without a root");
}

}  // namespace

bool witnesses_at_root(const RootedBall& type, int L) {
  const std::size_t m = type.size();
  const Vertex root = root_of(type);
  std::vector<std::vector<Vertex>> marked(m);
  for (const auto& e : type.distinguished) {
    marked[e.from].push_back(e.to);
    marked[e.to].push_back(e.from);
  }
  std::vector<int> dist(m, kUnreached);
  std::vector<Vertex> queue{root};
  dist[root] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Vertex x = queue[i];
    if (dist[x] == L) continue;
    for (Vertex y : marked[x]) {
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  for (const auto& e : type.edges) {
    Vertex other = e.from == root ? e.to : e.to == root ? e.from : root;
    if (other != root && dist[other] > L) return false;
  }
  return true;
}

namespace {

// A decoded type with the codes the decoder compares against.
struct TypeInfo {
  RootedBall ball;
  int root_color = 0;
  bool witness = false;
  std::string plain_R;   // (alpha, eta)
  std::string plain_r;   // (B_alpha(r, o), eta)
  std::string own_r;     // the type cut to radius r around its root
  std::vector<std::pair<int, std::string>> rerooted;  // (eta color of v, type cut to radius r around v)
  std::vector<int> root_marked_colors;                // eta colors of marked neighbors of the root
};

TypeInfo decode_type(const CanonicalCode& code, int r, int L) {
  TypeInfo info;
  info.ball = decode_code(code);
  const RootedBall& b = info.ball;
  const Vertex root = root_of(b);
  info.root_color = b.colors.at(root);
  info.witness = witnesses_at_root(b, L);

  std::vector<Edge> edges;
  std::vector<int> deg(b.size(), 0);
  for (const auto& e : b.edges) {
    edges.emplace_back(e.from, e.to);
    deg[e.from] += 1;
    deg[e.to] += 1;
  }
  const int D = std::max(1, *std::max_element(deg.begin(), deg.end()));
  Graph alpha(b.size(), edges, D);
  int colors = *std::max_element(b.colors.begin(), b.colors.end());
  Coloring eta{b.colors, colors};
  std::vector<Edge> marks;
  for (const auto& e : b.distinguished) marks.emplace_back(e.from, e.to);
  std::sort(marks.begin(), marks.end());

  BallDecorations plain;
  plain.colors = &eta;
  BallDecorations full = plain;
  full.distinguished = marks;
  info.plain_R = canonical_code(ball(alpha, root, b.radius, plain)).bytes;
  info.plain_r = canonical_code(ball(alpha, root, r, plain)).bytes;
  for (Vertex v = 0; v < b.size(); ++v) {
    if (b.dist[v] > r) continue;
    std::string c = canonical_code(ball(alpha, v, r, full)).bytes;
    if (v == root) info.own_r = c;
    info.rerooted.emplace_back(b.colors[v], std::move(c));
  }
  for (const auto& e : b.distinguished) {
    if (e.from == root && e.to != root) info.root_marked_colors.push_back(b.colors[e.to]);
    if (e.to == root && e.from != root) info.root_marked_colors.push_back(b.colors[e.from]);
  }
  return info;
}

}  // namespace

nlohmann::json TransferReport::to_json() const {
  return {{"r", r},
          {"R", R},
          {"eta_colors", eta_colors},
          {"type_count", type_count},
          {"model_tv", model_tv},
          {"y1_fraction", y1_fraction},
          {"problematic_fraction", problematic_fraction},
          {"patched_fraction", patched_fraction},
          {"patch_rounds", patch_rounds},
          {"decoded_edges", decoded_edges},
          {"density_source", density_source},
          {"density_result", density_result}};
}

TransferResult transfer_rewiring(const Graph& g1, const Graph& h1, const Graph& g2, int L, const TransferOptions& opts) {
  auto input = is_rewiring(g1, h1, L);
  if (!input.valid) throw InputError("source pair is not an L-rewiring");
  if (g2.vertex_count() == 0) throw InputError("transfer target is empty");

  TransferResult out;
  TransferReport& rep = out.report;
  TypeTable table = type_colors(g1, h1, L);
  const int r = table.r, R = table.R;
  rep.r = r;
  rep.R = R;
  rep.eta_colors = table.eta.color_count;
  rep.type_count = table.types.size();
  rep.density_source = edge_density(h1);

  // Model the type statistics on g2.
  auto goal = colored_neighborhood_distribution(g1, r, table.phi);
  ModelOptions mopts = opts.model;
  if (opts.self_seed && g1 == g2) mopts.starts.insert(mopts.starts.begin(), table.phi);
  ModelResult model = model_coloring(g2, goal, mopts);
  rep.model_tv = model.achieved_tv;
  const Coloring& psi = model.coloring;

  std::vector<TypeInfo> info;
  info.reserve(table.types.size());
  for (const auto& code : table.types) info.push_back(decode_type(code, r, L));

  const std::size_t n = g2.vertex_count();
  Coloring eta2{std::vector<int>(n), table.eta.color_count};
  for (Vertex x = 0; x < n; ++x) eta2.colors[x] = info[psi[x] - 1].root_color;

  BallDecorations deco;
  deco.colors = &eta2;
  auto injective = [&](const RootedBall& b) {
    std::vector<int> c = b.colors;
    std::sort(c.begin(), c.end());
    return std::adjacent_find(c.begin(), c.end()) == c.end();
  };

  std::vector<char> y1(n, 0), y2(n, 0);
  std::vector<std::unordered_map<int, Vertex>> ident(n);
  for (Vertex x = 0; x < n; ++x) {
    const TypeInfo& t = info[psi[x] - 1];
    RootedBall big = ball(g2, x, R, deco);
    RootedBall small = restrict_ball(big, r);
    y1[x] = !injective(small) || canonical_code(small).bytes != t.plain_r;
    bool bad = !t.witness || !injective(big) || canonical_code(big).bytes != t.plain_R || y1[x];
    if (!y1[x]) {
      for (std::size_t i = 0; i < small.size(); ++i) ident[x].emplace(small.colors[i], small.origin[i]);
    }
    y2[x] = bad;
  }
  // Neighbors must agree with what x's type asserts about them.
  for (Vertex x = 0; x < n; ++x) {
    if (y1[x] || y2[x]) continue;
    const TypeInfo& t = info[psi[x] - 1];
    for (const auto& [color, code] : t.rerooted) {
      auto it = ident[x].find(color);
      if (it == ident[x].end() || info[psi[it->second] - 1].own_r != code) {
        y2[x] = 1;
        break;
      }
    }
  }

  std::unordered_set<std::uint64_t> decoded;
  std::vector<Edge> h0;
  for (Vertex x = 0; x < n; ++x) {
    if (y1[x]) continue;
    for (int color : info[psi[x] - 1].root_marked_colors) {
      auto it = ident[x].find(color);
      if (it == ident[x].end()) continue;
      if (decoded.insert(pair_key(x, it->second)).second) h0.emplace_back(x, it->second);
    }
  }
  rep.decoded_edges = h0.size();
  rep.y1_fraction = static_cast<double>(std::count(y1.begin(), y1.end(), 1)) / n;
  rep.problematic_fraction = static_cast<double>(std::count(y2.begin(), y2.end(), 1)) / n;

  // Patch: add every g2-edge at a problematic vertex; grow the set until certified.
  const auto g2_edges = simple_edges(g2);
  std::vector<char> problem = y2;
  for (;;) {
    ++rep.patch_rounds;
    std::unordered_set<std::uint64_t> seen = decoded;
    std::vector<Edge> edges = h0;
    for (const Edge& e : g2_edges) {
      if ((problem[e.u] || problem[e.v]) && seen.insert(pair_key(e.u, e.v)).second) edges.push_back(e);
    }
    out.h2 = Graph::with_tight_bound(n, edges);
    auto stretched = stretched_edges(g2, out.h2, L, false);
    if (stretched.empty()) break;
    for (const Edge& e : stretched) problem[e.u] = problem[e.v] = 1;
  }
  out.cert = is_rewiring(g2, out.h2, L);
  if (!out.cert.valid) throw AnalysisError("patched transfer failed to certify");
  rep.patched_fraction = static_cast<double>(std::count(problem.begin(), problem.end(), 1)) / n;
  rep.density_result = edge_density(out.h2);
  return out;
}

}  // namespace rgcost

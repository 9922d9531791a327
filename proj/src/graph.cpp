#include "rgcost/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include "rgcost/coloring.hpp"

namespace rgcost {

void Coloring::validate(std::size_t vertex_count) const {
  if (colors.size() != vertex_count) {
    throw InputError("coloring has " + std::to_string(colors.size()) + " entries, graph has " +
                     std::to_string(vertex_count) + " vertices");
  }
  for (std::size_t v = 0; v < colors.size(); ++v) {
    if (colors[v] < 1 || colors[v] > color_count) {
      throw InputError("color " + std::to_string(colors[v]) + " of vertex " + std::to_string(v) +
                       " outside 1.." + std::to_string(color_count));
    }
  }
}

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges, int degree_bound)
    : n_(vertex_count), degree_bound_(degree_bound), edges_(std::move(edges)) {
  if (degree_bound_ < 1) throw InputError("degree bound must be positive");
  for (const Edge& e : edges_) {
    if (e.v >= n_) {
      throw InputError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       "} references a vertex >= " + std::to_string(n_));
    }
  }
  std::sort(edges_.begin(), edges_.end());

  std::vector<std::size_t> count(n_ + 1, 0);
  std::vector<int> deg(n_, 0);
  for (const Edge& e : edges_) {
    if (e.is_loop()) {
      ++count[e.u];
      deg[e.u] += 2;
    } else {
      ++count[e.u];
      ++count[e.v];
      ++deg[e.u];
      ++deg[e.v];
    }
  }
  for (std::size_t v = 0; v < n_; ++v) {
    if (deg[v] > degree_bound_) {
      throw InputError("vertex " + std::to_string(v) + " has degree " + std::to_string(deg[v]) +
                       " above the bound " + std::to_string(degree_bound_));
    }
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + count[v];
  adj_.resize(offsets_[n_]);
  adj_edge_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    adj_[fill[e.u]] = e.v;
    adj_edge_[fill[e.u]++] = id;
    if (!e.is_loop()) {
      adj_[fill[e.v]] = e.u;
      adj_edge_[fill[e.v]++] = id;
    }
  }
}

Graph Graph::with_tight_bound(std::size_t vertex_count, std::vector<Edge> edges) {
  std::vector<int> deg(vertex_count, 0);
  for (const Edge& e : edges) {
    if (e.v >= vertex_count) throw InputError("edge endpoint out of range");
    if (e.is_loop()) {
      deg[e.u] += 2;
    } else {
      ++deg[e.u];
      ++deg[e.v];
    }
  }
  int d = 1;
  for (int x : deg) d = std::max(d, x);
  return Graph(vertex_count, std::move(edges), d);
}

int Graph::degree(Vertex v) const {
  int d = 0;
  for (Vertex w : neighbors(v)) d += (w == v) ? 2 : 1;
  return d;
}

int Graph::max_degree() const {
  int d = 0;
  for (Vertex v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

Graph Graph::simplified() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) {
    if (e.is_loop()) continue;
    if (!out.empty() && out.back() == e) continue;
    out.push_back(e);
  }
  return Graph(n_, std::move(out), degree_bound_);
}

void Bfs::resize(std::size_t n) {
  stamp_.assign(n, 0);
  dist_.assign(n, 0);
  order_.clear();
  order_.reserve(n);
  epoch_ = 0;
}

std::span<const Vertex> Bfs::run(const Graph& g, Vertex source, int max_depth) {
  if (stamp_.size() != g.vertex_count()) resize(g.vertex_count());
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  order_.clear();
  order_.push_back(source);
  stamp_[source] = epoch_;
  dist_[source] = 0;
  for (std::size_t head = 0; head < order_.size(); ++head) {
    Vertex x = order_[head];
    int d = dist_[x];
    if (d >= max_depth) continue;
    for (Vertex y : g.neighbors(x)) {
      if (stamp_[y] == epoch_) continue;
      stamp_[y] = epoch_;
      dist_[y] = d + 1;
      order_.push_back(y);
    }
  }
  return order_;
}

std::vector<int> distances_from(const Graph& g, Vertex source) {
  if (source >= g.vertex_count()) throw InputError("invalid vertex id " + std::to_string(source));
  Bfs bfs(g.vertex_count());
  bfs.run(g, source);
  std::vector<int> d(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) d[v] = bfs.dist(v);
  return d;
}

int girth(const Graph& g) {
  int best = kUnreached;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    if (e.is_loop()) return 1;
    if (i > 0 && g.edge(i - 1) == e) best = std::min(best, 2);
  }
  if (best == 2) return 2;

  // BFS from every vertex; a non-tree edge closing at depths (a, b) bounds the
  // girth by a + b + 1. Exact when minimized over all roots.
  const std::size_t n = g.vertex_count();
  std::vector<int> dist(n);
  std::vector<std::uint32_t> parent_edge(n);
  std::vector<Vertex> queue;
  queue.reserve(n);
  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    queue.push_back(s);
    dist[s] = 0;
    parent_edge[s] = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex x = queue[head];
      if (2 * dist[x] + 1 >= best) break;
      auto nbrs = g.neighbors(x);
      auto ids = g.incident_edges(x);
      for (std::size_t j = 0; j < nbrs.size(); ++j) {
        Vertex y = nbrs[j];
        if (ids[j] == parent_edge[x]) continue;
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          parent_edge[y] = ids[j];
          queue.push_back(y);
        } else {
          best = std::min(best, dist[x] + dist[y] + 1);
        }
      }
    }
  }
  return best;
}

Coloring power_distance_coloring(const Graph& g, int d) {
  if (d < 1) throw InputError("distance must be positive");
  const std::size_t n = g.vertex_count();
  Coloring c{std::vector<int>(n, 0), 0};
  Bfs bfs(n);
  std::vector<char> used;
  for (Vertex v = 0; v < n; ++v) {
    used.assign(used.size(), 0);
    for (Vertex w : bfs.run(g, v, d)) {
      int cw = c.colors[w];
      if (cw > 0) {
        if (static_cast<std::size_t>(cw) >= used.size()) used.resize(cw + 1, 0);
        used[cw] = 1;
      }
    }
    int color = 1;
    while (static_cast<std::size_t>(color) < used.size() && used[color]) ++color;
    c.colors[v] = color;
    c.color_count = std::max(c.color_count, color);
  }
  if (n > 0 && c.color_count == 0) c.color_count = 1;
  return c;
}

std::size_t power_distance_color_bound(const Graph& g, int d) {
  const double D = g.degree_bound();
  double bound = 1.0;
  if (d >= 1) bound = 1.0 + D * std::pow(std::max(D - 1.0, 1.0), d - 1) * d;
  double n = static_cast<double>(g.vertex_count());
  return static_cast<std::size_t>(std::min(bound, std::max(n, 1.0)));
}

std::vector<int> component_labels(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> label(n, -1);
  std::vector<Vertex> stack;
  int next = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : g.neighbors(x)) {
        if (label[y] < 0) {
          label[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  auto label = component_labels(g);
  int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::vector<Vertex>> blocks(count);
  for (Vertex v = 0; v < label.size(); ++v) blocks[label[v]].push_back(v);
  return blocks;
}

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

long long parse_count(std::istringstream& ss, const char* what, int line) {
  long long x;
  if (!(ss >> x)) throw InputError(std::string("expected ") + what, line);
  if (x < 0) throw InputError(std::string(what) + " must be nonnegative", line);
  return x;
}

}  // namespace

Graph parse_graph(std::istream& in) {
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  long long n = 0, m = 0, D = 0;
  std::vector<Edge> edges;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;
    std::istringstream ss(line);
    if (!have_header) {
      std::string tag;
      ss >> tag;
      if (tag != "graph") throw InputError("expected header `graph <n> <m> <D>`", line_no);
      n = parse_count(ss, "vertex count", line_no);
      m = parse_count(ss, "edge count", line_no);
      D = parse_count(ss, "degree bound", line_no);
      if (D < 1) throw InputError("degree bound must be positive", line_no);
      std::string extra;
      if (ss >> extra) throw InputError("trailing token `" + extra + "` in header", line_no);
      have_header = true;
      edges.reserve(static_cast<std::size_t>(m));
      continue;
    }
    long long u = parse_count(ss, "edge endpoint", line_no);
    long long v = parse_count(ss, "edge endpoint", line_no);
    std::string extra;
    if (ss >> extra) throw InputError("trailing token `" + extra + "` in edge line", line_no);
    if (u >= n || v >= n) throw InputError("edge endpoint out of range", line_no);
    if (static_cast<long long>(edges.size()) >= m) {
      throw InputError("more edge lines than the declared " + std::to_string(m), line_no);
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (!have_header) throw InputError("missing graph header", line_no > 0 ? line_no : 1);
  if (static_cast<long long>(edges.size()) != m) {
    throw InputError("declared " + std::to_string(m) + " edges, found " + std::to_string(edges.size()),
                     line_no);
  }
  try {
    return Graph(static_cast<std::size_t>(n), std::move(edges), static_cast<int>(D));
  } catch (const InputError& e) {
    throw InputError(e.message(), line_no);
  }
}

Graph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  try {
    return parse_graph(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.message(), e.line());
  }
}

std::string format_graph(const Graph& g) {
  std::string out = "graph " + std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) +
                    " " + std::to_string(g.degree_bound()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << format_graph(g);
}

Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::with_tight_bound(n, std::move(e));
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::with_tight_bound(n, std::move(e));
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::with_tight_bound(n, std::move(e));
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::with_tight_bound(leaves + 1, std::move(e));
}

Graph torus_graph(std::size_t rows, std::size_t cols) {
  std::vector<Edge> e;
  auto id = [cols](std::size_t i, std::size_t j) { return static_cast<Vertex>(i * cols + j); };
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      e.emplace_back(id(i, j), id((i + 1) % rows, j));
      e.emplace_back(id(i, j), id(i, (j + 1) % cols));
    }
  }
  return Graph(rows * cols, std::move(e), 4);
}

Graph petersen_graph() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, std::move(e), 3);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> e(a.edges().begin(), a.edges().end());
  const auto shift = static_cast<Vertex>(a.vertex_count());
  for (const Edge& x : b.edges()) e.emplace_back(x.u + shift, x.v + shift);
  return Graph(a.vertex_count() + b.vertex_count(), std::move(e),
               std::max(a.degree_bound(), b.degree_bound()));
}

}  // namespace rgcost

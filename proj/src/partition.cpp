#include "rgcost/partition.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "rgcost/util.hpp"

namespace rgcost {

namespace {

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) {
      a(e.u, e.u) += 2.0;
    } else {
      a(e.u, e.v) += 1.0;
      a(e.v, e.u) += 1.0;
    }
  }
  return a;
}

Eigen::MatrixXd laplacian_matrix(const Graph& g) {
  Eigen::MatrixXd a = adjacency_matrix(g);
  Eigen::MatrixXd l = -a;
  for (Eigen::Index v = 0; v < a.rows(); ++v) l(v, v) += g.degree(static_cast<Vertex>(v));
  return l;
}

// y = A x with the sparse structure of g (loops count twice).
void adjacency_apply(const Graph& g, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.setZero(x.size());
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) {
      y[e.u] += 2.0 * x[e.u];
    } else {
      y[e.u] += x[e.v];
      y[e.v] += x[e.u];
    }
  }
}

struct RitzPair {
  double value = 0.0;
  double residual = 0.0;
  Eigen::VectorXd vector;  // filled for the top pair only
};

// Top two eigenvalues of a symmetric operator by restarted Lanczos with full
// reorthogonalization. `deflate`, when non-empty, is projected out.
std::vector<RitzPair> lanczos_top2(std::size_t n, const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
                                   const Eigen::VectorXd& deflate, std::uint64_t seed) {
  const int steps = static_cast<int>(std::min<std::size_t>(n, 160));
  Rng rng(seed);
  Eigen::VectorXd start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = uniform_unit(rng) - 0.5;
  std::vector<RitzPair> best(2);
  for (int restart = 0; restart < 12; ++restart) {
    Eigen::MatrixXd q(n, steps + 1);
    std::vector<double> alpha, beta;
    Eigen::VectorXd v = start;
    if (deflate.size()) v -= deflate * deflate.dot(v);
    v.normalize();
    q.col(0) = v;
    int m = 0;
    Eigen::VectorXd w;
    double last_beta = 0.0;
    for (int j = 0; j < steps; ++j) {
      op(q.col(j), w);
      if (deflate.size()) w -= deflate * deflate.dot(w);
      alpha.push_back(q.col(j).dot(w));
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) w -= q.col(i) * q.col(i).dot(w);
      }
      m = j + 1;
      last_beta = w.norm();
      if (last_beta < 1e-12 || j + 1 == steps) break;
      beta.push_back(last_beta);
      q.col(j + 1) = w / last_beta;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const int top = m - 1;
    for (int r = 0; r < 2 && top - r >= 0; ++r) {
      best[r].value = es.eigenvalues()[top - r];
      best[r].residual = std::fabs(last_beta * es.eigenvectors()(m - 1, top - r));
    }
    if (m < 2) best[1] = best[0];
    Eigen::VectorXd y0 = q.leftCols(m) * es.eigenvectors().col(top);
    best[0].vector = y0;
    if (best[0].residual < 1e-9 && best[1].residual < 1e-9) break;
    Eigen::VectorXd y1 = m >= 2 ? Eigen::VectorXd(q.leftCols(m) * es.eigenvectors().col(top - 1)) : y0;
    start = y0 + y1;
  }
  return best;
}

}  // namespace

SpectralResult spectral_gap(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw InputError("spectral gap of an empty graph");
  SpectralResult res;
  res.connected = connected_components(g).size() == 1;
  const int dmax = g.max_degree();
  res.regular = true;
  for (Vertex v = 0; v < n; ++v) res.regular = res.regular && g.degree(v) == dmax;

  if (n <= 3000) {
    res.method = "dense";
    Eigen::MatrixXd a = adjacency_matrix(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const auto& ev = es.eigenvalues();
    const auto last = static_cast<Eigen::Index>(n) - 1;
    res.lambda1 = ev[last];
    res.lambda2 = n >= 2 ? ev[last - 1] : ev[last];
    if (n >= 2) {
      Eigen::VectorXd x = es.eigenvectors().col(last - 1);
      res.residual = (a * x - res.lambda2 * x).norm();
    }
    if (!res.connected || n == 1) {
      res.gap = 0.0;
    } else if (res.regular) {
      res.gap = dmax - res.lambda2;
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ls(laplacian_matrix(g), Eigen::EigenvaluesOnly);
      res.gap = ls.eigenvalues()[1];
    }
    return res;
  }

  res.method = "lanczos";
  auto adj = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { adjacency_apply(g, x, y); };
  auto top = lanczos_top2(n, adj, Eigen::VectorXd(), 0x5eed);
  res.lambda1 = top[0].value;
  res.lambda2 = top[1].value;
  res.residual = std::max(top[0].residual, top[1].residual);
  if (!res.connected) {
    res.gap = 0.0;
    return res;
  }
  Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  auto laplacian_apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    adjacency_apply(g, x, y);
    for (Vertex v = 0; v < n; ++v) y[v] = g.degree(v) * x[v] - y[v];
  };
  // Top of c I - Laplacian on the complement of the constant vector.
  const double c = 2.0 * dmax;
  auto shifted = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    laplacian_apply(x, y);
    y = c * x - y;
  };
  auto s = lanczos_top2(n, shifted, ones, 0x5eed + 1);
  double gap = c - s[0].value;
  double gap_residual = s[0].residual;
  if (gap_residual > 1e-8) {
    // Clustered bottom spectrum: run Lanczos on (L + eps I)^-1 instead and
    // read the gap off the Rayleigh quotient of the returned vector.
    res.method = "lanczos-shift-invert";
    const double eps = 1e-9;
    std::vector<Eigen::Triplet<double>> trip;
    for (Vertex v = 0; v < n; ++v) trip.emplace_back(v, v, g.degree(v) + eps);
    for (const Edge& e : g.edges()) {
      if (e.is_loop()) {
        trip.emplace_back(e.u, e.u, -2.0);
      } else {
        trip.emplace_back(e.u, e.v, -1.0);
        trip.emplace_back(e.v, e.u, -1.0);
      }
    }
    Eigen::SparseMatrix<double> lap(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    lap.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
    if (solver.info() == Eigen::Success) {
      auto inverse = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = solver.solve(x); };
      auto inv = lanczos_top2(n, inverse, ones, 0x5eed + 2);
      Eigen::VectorXd x = inv[0].vector;
      x -= ones * ones.dot(x);
      x.normalize();
      Eigen::VectorXd lx;
      laplacian_apply(x, lx);
      const double q = x.dot(lx);
      const double r = (lx - q * x).norm();
      if (r < gap_residual) {
        gap = q;
        gap_residual = r;
      }
    }
  }
  res.gap = gap;
  if (res.regular) {
    // Adjacency and Laplacian share eigenvectors here.
    if (gap_residual < top[1].residual) res.lambda2 = dmax - gap;
    res.residual = std::max(top[0].residual, std::min(top[1].residual, gap_residual));
  } else {
    res.residual = std::max(res.residual, gap_residual);
  }
  return res;
}

StepStructure StepStructure::from_graph(const Graph& g) {
  StepStructure s;
  s.graph = g;
  s.steps.resize(g.vertex_count());
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    for (Vertex y : g.neighbors(x)) {
      if (y != x) s.steps[x].push_back(y);
    }
    std::sort(s.steps[x].begin(), s.steps[x].end());
    s.steps[x].erase(std::unique(s.steps[x].begin(), s.steps[x].end()), s.steps[x].end());
  }
  s.step_count = g.degree_bound();
  s.symmetric = true;
  return s;
}

Partition make_partition(const StepStructure& s, std::vector<int> block_of, int k) {
  const std::size_t n = s.graph.vertex_count();
  if (block_of.size() != n) throw InputError("block assignment size does not match the vertex count");
  Partition p;
  p.k = k;
  p.blocks.assign(k, {});
  for (Vertex v = 0; v < n; ++v) {
    if (block_of[v] < 0 || block_of[v] >= k) throw InputError("block index out of range");
    p.blocks[block_of[v]].push_back(v);
  }
  for (const Edge& e : s.graph.edges()) {
    if (block_of[e.u] != block_of[e.v]) p.boundary_edges.push_back(e);
  }
  for (const auto& b : p.blocks) p.block_fractions.push_back(static_cast<double>(b.size()) / static_cast<double>(n));
  std::vector<std::pair<int, Vertex>> reached;
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y : s.steps[x]) {
      if (block_of[y] != block_of[x]) reached.emplace_back(block_of[x], y);
    }
  }
  std::sort(reached.begin(), reached.end());
  p.boundary_vertex_sum = static_cast<std::size_t>(std::unique(reached.begin(), reached.end()) - reached.begin());
  p.block_of = std::move(block_of);
  return p;
}

PartitionVerdict check_partition(const Partition& p, double epsilon, bool budget_exhausted) {
  PartitionVerdict v;
  v.epsilon = epsilon;
  v.budget_exhausted = budget_exhausted;
  const std::size_t n = p.block_of.size();
  const double target = 1.0 / p.k;
  v.sizes_ok = true;
  for (const auto& b : p.blocks) {
    // Compare |A_i| against n (1/k -+ eps) with a small slack for rounding.
    const double lhs = static_cast<double>(b.size());
    v.sizes_ok = v.sizes_ok && lhs >= (target - epsilon) * n - 1e-9 && lhs <= (target + epsilon) * n + 1e-9;
  }
  v.boundary_ok = static_cast<double>(p.boundary_vertex_sum) < epsilon * static_cast<double>(n);
  if (v.sizes_ok && v.boundary_ok) {
    v.status = "conditions hold";
  } else if (budget_exhausted) {
    v.status = "not found within budget";
  } else {
    v.status = "conditions violated by best found";
  }
  return v;
}

namespace {

// Greedy balancing and refinement of boundary_vertex_sum under a size window.
class Refiner {
 public:
  Refiner(const StepStructure& s, int k, std::size_t lo, std::size_t hi) : s_(s), k_(k), lo_(lo), hi_(hi) {
    const std::size_t n = s.graph.vertex_count();
    pred_.resize(n);
    for (Vertex x = 0; x < n; ++x) {
      for (Vertex y : s.steps[x]) pred_[y].push_back(x);
    }
    mark_.assign(k, 0);
  }

  void load(std::vector<int> block_of) {
    block_ = std::move(block_of);
    size_.assign(k_, 0);
    for (int b : block_) ++size_[b];
    total_ = 0;
    for (Vertex y = 0; y < block_.size(); ++y) total_ += contribution(y);
  }

  // Change of boundary_vertex_sum when v moves to block b.
  long delta(Vertex v, int b) {
    const int a = block_[v];
    long before = affected_sum(v);
    block_[v] = b;
    long after = affected_sum(v);
    block_[v] = a;
    return after - before;
  }

  void apply(Vertex v, int b, long d) {
    --size_[block_[v]];
    ++size_[b];
    block_[v] = b;
    total_ += d;
  }

  void balance() {
    const std::size_t n = block_.size();
    for (std::size_t guard = 0; guard < 4 * n + 16; ++guard) {
      int worst = -1;
      long worst_excess = 0;
      for (int b = 0; b < k_; ++b) {
        long excess = size_[b] > hi_ ? static_cast<long>(size_[b] - hi_) : size_[b] < lo_ ? static_cast<long>(lo_ - size_[b]) : 0;
        if (excess > worst_excess) {
          worst_excess = excess;
          worst = b;
        }
      }
      if (worst < 0) return;
      const bool shrink = size_[worst] > hi_;
      std::tuple<long, Vertex, int> best{std::numeric_limits<long>::max(), 0, -1};
      for (Vertex v = 0; v < n; ++v) {
        if (shrink) {
          if (block_[v] != worst) continue;
          for (Vertex y : s_.graph.neighbors(v)) {
            int c = block_[y];
            if (c == worst || size_[c] >= hi_) continue;
            best = std::min(best, std::make_tuple(delta(v, c), v, c));
          }
        } else {
          int a = block_[v];
          if (a == worst || size_[a] <= lo_) continue;
          bool touches = false;
          for (Vertex y : s_.graph.neighbors(v)) touches = touches || block_[y] == worst;
          if (touches) best = std::min(best, std::make_tuple(delta(v, worst), v, worst));
        }
      }
      if (std::get<2>(best) < 0) {
        // No move along the support; take the lowest vertex of the donor.
        int donor = shrink ? worst : static_cast<int>(std::max_element(size_.begin(), size_.end()) - size_.begin());
        int taker = shrink ? static_cast<int>(std::min_element(size_.begin(), size_.end()) - size_.begin()) : worst;
        for (Vertex v = 0; v < n; ++v) {
          if (block_[v] == donor) {
            best = {delta(v, taker), v, taker};
            break;
          }
        }
      }
      apply(std::get<1>(best), std::get<2>(best), std::get<0>(best));
    }
  }

  // Returns true if the budget ran out before a local optimum.
  bool refine(std::size_t budget) {
    std::size_t used = 0;
    bool improved = true;
    while (improved) {
      improved = false;
      for (Vertex v = 0; v < block_.size(); ++v) {
        const int a = block_[v];
        if (size_[a] <= lo_) continue;
        long best = 0;
        int target = -1;
        for (Vertex y : s_.graph.neighbors(v)) {
          int c = block_[y];
          if (c == a || size_[c] >= hi_) continue;
          if (used++ >= budget) return true;
          long d = delta(v, c);
          if (d < best || (d == best && target >= 0 && c < target)) {
            best = d;
            target = c;
          }
        }
        if (target >= 0 && best < 0) {
          apply(v, target, best);
          improved = true;
        }
      }
    }
    return false;
  }

  const std::vector<int>& blocks() const { return block_; }
  long total() const { return total_; }
  bool feasible() const {
    for (std::size_t s : size_) {
      if (s < lo_ || s > hi_) return false;
    }
    return true;
  }

 private:
  long contribution(Vertex y) {
    long c = 0;
    for (Vertex x : pred_[y]) {
      int b = block_[x];
      if (b != block_[y] && !mark_[b]) {
        mark_[b] = 1;
        ++c;
      }
    }
    for (Vertex x : pred_[y]) mark_[block_[x]] = 0;
    return c;
  }
  long affected_sum(Vertex v) {
    long sum = contribution(v);
    for (Vertex y : s_.steps[v]) {
      if (y != v) sum += contribution(y);
    }
    return sum;
  }

  const StepStructure& s_;
  int k_;
  std::size_t lo_, hi_;
  std::vector<std::vector<Vertex>> pred_;
  std::vector<char> mark_;
  std::vector<int> block_;
  std::vector<std::size_t> size_;
  long total_ = 0;
};

std::vector<int> normalized(const std::vector<int>& block_of, int k) {
  std::vector<int> relabel(k, -1);
  int next = 0;
  std::vector<int> out(block_of.size());
  for (std::size_t v = 0; v < block_of.size(); ++v) {
    int& r = relabel[block_of[v]];
    if (r < 0) r = next++;
    out[v] = r;
  }
  return out;
}

// Cuts an ordering into k consecutive chunks of near-equal size.
std::vector<int> chunk_order(const std::vector<Vertex>& order, int k) {
  const std::size_t n = order.size();
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[order[i]] = static_cast<int>(i * k / n);
  return out;
}

// Laplacian eigenvectors 2..k, widened to the full eigenspace of the last one.
Eigen::MatrixXd spectral_embedding(const Graph& g, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian_matrix(g));
  const auto& ev = es.eigenvalues();
  const Eigen::Index n = ev.size();
  Eigen::Index last = std::min<Eigen::Index>(k - 1, n - 1);
  const Eigen::Index cap = std::min<Eigen::Index>(n - 1, 2 * k + 4);
  while (last < cap && std::fabs(ev[last + 1] - ev[last]) < 1e-8 * std::max(1.0, std::fabs(ev[last]))) ++last;
  return es.eigenvectors().middleCols(1, last);
}

std::vector<std::vector<int>> sweep_candidates(const Eigen::MatrixXd& emb, int k) {
  std::vector<std::vector<int>> out;
  const auto n = static_cast<std::size_t>(emb.rows());
  const Eigen::Index dims = std::min<Eigen::Index>(emb.cols(), 8);
  std::vector<Vertex> order(n);
  auto sorted_by = [&](auto key) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return key(a) < key(b); });
    return order;
  };
  for (Eigen::Index i = 0; i < dims; ++i) {
    out.push_back(chunk_order(sorted_by([&](Vertex v) { return emb(v, i); }), k));
  }
  for (Eigen::Index i = 0; i < dims; ++i) {
    for (Eigen::Index j = i + 1; j < dims; ++j) {
      out.push_back(chunk_order(sorted_by([&](Vertex v) { return std::atan2(emb(v, j), emb(v, i)); }), k));
    }
  }
  return out;
}

std::vector<int> kmeans(const Eigen::MatrixXd& emb, int k, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(emb.rows());
  Rng rng(seed);
  std::vector<Eigen::RowVectorXd> centers;
  centers.push_back(emb.row(static_cast<Eigen::Index>(uniform_below(rng, n))));
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centers) best = std::min(best, (emb.row(v) - c).squaredNorm());
      d2[v] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0) {
      double x = uniform_unit(rng) * total;
      for (pick = 0; pick + 1 < n && (x -= d2[pick]) >= 0; ++pick) {
      }
    } else {
      pick = uniform_below(rng, n);
    }
    centers.push_back(emb.row(static_cast<Eigen::Index>(pick)));
  }
  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 50; ++iter) {
    bool changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      int best = 0;
      double bd = std::numeric_limits<double>::max();
      for (int c = 0; c < k; ++c) {
        double d = (emb.row(v) - centers[c]).squaredNorm();
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      changed = changed || assign[v] != best;
      assign[v] = best;
    }
    if (!changed && iter > 0) break;
    std::vector<Eigen::RowVectorXd> sum(k, Eigen::RowVectorXd::Zero(emb.cols()));
    std::vector<int> cnt(k, 0);
    for (std::size_t v = 0; v < n; ++v) {
      sum[assign[v]] += emb.row(v);
      ++cnt[assign[v]];
    }
    for (int c = 0; c < k; ++c) {
      if (cnt[c]) centers[c] = sum[c] / cnt[c];
    }
  }
  return assign;
}

// Multi-source BFS from farthest-point seeds.
std::vector<int> grown_regions(const Graph& g, int k) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> seeds{0};
  std::vector<int> dist(n, kUnreached);
  auto update = [&](Vertex s) {
    auto d = distances_from(g, s);
    for (std::size_t v = 0; v < n; ++v) dist[v] = std::min(dist[v], d[v]);
  };
  update(0);
  while (static_cast<int>(seeds.size()) < k) {
    Vertex far = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (dist[v] > dist[far]) far = v;
    }
    seeds.push_back(far);
    update(far);
  }
  std::vector<int> block(n, -1);
  std::vector<Vertex> frontier;
  for (int i = 0; i < k; ++i) {
    block[seeds[i]] = i;
    frontier.push_back(seeds[i]);
  }
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    Vertex x = frontier[head];
    for (Vertex y : g.neighbors(x)) {
      if (block[y] < 0) {
        block[y] = block[x];
        frontier.push_back(y);
      }
    }
  }
  for (auto& b : block) {
    if (b < 0) b = 0;
  }
  return block;
}

}  // namespace

PartitionResult balanced_partition(const StepStructure& s, int k, double epsilon, const PartitionOptions& opts) {
  const std::size_t n = s.graph.vertex_count();
  if (k < 1) throw InputError("k must be positive");
  if (n == 0) throw InputError("partition of an empty graph");
  if (static_cast<std::size_t>(k) > n) throw InputError("k exceeds the vertex count");
  PartitionResult result;
  if (k == 1) {
    result.partition = make_partition(s, std::vector<int>(n, 0), 1);
    result.verdict = check_partition(result.partition, epsilon);
    result.origin = "trivial";
    return result;
  }

  const double lo_real = (1.0 / k - epsilon) * static_cast<double>(n);
  const double hi_real = (1.0 / k + epsilon) * static_cast<double>(n);
  std::size_t lo = lo_real <= 0 ? 0 : static_cast<std::size_t>(std::ceil(lo_real - 1e-9));
  std::size_t hi = static_cast<std::size_t>(std::floor(hi_real + 1e-9));
  lo = std::min(lo, n / k);
  hi = std::max(hi, (n + k - 1) / k);

  std::vector<std::pair<std::string, std::vector<int>>> candidates;
  candidates.emplace_back("regions", grown_regions(s.graph, k));
  if (n <= opts.dense_limit && n > 2) {
    Eigen::MatrixXd emb = spectral_embedding(s.graph, k);
    for (auto& c : sweep_candidates(emb, k)) candidates.emplace_back("sweep", std::move(c));
    for (int r = 0; r < opts.restarts; ++r) candidates.emplace_back("kmeans", kmeans(emb, k, derive_seed(opts.seed, r)));
  }

  const std::size_t per = std::max<std::size_t>(opts.budget / candidates.size(), 1);
  Refiner refiner(s, k, lo, hi);
  bool have = false;
  std::tuple<int, long, std::vector<int>> best_key;
  bool best_exhausted = false;
  for (auto& [origin, assign] : candidates) {
    refiner.load(assign);
    refiner.balance();
    bool exhausted = refiner.refine(per);
    auto key = std::make_tuple(refiner.feasible() ? 0 : 1, refiner.total(), normalized(refiner.blocks(), k));
    if (!have || key < best_key) {
      best_key = std::move(key);
      best_exhausted = exhausted;
      result.origin = origin;
      have = true;
    }
  }
  result.partition = make_partition(s, std::get<2>(best_key), k);
  result.verdict = check_partition(result.partition, epsilon, best_exhausted);
  return result;
}

PartitionResult balanced_partition(const Graph& g, int k, double epsilon, const PartitionOptions& opts) {
  return balanced_partition(StepStructure::from_graph(g), k, epsilon, opts);
}


nlohmann::json to_json(const SpectralResult& r) {
  return {{"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"gap", r.gap},         {"residual", r.residual},
          {"connected", r.connected}, {"regular", r.regular}, {"method", r.method}};
}

nlohmann::json to_json(const PartitionResult& r) {
  const Partition& p = r.partition;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : p.boundary_edges) edges.push_back({e.u, e.v});
  return {{"k", p.k},
          {"block_of", p.block_of},
          {"block_fractions", p.block_fractions},
          {"boundary_edges", edges},
          {"boundary_vertex_sum", p.boundary_vertex_sum},
          {"boundary_fraction", p.block_of.empty() ? 0.0
                                                   : static_cast<double>(p.boundary_vertex_sum) /
                                                         static_cast<double>(p.block_of.size())},
          {"epsilon", r.verdict.epsilon},
          {"sizes_ok", r.verdict.sizes_ok},
          {"boundary_ok", r.verdict.boundary_ok},
          {"status", r.verdict.status},
          {"origin", r.origin}};
}

}  // namespace rgcost

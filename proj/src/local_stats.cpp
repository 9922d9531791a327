#include "rgcost/local_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "rgcost/partition.hpp"
#include "rgcost/util.hpp"

namespace rgcost {

double NeighborhoodDistribution::total_mass() const {
  double s = 0.0;
  for (const auto& [code, p] : weights) s += p;
  return s;
}

namespace {

NeighborhoodDistribution from_counts(int r, int k, const std::map<std::string, std::size_t>& counts, std::size_t n) {
  NeighborhoodDistribution d;
  d.radius = r;
  d.color_count = k;
  for (const auto& [code, c] : counts) d.weights.emplace(code, static_cast<double>(c) / static_cast<double>(n));
  return d;
}

}  // namespace

NeighborhoodDistribution neighborhood_distribution(const Graph& g, int r) {
  if (g.vertex_count() == 0) throw InputError("neighborhood statistics of an empty graph");
  std::map<std::string, std::size_t> counts;
  for (Vertex v = 0; v < g.vertex_count(); ++v) ++counts[canonical_code(ball(g, v, r)).bytes];
  return from_counts(r, 0, counts, g.vertex_count());
}

NeighborhoodDistribution colored_neighborhood_distribution(const Graph& g, int r, const Coloring& phi) {
  if (g.vertex_count() == 0) throw InputError("neighborhood statistics of an empty graph");
  phi.validate(g.vertex_count());
  std::map<std::string, std::size_t> counts;
  BallDecorations deco;
  deco.colors = &phi;
  for (Vertex v = 0; v < g.vertex_count(); ++v) ++counts[canonical_code(ball(g, v, r, deco)).bytes];
  return from_counts(r, phi.color_count, counts, g.vertex_count());
}

NeighborhoodDistribution forget_colors(const NeighborhoodDistribution& d) {
  NeighborhoodDistribution out;
  out.radius = d.radius;
  out.color_count = 0;
  for (const auto& [code, p] : d.weights) {
    RootedBall b = decode_code({code});
    b.colors.clear();
    out.weights[canonical_code(b).bytes] += p;
  }
  return out;
}

double tv_distance(const NeighborhoodDistribution& a, const NeighborhoodDistribution& b) {
  if (a.radius != b.radius || a.color_count != b.color_count) {
    throw InputError("tv distance between distributions with different (r, k)");
  }
  double sum = 0.0;
  auto ia = a.weights.begin(), ib = b.weights.begin();
  while (ia != a.weights.end() || ib != b.weights.end()) {
    if (ib == b.weights.end() || (ia != a.weights.end() && ia->first < ib->first)) {
      sum += ia->second;
      ++ia;
    } else if (ia == a.weights.end() || ib->first < ia->first) {
      sum += ib->second;
      ++ib;
    } else {
      sum += std::fabs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return std::min(1.0, 0.5 * sum);
}

double bs_distance(const Graph& a, const Graph& b, int r_max) {
  double best = 0.0;
  for (int r = 0; r <= r_max; ++r) {
    best = std::max(best, tv_distance(neighborhood_distribution(a, r), neighborhood_distribution(b, r)));
  }
  return best;
}

namespace {

// Incremental colored r-statistics of one target graph.
class StatTracker {
 public:
  StatTracker(const Graph& g, int r, const NeighborhoodDistribution& goal)
      : n_(g.vertex_count()), goal_(goal.weights.begin(), goal.weights.end()) {
    balls_.reserve(n_);
    for (Vertex v = 0; v < n_; ++v) {
      balls_.push_back(ball(g, v, r));
      balls_.back().colors.assign(balls_.back().size(), 1);
    }
    // u sees v iff d(u, v) <= r, which is symmetric.
    covering_.resize(n_);
    for (Vertex v = 0; v < n_; ++v) covering_[v] = balls_[v].origin;
  }

  void reset(const std::vector<int>& colors) {
    colors_ = colors;
    code_.assign(n_, {});
    count_.clear();
    for (Vertex u = 0; u < n_; ++u) {
      code_[u] = code_of(u);
      ++count_[code_[u]];
    }
    l1_ = 0.0;
    for (const auto& [c, k] : count_) l1_ += std::fabs(frac(k) - goal_p(c));
    for (const auto& [c, p] : goal_) {
      if (!count_.count(c)) l1_ += p;
    }
  }

  // Change of the L1 sum if v were recolored to c; the new codes are staged.
  double try_move(Vertex v, int c) {
    const int old = colors_[v];
    colors_[v] = c;
    staged_.clear();
    for (Vertex u : covering_[v]) staged_.emplace_back(u, code_of(u));
    colors_[v] = old;

    delta_.clear();
    for (const auto& [u, code] : staged_) {
      if (code == code_[u]) continue;
      --delta_[code_[u]];
      ++delta_[code];
    }
    double d = 0.0;
    for (const auto& [code, dc] : delta_) {
      if (dc == 0) continue;
      long before = count_of(code);
      double p = goal_p(code);
      d += std::fabs(frac(before + dc) - p) - std::fabs(frac(before) - p);
    }
    return d;
  }

  void commit(Vertex v, int c, double delta) {
    colors_[v] = c;
    for (auto& [u, code] : staged_) {
      if (code == code_[u]) continue;
      if (--count_[code_[u]] == 0) count_.erase(code_[u]);
      ++count_[code];
      code_[u] = std::move(code);
    }
    l1_ += delta;
  }

  double tv() const { return 0.5 * l1_; }
  const std::vector<int>& colors() const { return colors_; }

 private:
  std::string code_of(Vertex u) {
    RootedBall& b = balls_[u];
    for (std::size_t i = 0; i < b.size(); ++i) b.colors[i] = colors_[b.origin[i]];
    return canonical_code(b).bytes;
  }
  double frac(long c) const { return static_cast<double>(c) / static_cast<double>(n_); }
  double goal_p(const std::string& c) const {
    auto it = goal_.find(c);
    return it == goal_.end() ? 0.0 : it->second;
  }
  long count_of(const std::string& c) const {
    auto it = count_.find(c);
    return it == count_.end() ? 0 : it->second;
  }

  std::size_t n_;
  std::unordered_map<std::string, double> goal_;
  std::vector<RootedBall> balls_;
  std::vector<std::vector<Vertex>> covering_;
  std::vector<int> colors_;
  std::vector<std::string> code_;
  std::unordered_map<std::string, long> count_;
  double l1_ = 0.0;
  std::vector<std::pair<Vertex, std::string>> staged_;
  std::unordered_map<std::string, long> delta_;
};

// Root-color marginal of a colored goal, used to draw random starts.
std::vector<double> root_color_weights(const NeighborhoodDistribution& goal) {
  std::vector<double> w(goal.color_count + 1, 0.0);
  for (const auto& [code, p] : goal.weights) {
    RootedBall b = decode_code({code});
    if (!b.colors.empty() && b.colors[0] >= 1 && b.colors[0] <= goal.color_count) w[b.colors[0]] += p;
  }
  return w;
}

struct RestartOutcome {
  std::vector<int> colors;
  double tv = 1.0;
  std::size_t evaluations = 0;
};

RestartOutcome descend(const Graph& target, const NeighborhoodDistribution& goal, std::vector<int> start,
                       std::size_t budget, std::uint64_t seed) {
  const std::size_t n = target.vertex_count();
  const int k = goal.color_count;
  StatTracker tracker(target, goal.radius, goal);
  tracker.reset(start);
  RestartOutcome out;
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  // Zero-change moves are taken at random so that block boundaries can drift;
  // a few passes without strict progress end the descent.
  int stale = 0;
  while (stale < 4 && out.evaluations < budget && tracker.tv() > 1e-15) {
    bool improved = false;
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
    for (Vertex v : order) {
      if (out.evaluations >= budget) break;
      const int current = tracker.colors()[v];
      double best_delta = 1e-12;
      int best_color = 0;
      for (int c = 1; c <= k && out.evaluations < budget; ++c) {
        if (c == current) continue;
        ++out.evaluations;
        double d = tracker.try_move(v, c);
        if (d < best_delta) {
          best_delta = d;
          best_color = c;
        }
      }
      if (best_color == 0) continue;
      if (best_delta < -1e-12) {
        improved = true;
      } else if (uniform_below(rng, 2) == 0) {
        continue;
      }
      tracker.try_move(v, best_color);
      tracker.commit(v, best_color, best_delta);
    }
    stale = improved ? 0 : stale + 1;
  }
  out.colors = tracker.colors();
  return out;
}

}  // namespace

ModelResult model_coloring(const Graph& target, const NeighborhoodDistribution& goal, const ModelOptions& opts) {
  if (goal.color_count < 1) throw InputError("model_coloring needs a colored goal (k >= 1)");
  if (target.vertex_count() == 0) throw InputError("model_coloring on an empty graph");
  for (const auto& s : opts.starts) s.validate(target.vertex_count());

  const std::size_t n = target.vertex_count();
  const int k = goal.color_count;
  const std::size_t runs = std::max<std::size_t>(static_cast<std::size_t>(std::max(opts.restarts, 1)), opts.starts.size());
  const std::size_t per_run = std::max<std::size_t>(opts.budget / runs, 1);
  const auto marginal = root_color_weights(goal);

  // Disjoint uncolored statistics: every coloring sits at distance 1.
  if (tv_distance(forget_colors(goal), neighborhood_distribution(target, goal.radius)) >= 1.0 - 1e-15) {
    ModelResult result;
    result.coloring = opts.starts.empty() ? Coloring{std::vector<int>(n, 1), k} : opts.starts.front();
    result.coloring.color_count = k;
    result.achieved_tv = tv_distance(colored_neighborhood_distribution(target, goal.radius, result.coloring), goal);
    return result;
  }

  std::vector<std::vector<int>> starts(runs);
  for (std::size_t i = 0; i < runs; ++i) {
    if (i < opts.starts.size()) {
      starts[i] = opts.starts[i].colors;
      continue;
    }
    Rng rng(derive_seed(opts.seed, 2 * i));
    double total = std::accumulate(marginal.begin(), marginal.end(), 0.0);
    starts[i].resize(n);
    for (auto& c : starts[i]) {
      if (total <= 0) {
        c = 1 + static_cast<int>(uniform_below(rng, k));
        continue;
      }
      double x = uniform_unit(rng) * total;
      int pick = k;
      for (int col = 1; col <= k; ++col) {
        x -= marginal[col];
        if (x < 0) {
          pick = col;
          break;
        }
      }
      c = pick;
    }
  }

  std::vector<RestartOutcome> outcomes(runs);
  std::vector<char> done(runs, 0);
  // A given start that already models the goal exactly ends the search.
  auto run_one = [&](std::size_t i) {
    outcomes[i] = descend(target, goal, starts[i], per_run, derive_seed(opts.seed, 2 * i + 1));
    Coloring psi{outcomes[i].colors, k};
    outcomes[i].tv = tv_distance(colored_neighborhood_distribution(target, goal.radius, psi), goal);
    done[i] = 1;
  };
  std::size_t first_batch = 0;
  for (; first_batch < opts.starts.size(); ++first_batch) {
    run_one(first_batch);
    if (outcomes[first_batch].tv == 0.0) break;
  }
  bool exact = first_batch < opts.starts.size();
  if (!exact) {
    std::size_t rest = runs - first_batch;
    parallel_for(rest, opts.threads, [&](std::size_t j) { run_one(first_batch + j); });
  }

  ModelResult result;
  for (std::size_t i = 0; i < runs; ++i) {
    if (!done[i]) continue;
    result.evaluations += outcomes[i].evaluations;
    if (result.coloring.colors.empty() || outcomes[i].tv < result.achieved_tv) {
      result.coloring = Coloring{outcomes[i].colors, k};
      result.achieved_tv = outcomes[i].tv;
      result.best_restart = static_cast<int>(i);
    }
  }
  return result;
}

LgEstimate lg_distance_estimate(const Graph& a, const Graph& b, int r, int k,
                                const std::vector<LabeledColoring>& probes_a,
                                const std::vector<LabeledColoring>& probes_b, const ModelOptions& opts) {
  LgEstimate est;
  est.certified_lower = tv_distance(neighborhood_distribution(a, r), neighborhood_distribution(b, r));
  auto probe = [&](const Graph& from, const Graph& to, const std::vector<LabeledColoring>& list, bool first) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      Coloring phi = list[i].coloring;
      phi.color_count = k;
      auto goal = colored_neighborhood_distribution(from, r, phi);
      ModelOptions o = opts;
      o.seed = derive_seed(opts.seed, (first ? 0 : 1000003) + i);
      o.starts.clear();
      if (from == to) o.starts.push_back(phi);
      // Colorings of the same family on the other graph are natural seeds.
      for (const auto& other : (first ? probes_b : probes_a)) {
        if (other.family == list[i].family && other.coloring.size() == to.vertex_count()) {
          Coloring c = other.coloring;
          c.color_count = k;
          o.starts.push_back(std::move(c));
        }
      }
      auto res = model_coloring(to, goal, o);
      est.probes.push_back({list[i].family, first, res.achieved_tv});
      est.heuristic_lower = std::max(est.heuristic_lower, res.achieved_tv);
    }
  };
  probe(a, b, probes_a, true);
  probe(b, a, probes_b, false);
  est.heuristic_lower = std::max(est.heuristic_lower, est.certified_lower);
  est.upper = (a == b) ? 0.0 : 1.0;
  return est;
}

std::vector<LabeledColoring> standard_probes(const Graph& g, int r, int k, const ProbeFamilies& fam,
                                             std::uint64_t seed) {
  std::vector<LabeledColoring> out;
  const std::size_t n = g.vertex_count();
  for (int i = 0; i < fam.random; ++i) {
    Rng rng(derive_seed(seed, 7919 + i));
    Coloring c{std::vector<int>(n), k};
    for (auto& x : c.colors) x = 1 + static_cast<int>(uniform_below(rng, k));
    out.push_back({"random", std::move(c)});
  }
  if (fam.partition && n >= static_cast<std::size_t>(k)) {
    PartitionOptions po;
    po.seed = seed;
    po.budget = 2000;
    auto part = balanced_partition(g, k, 0.5 / k, po).partition;
    Coloring c{std::vector<int>(n), k};
    for (Vertex v = 0; v < n; ++v) c.colors[v] = part.block_of[v] + 1;
    out.push_back({"partition", std::move(c)});
  }
  if (fam.distance) {
    auto dc = power_distance_coloring(g, std::max(1, 2 * r));
    Coloring c{std::vector<int>(n), k};
    for (Vertex v = 0; v < n; ++v) c.colors[v] = (dc.colors[v] - 1) % k + 1;
    out.push_back({"distance", std::move(c)});
  }
  for (const auto& u : fam.user) out.push_back({"user", u});
  return out;
}

nlohmann::json to_json(const NeighborhoodDistribution& d) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [code, p] : d.weights) entries.push_back({{"code", base64_encode(code)}, {"p", p}});
  return {{"r", d.radius}, {"k", d.color_count}, {"entries", entries}};
}

NeighborhoodDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    NeighborhoodDistribution d;
    d.radius = j.at("r").get<int>();
    d.color_count = j.at("k").get<int>();
    for (const auto& e : j.at("entries")) {
      d.weights[base64_decode(e.at("code").get<std::string>())] += e.at("p").get<double>();
    }
    if (std::fabs(d.total_mass() - 1.0) > 1e-12) throw InputError("distribution mass differs from 1");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed distribution JSON: ") + e.what());
  }
}

}  // namespace rgcost

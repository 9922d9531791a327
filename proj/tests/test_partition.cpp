#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rgcost/partition.hpp"
#include "rgcost/schreier.hpp"

using namespace rgcost;

namespace {

// sum_i |S A_i \ A_i| straight from the definition.
std::size_t boundary_sum_oracle(const StepStructure& s, const std::vector<int>& block_of, int k) {
  std::size_t total = 0;
  for (int b = 0; b < k; ++b) {
    std::set<Vertex> image;
    for (Vertex x = 0; x < block_of.size(); ++x) {
      if (block_of[x] != b) continue;
      for (Vertex y : s.steps[x])
        if (block_of[y] != b) image.insert(y);
    }
    total += image.size();
  }
  return total;
}

}  // namespace

TEST_CASE("cycle spectrum") {
  for (std::size_t n : {10u, 100u, 1000u}) {
    auto r = spectral_gap(cycle_graph(n));
    CHECK(std::fabs(r.lambda2 - 2 * std::cos(2 * M_PI / n)) < 1e-6);
    CHECK(r.lambda1 == doctest::Approx(2.0));
    CHECK(r.regular);
    CHECK(r.gap == doctest::Approx(2.0 - r.lambda2));
  }
  // Large enough for the iterative path.
  auto big = spectral_gap(cycle_graph(4000));
  CHECK(big.method.rfind("lanczos", 0) == 0);
  CHECK(std::fabs(big.lambda2 - 2 * std::cos(2 * M_PI / 4000)) < 1e-6);
}

TEST_CASE("other closed forms") {
  for (std::size_t n : {3u, 5u, 12u}) CHECK(spectral_gap(complete_graph(n)).lambda2 == doctest::Approx(-1.0));
  auto pet = spectral_gap(petersen_graph());
  CHECK(pet.lambda2 == doctest::Approx(1.0));
  CHECK(pet.gap == doctest::Approx(2.0));
  auto torus = spectral_gap(torus_graph(6, 8));
  CHECK(torus.lambda2 == doctest::Approx(2 + 2 * std::cos(2 * M_PI / 8)));
}

TEST_CASE("disconnected graphs have no gap") {
  auto r = spectral_gap(disjoint_union(cycle_graph(5), cycle_graph(7)));
  CHECK_FALSE(r.connected);
  CHECK(r.gap == 0.0);
  auto iso = spectral_gap(Graph(3, {Edge(0, 1)}, 1));
  CHECK_FALSE(iso.connected);
  CHECK(iso.gap == 0.0);
}

TEST_CASE("partition bookkeeping") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 4 + rng() % 20;
    int k = 1 + static_cast<int>(rng() % 4);
    bool schreier = trial % 2;
    StepStructure s;
    if (schreier) {
      auto f = builtin_family("F2-random", {static_cast<long long>(n)}, trial);
      s = f.graphs[0].to_steps();
    } else {
      s = StepStructure::from_graph(oracle::random_graph(n, 2 * n, 4, rng));
    }
    std::vector<int> block_of(n);
    for (auto& b : block_of) b = static_cast<int>(rng() % k);
    auto p = make_partition(s, block_of, k);
    CHECK(p.boundary_vertex_sum == boundary_sum_oracle(s, block_of, k));
    std::size_t cut = 0;
    for (const Edge& e : s.graph.edges()) cut += block_of[e.u] != block_of[e.v];
    CHECK(p.boundary_edges.size() == cut);
    double mass = 0;
    for (double f : p.block_fractions) mass += f;
    CHECK(mass == doctest::Approx(1.0));
    const std::size_t vsum = p.boundary_vertex_sum, d = p.boundary_edges.size();
    if (s.symmetric) {
      CHECK(vsum <= 2 * d);
      CHECK(2 * d <= static_cast<std::size_t>(s.step_count) * vsum);
    } else {
      CHECK(vsum <= d);
      CHECK(d <= static_cast<std::size_t>(s.step_count) * vsum);
    }
  }
}

TEST_CASE("verdicts") {
  auto s = StepStructure::from_graph(cycle_graph(10));
  auto halves = make_partition(s, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2);
  CHECK(halves.boundary_vertex_sum == 4);
  CHECK(check_partition(halves, 0.5).status == "conditions hold");
  auto tight = check_partition(halves, 0.4);
  CHECK_FALSE(tight.boundary_ok);
  CHECK(tight.status == "conditions violated by best found");
  CHECK(check_partition(halves, 0.4, true).status == "not found within budget");
  auto lopsided = make_partition(s, {0, 0, 0, 0, 0, 0, 0, 0, 1, 1}, 2);
  CHECK_FALSE(check_partition(lopsided, 0.2).sizes_ok);
}

TEST_CASE("balanced partitions") {
  PartitionOptions opts;
  auto one = balanced_partition(torus_graph(5, 5), 1, 0.1, opts);
  CHECK(one.partition.boundary_vertex_sum == 0);
  CHECK(one.partition.blocks.size() == 1);
  CHECK_THROWS_AS(balanced_partition(cycle_graph(4), 5, 0.1, opts), InputError);

  auto arcs = balanced_partition(cycle_graph(1000), 2, 0.01, opts);
  CHECK(arcs.partition.boundary_vertex_sum <= 4);
  CHECK(arcs.verdict.sizes_ok);
  CHECK(arcs.verdict.status == "conditions hold");

  auto torus = builtin_family("Z2-torus", {32}, 0).graphs[0];
  auto quad = balanced_partition(torus.to_steps(), 4, 0.05, opts);
  CHECK(quad.partition.boundary_vertex_sum <= 128);
  CHECK(quad.verdict.sizes_ok);
  auto quad13 = balanced_partition(torus.to_steps(), 4, 0.13, opts);
  CHECK(quad13.verdict.status == "conditions hold");

  // Same seed, same answer.
  auto again = balanced_partition(cycle_graph(1000), 2, 0.01, opts);
  CHECK(again.partition.block_of == arcs.partition.block_of);
}

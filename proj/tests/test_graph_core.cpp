#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "rgcost/ball.hpp"
#include "rgcost/coloring.hpp"
#include "rgcost/graph.hpp"

using namespace rgcost;

namespace {

int root_degree(const RootedBall& b) {
  int d = 0;
  for (const auto& e : b.edges) d += (e.from == 0) + (e.to == 0);
  return d;
}

RootedBall without_origin(RootedBall b) {
  b.origin.clear();
  return b;
}

}  // namespace

TEST_CASE("text format round-trips byte for byte") {
  const std::string text = "graph 4 5 4\n0 0\n0 1\n0 1\n1 2\n2 3\n";
  Graph g = parse_graph_text(text);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 5);
  CHECK(g.degree(0) == 4);
  CHECK(format_graph(g) == text);
  CHECK(format_graph(parse_graph_text(format_graph(petersen_graph()))) == format_graph(petersen_graph()));
}

TEST_CASE("comments and unsorted edges parse") {
  Graph g = parse_graph_text("# a triangle\ngraph 3 3 2\n2 1 # back edge\n0 2\n1 0\n");
  CHECK(g == cycle_graph(3));
}

TEST_CASE("malformed graph files report the line") {
  auto line_of = [](const std::string& text) {
    try {
      parse_graph_text(text);
    } catch (const InputError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("graph 3 1 2\n0 x\n") == 2);
  CHECK(line_of("graph 3 2 2\n0 1\n\n0 7\n") == 4);
  CHECK(line_of("grph 3 1 2\n") == 1);
  CHECK(line_of("graph 2 1 1\n0 0\n") > 0);  // a loop needs degree 2
  CHECK(line_of("graph 3 2 2\n0 1\n") > 0);   // missing edge line
}

TEST_CASE("degree bound is enforced with loops counting twice") {
  CHECK_THROWS_AS(Graph(1, {Edge(0, 0)}, 1), InputError);
  CHECK_NOTHROW(Graph(1, {Edge(0, 0)}, 2));
  CHECK_THROWS_AS(Graph(2, {Edge(0, 2)}, 3), InputError);
}

TEST_CASE("ball examples") {
  SUBCASE("cycle ball is a path rooted at its center") {
    Graph c6 = cycle_graph(6);
    for (Vertex v = 0; v < 6; ++v) {
      RootedBall b = ball(c6, v, 1);
      CHECK(b.size() == 3);
      CHECK(b.edges.size() == 2);
      CHECK(root_degree(b) == 2);
      CHECK(canonical_code(b) == canonical_code(ball(path_graph(3), 1, 1)));
    }
  }
  SUBCASE("star ball at the center") {
    RootedBall b = ball(star_graph(3), 0, 1);
    CHECK(b.size() == 4);
    CHECK(root_degree(b) == 3);
  }
  SUBCASE("Petersen radius-2 ball covers 10 vertices") {
    Graph p = petersen_graph();
    auto d = oracle::all_pairs(p);
    for (Vertex v = 0; v < 10; ++v) {
      std::size_t count = 0;
      for (Vertex w = 0; w < 10; ++w) count += d[v][w] <= 2;
      CHECK(count == 10);
      CHECK(ball(p, v, 2).size() == count);
    }
  }
  CHECK_THROWS_AS(ball(cycle_graph(4), 4, 1), InputError);
}

TEST_CASE("ball vertex sets agree with all-pairs distances") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = oracle::random_graph(12, 30, 4, rng);
    auto d = oracle::all_pairs(g);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      for (int r = 0; r <= 3; ++r) {
        RootedBall b = ball(g, v, r);
        std::size_t expected = 0;
        for (Vertex w = 0; w < g.vertex_count(); ++w) expected += d[v][w] <= r;
        REQUIRE(b.size() == expected);
        for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.dist[i] == d[v][b.origin[i]]);
        std::size_t inner = 0;
        for (const Edge& e : g.edges()) inner += d[v][e.u] <= r && d[v][e.v] <= r;
        CHECK(b.edges.size() == inner);
      }
    }
  }
}

TEST_CASE("restricting an (r+1)-ball gives the r-ball") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = oracle::random_graph(15, 40, 3, rng);
    Coloring phi{std::vector<int>(g.vertex_count()), 3};
    for (auto& c : phi.colors) c = 1 + static_cast<int>(rng() % 3);
    BallDecorations deco;
    deco.colors = &phi;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      for (int r = 0; r <= 3; ++r) {
        CHECK(restrict_ball(ball(g, v, r + 1, deco), r) == ball(g, v, r, deco));
      }
    }
  }
}

TEST_CASE("canonical codes match brute-force rooted isomorphism") {
  std::mt19937_64 rng(3);
  std::vector<RootedBall> balls;
  for (int trial = 0; trial < 12; ++trial) {
    Graph g = oracle::random_graph(7, 9, 3, rng);
    Coloring phi{std::vector<int>(7), 2};
    for (auto& c : phi.colors) c = 1 + static_cast<int>(rng() % 2);
    BallDecorations deco;
    if (trial % 2) deco.colors = &phi;
    for (Vertex v = 0; v < 7; ++v) {
      RootedBall b = ball(g, v, 2, deco);
      if (b.size() <= 7) balls.push_back(b);
    }
  }
  std::size_t equal_pairs = 0;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i; j < balls.size(); ++j) {
      if (balls[i].radius != balls[j].radius || balls[i].colors.empty() != balls[j].colors.empty()) continue;
      bool iso = oracle::rooted_isomorphic(balls[i], balls[j]);
      bool same = canonical_code(balls[i]) == canonical_code(balls[j]);
      CHECK(iso == same);
      equal_pairs += same;
    }
  }
  CHECK(equal_pairs > balls.size());  // the sample contains nontrivial coincidences
}

TEST_CASE("colored codes separate exactly the non-isomorphic colorings") {
  Graph p3 = path_graph(3);
  auto code = [&](std::vector<int> colors, Vertex root, int r) {
    Coloring c{std::move(colors), 2};
    BallDecorations d;
    d.colors = &c;
    return canonical_code(ball(p3, root, r, d));
  };
  CHECK(code({1, 2, 1}, 1, 1) != code({2, 1, 1}, 1, 1));
  CHECK(code({2, 1, 1}, 1, 1) == code({1, 1, 2}, 1, 1));  // mirror image
  CHECK(code({2, 1, 1}, 0, 2) == code({1, 1, 2}, 2, 2));
  CHECK(code({2, 1, 1}, 0, 2) != code({1, 1, 2}, 0, 2));
  CHECK(code({1, 1, 1}, 1, 1) != canonical_code(ball(p3, 1, 1)));
}

TEST_CASE("labels, orientation and distinguished edges enter the code") {
  Graph c4 = cycle_graph(4);
  std::vector<EdgeLabel> forward(c4.edge_count(), EdgeLabel{0, false});
  std::vector<EdgeLabel> flipped = forward;
  flipped[0].reversed = true;
  BallDecorations df, dr;
  df.labels = forward;
  dr.labels = flipped;
  CHECK(canonical_code(ball(c4, 0, 2, df)) != canonical_code(ball(c4, 0, 2, dr)));
  std::vector<Edge> marked{c4.edge(0)};
  BallDecorations dm;
  dm.distinguished = marked;
  CHECK(canonical_code(ball(c4, 0, 2, dm)) != canonical_code(ball(c4, 0, 2)));
  CHECK(canonical_code(ball(c4, 0, 2, dm)).bytes.size() > 0);
}

TEST_CASE("codes are invariant under relabeling of the host graph") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = oracle::random_graph(20, 60, 4, rng);
    std::vector<Vertex> perm(g.vertex_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Graph h = oracle::relabeled(g, perm);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      CHECK(canonical_code(ball(g, v, 2)) == canonical_code(ball(h, perm[v], 2)));
    }
    CHECK(canonical_graph_code(g) == canonical_graph_code(h));
  }
}

TEST_CASE("canonical form decodes from its code and is a fixed point") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = oracle::random_graph(14, 30, 3, rng);
    Coloring phi{std::vector<int>(g.vertex_count()), 2};
    for (auto& c : phi.colors) c = 1 + static_cast<int>(rng() % 2);
    BallDecorations deco;
    deco.colors = &phi;
    for (Vertex v = 0; v < g.vertex_count(); v += 3) {
      RootedBall b = ball(g, v, 2, deco);
      RootedBall cf = canonical_form(b);
      CHECK(canonical_code(cf) == canonical_code(b));
      CHECK(without_origin(canonical_form(cf)) == without_origin(cf));
      CHECK(without_origin(decode_code(canonical_code(b))) == without_origin(cf));
      CHECK(cf.dist[0] == 0);
    }
  }
}

TEST_CASE("girth") {
  CHECK(girth(cycle_graph(5)) == 5);
  CHECK(girth(path_graph(6)) == kUnreached);
  CHECK(girth(star_graph(4)) == kUnreached);
  CHECK(girth(petersen_graph()) == 5);
  CHECK(oracle::girth(petersen_graph()) == 5);
  CHECK(girth(Graph(2, {Edge(0, 1), Edge(0, 1)}, 2)) == 2);
  CHECK(girth(Graph(2, {Edge(0, 1), Edge(1, 1)}, 3)) == 1);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = oracle::random_graph(9, 11, 3, rng);
    int expected = oracle::girth(g);
    CHECK(girth(g) == (expected == oracle::kInf ? kUnreached : expected));
  }
}

TEST_CASE("distance-d coloring") {
  Graph single(1, {}, 1);
  CHECK(power_distance_coloring(single, 5).color_count == 1);
  Coloring c7 = power_distance_coloring(cycle_graph(7), 3);
  CHECK(c7.color_count == 7);
  Coloring c6 = power_distance_coloring(cycle_graph(6), 1);
  Graph g6 = cycle_graph(6);
  for (const Edge& e : g6.edges()) CHECK(c6[e.u] != c6[e.v]);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = oracle::random_graph(25, 50, 3, rng);
    auto d = oracle::all_pairs(g);
    for (int dd = 1; dd <= 4; ++dd) {
      Coloring c = power_distance_coloring(g, dd);
      c.validate(g.vertex_count());
      CHECK(static_cast<std::size_t>(c.color_count) <= power_distance_color_bound(g, dd));
      for (Vertex u = 0; u < g.vertex_count(); ++u)
        for (Vertex v = u + 1; v < g.vertex_count(); ++v)
          if (d[u][v] <= dd) CHECK(c[u] != c[v]);
    }
  }
}

TEST_CASE("connected components") {
  CHECK(connected_components(petersen_graph()).size() == 1);
  auto parts = connected_components(disjoint_union(cycle_graph(3), cycle_graph(4)));
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].size() == 3);
  CHECK(parts[1].size() == 4);
  CHECK(connected_components(Graph(5, {}, 1)).size() == 5);
}

TEST_CASE("simplified drops loops and merges parallels") {
  Graph g(3, {Edge(0, 0), Edge(0, 1), Edge(0, 1), Edge(1, 2)}, 4);
  Graph s = g.simplified();
  CHECK(s.edge_count() == 2);
  CHECK(s.has_edge(0, 1));
  CHECK_FALSE(s.has_edge(0, 0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "rgcost/schreier.hpp"

using namespace rgcost;

namespace {

Presentation pres(const std::string& text) { return parse_presentation(text); }

Word w(const std::string& s, const Presentation& p) { return parse_word(s, p.generators); }

// Independent cycle rank: edges minus vertices plus components, by union-find.
std::size_t cycle_rank(const SchreierGraph& s) {
  std::vector<std::size_t> parent(s.coset_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = s.coset_count();
  for (std::size_t g = 0; g < s.generator_count(); ++g) {
    for (Vertex x = 0; x < s.coset_count(); ++x) {
      auto a = find(x), b = find(s.perm(g)[x]);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
  }
  return s.coset_count() * s.generator_count() - s.coset_count() + comps;
}

// Rank of an integer matrix modulo a large prime.
std::size_t rank_mod_p(std::vector<std::vector<long long>> m) {
  const long long P = 1000000007LL;
  auto pw = [&](long long b, long long e) {
    long long r = 1;
    b %= P;
    for (; e; e >>= 1, b = b * b % P)
      if (e & 1) r = r * b % P;
    return r;
  };
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (auto& row : m)
    for (auto& v : row) v = ((v % P) + P) % P;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    long long inv = pw(m[rank][c], P - 2);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][c] == 0) continue;
      long long f = m[i][c] * inv % P;
      for (std::size_t k = 0; k < cols; ++k) m[i][k] = ((m[i][k] - f * m[rank][k]) % P + P) % P;
    }
    ++rank;
  }
  return rank;
}

// Renumbers cosets breadth-first from 0 trying letters a, A, b, B, ...
std::vector<std::vector<Vertex>> standard_form(const SchreierGraph& s) {
  std::vector<int> id(s.coset_count(), -1);
  std::vector<Vertex> order{0};
  id[0] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int l = 0; l < static_cast<int>(2 * s.generator_count()); ++l) {
      Vertex y = s.act(order[i], l);
      if (id[y] < 0) {
        id[y] = static_cast<int>(order.size());
        order.push_back(y);
      }
    }
  std::vector<std::vector<Vertex>> out(s.generator_count(), std::vector<Vertex>(s.coset_count()));
  for (std::size_t g = 0; g < s.generator_count(); ++g)
    for (Vertex x = 0; x < s.coset_count(); ++x) out[g][id[x]] = id[s.perm(g)[x]];
  return out;
}

SchreierGraph random_action(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<char> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(static_cast<char>('a' + i));
  for (;;) {
    std::vector<std::vector<Vertex>> perms;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Vertex> p(n);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      perms.push_back(p);
    }
    try {
      return SchreierGraph(names, perms);
    } catch (const InputError&) {
    }
  }
}

void check_presentation_invariants(const SchreierGraph& s, const Presentation& p, const SchreierPresentation& sp) {
  const std::size_t S = s.generator_count();
  CHECK(sp.generator_count() == s.coset_count() * S - (s.coset_count() - 1));
  CHECK(sp.generator_count() == cycle_rank(s));
  CHECK(sp.tree.size() == s.coset_count() - 1);
  for (Vertex x = 0; x < s.coset_count(); ++x) {
    CHECK(s.apply(0, sp.transversal[x]) == x);
    if (!sp.transversal[x].empty()) {
      Word prefix(sp.transversal[x].begin(), sp.transversal[x].end() - 1);
      bool found = false;
      for (Vertex y = 0; y < s.coset_count(); ++y) found = found || sp.transversal[y] == prefix;
      CHECK(found);
    }
  }
  auto spell = [&](SchreierEdge e) {
    Word t = sp.transversal[e.coset];
    t.push_back(2 * e.gen);
    Word back = inverse_word(sp.transversal[s.perm(e.gen)[e.coset]]);
    t.insert(t.end(), back.begin(), back.end());
    return free_reduce(t);
  };
  for (const auto& e : sp.tree) CHECK(spell(e).empty());
  for (std::size_t g = 0; g < sp.generator_count(); ++g) {
    CHECK(sp.generator_word(g) == spell(sp.generators[g]));
    CHECK(s.apply(0, sp.generator_word(g)) == 0);
  }
  for (std::size_t i = 0; i < sp.relators.size(); ++i) {
    auto [r, t] = sp.relator_source[i];
    // The trace walks r from t and closes up.
    Vertex y = t;
    Word spelled;
    for (std::size_t j = 0; j < p.relators[r].size(); ++j) {
      int l = p.relators[r][j];
      Vertex z = s.act(y, l);
      SchreierEdge e = sp.edge_trace[i][j];
      CHECK(e.gen == (l >> 1));
      CHECK(e.coset == ((l & 1) ? z : y));
      int g = sp.generator_of[e.coset * S + e.gen];
      if (g >= 0) spelled.push_back(2 * g + (l & 1));
      y = z;
    }
    CHECK(y == t);
    CHECK(spelled == sp.relators[i]);
    // Expanding the lift telescopes to t r t^-1.
    Word expanded;
    for (int l : sp.relators[i]) {
      Word piece = sp.generator_word(static_cast<std::size_t>(l >> 1));
      if (l & 1) piece = inverse_word(piece);
      expanded.insert(expanded.end(), piece.begin(), piece.end());
    }
    Word conj = sp.transversal[t];
    conj.insert(conj.end(), p.relators[r].begin(), p.relators[r].end());
    Word back = inverse_word(sp.transversal[t]);
    conj.insert(conj.end(), back.begin(), back.end());
    CHECK(free_reduce(expanded) == free_reduce(conj));
  }
}

}  // namespace

TEST_CASE("presentation parsing") {
  auto c5 = pres("gens: a\nrel: aaaaa\n");
  CHECK(c5.generators == std::vector<char>{'a'});
  CHECK(c5.relators == std::vector<Word>{Word(5, 0)});
  CHECK(c5.total_relator_length() == 5);
  auto z2 = pres("# free abelian\ngens: a b\nrel: abAB\n");
  CHECK(format_presentation(z2) == "gens: a b\nrel: abAB\n");
  CHECK(pres("gens: a b").relators.empty());

  auto reduced = pres("gens: a b\nrel: BaaBAb\n");
  CHECK(format_word(reduced.relators[0], reduced.generators) == "aB");
  CHECK(reduced.warnings.size() == 1);
  CHECK(pres("gens: a\nrel: aA\n").relators.empty());

  try {
    pres("gens: a b\nrel: abc\n");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(pres("rel: ab\n"), InputError);
  CHECK_THROWS_AS(pres("gens: a a\n"), InputError);
  CHECK_THROWS_AS(pres("gens: a\nfoo: a\n"), InputError);

  auto sub = parse_subgroup("sub: aaa\n\nsub: bAab\n", z2.generators);
  CHECK(sub.size() == 2);
  CHECK(format_word(sub[1], z2.generators) == "bb");
}

TEST_CASE("word reductions") {
  Word x{0, 2, 3, 1, 4};
  CHECK(free_reduce(x) == Word{4});
  CHECK(cyclic_reduce(Word{1, 2, 4, 0}) == Word{2, 4});
  CHECK(inverse_word(Word{0, 3}) == Word{2, 1});
}

TEST_CASE("coset enumeration examples") {
  auto c5 = pres("gens: a\nrel: aaaaa\n");
  auto s = todd_coxeter(c5, {});
  CHECK(s.coset_count() == 5);
  Vertex x = 0;
  for (int i = 0; i < 5; ++i) {
    x = s.perm(0)[x];
    CHECK((x == 0) == (i == 4));
  }

  auto s3 = pres("gens: a b\nrel: aa\nrel: bbb\nrel: abab\n");
  CHECK(todd_coxeter(s3, {w("b", s3)}).coset_count() == 2);
  CHECK(todd_coxeter(s3, {}).coset_count() == 6);
  CHECK(todd_coxeter(s3, {w("a", s3)}).coset_count() == 3);

  auto z2 = pres("gens: a b\nrel: abAB\n");
  auto t = todd_coxeter(z2, {w("aaa", z2), w("bbb", z2)});
  CHECK(t.coset_count() == 9);
  CHECK(check_relators(t, z2).ok);
  CHECK(standard_form(t) == standard_form(builtin_family("Z2-torus", {3}, 0).graphs[0]));
}

TEST_CASE("coset enumeration properties") {
  std::vector<std::string> groups{"gens: a b\nrel: aa\nrel: bbb\nrel: abab\n",
                                  "gens: a b\nrel: aaaa\nrel: bb\nrel: abab\n",
                                  "gens: a b\nrel: abAB\nrel: aaaaaa\nrel: bbbb\n",
                                  "gens: a b c\nrel: aa\nrel: bb\nrel: cc\nrel: ababab\nrel: bcbcbc\nrel: acac\n"};
  std::vector<std::size_t> orders{6, 8, 24, 24};
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto p = pres(groups[i]);
    auto full = todd_coxeter(p, {});
    CHECK(full.coset_count() == orders[i]);
    CHECK(check_relators(full, p).ok);
    auto q = p;
    std::reverse(q.relators.begin(), q.relators.end());
    CHECK(todd_coxeter(q, {}).coset_count() == orders[i]);
    // Index of <a> times its order is the group order.
    auto sub = todd_coxeter(p, {Word{0}});
    std::size_t order_a = 1;
    for (Vertex x = full.perm(0)[0]; x != 0; x = full.perm(0)[x]) ++order_a;
    CHECK(sub.coset_count() * order_a == orders[i]);
    CHECK(sub.apply(0, Word{0}) == 0);
  }
}

TEST_CASE("coset enumeration matches given actions") {
  std::mt19937_64 rng(17);
  auto f2 = pres("gens: a b\n");
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_action(3 + rng() % 20, 2, rng);
    auto sp = reidemeister_schreier(s, f2);
    std::vector<Word> basis;
    for (std::size_t g = 0; g < sp.generator_count(); ++g) basis.push_back(sp.generator_word(g));
    auto t = todd_coxeter(f2, basis);
    CHECK(standard_form(t) == standard_form(s));
    CHECK(verify_generators(f2, s, basis).pass);
  }
}

TEST_CASE("coset cap") {
  CHECK_THROWS_AS(todd_coxeter(pres("gens: a b\n"), {}, 1000), AnalysisError);
  CHECK_THROWS_AS(todd_coxeter(pres("gens: a b\nrel: abAB\n"), {Word{0}}, 500), AnalysisError);
  // The cap is on live cosets; a finite enumeration that fits succeeds.
  CHECK(todd_coxeter(pres("gens: a b\nrel: aa\nrel: bbb\nrel: abab\n"), {}, 6).coset_count() == 6);
}

TEST_CASE("permutation input") {
  auto c7 = schreier_from_permutations({{1, 2, 3, 4, 5, 6, 0}}, {'a'});
  CHECK(c7.coset_count() == 7);
  CHECK(c7.to_graph().edge_count() == 7);
  CHECK(c7.to_graph().simplified() == c7.to_graph());
  CHECK_THROWS_AS(schreier_from_permutations({{0, 1}}, {'a'}), InputError);
  CHECK_THROWS_AS(schreier_from_permutations({{0, 0}}, {'a'}), InputError);
  CHECK_THROWS_AS(schreier_from_permutations({{1, 0}, {0, 1, 2}}, {'a', 'b'}), InputError);
  try {
    schreier_from_permutations({{0, 1}, {0, 1}}, {'a', 'b'});
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("{0}") != std::string::npos);
  }

  std::mt19937_64 rng(2);
  auto s = random_action(40, 2, rng);
  auto g = s.to_graph();
  CHECK(g.edge_count() == 80);
  for (Vertex v = 0; v < 40; ++v) CHECK(g.degree(v) == 4);
  CHECK(SchreierGraph::from_json(s.to_json()) == s);
  CHECK_THROWS_AS(SchreierGraph::from_json(nlohmann::json{{"generators", {"a"}}}), InputError);
}

TEST_CASE("relator checks") {
  auto z2 = pres("gens: a b\nrel: abAB\n");
  auto f2 = pres("gens: a b\n");
  auto torus = builtin_family("Z2-torus", {4}, 0).graphs[0];
  CHECK(check_relators(torus, z2).ok);
  CHECK(check_relators(torus, f2).ok);
  std::mt19937_64 rng(8);
  auto s = random_action(30, 2, rng);
  auto v = check_relators(s, z2);
  CHECK_FALSE(v.ok);
  CHECK(s.apply(v.coset, z2.relators[v.relator]) != v.coset);
  for (Vertex x = 0; x < v.coset; ++x) CHECK(s.apply(x, z2.relators[0]) == x);
  CHECK_THROWS_AS(check_relators(torus, pres("gens: x y\n")), InputError);
  CHECK_THROWS_AS(reidemeister_schreier(s, z2), InputError);
}

TEST_CASE("subgroup presentations") {
  auto f2 = pres("gens: a b\n");
  auto idx3 = schreier_from_permutations({{1, 2, 0}, {0, 1, 2}}, {'a', 'b'});
  auto sp = reidemeister_schreier(idx3, f2);
  CHECK(sp.generator_count() == 4);
  check_presentation_invariants(idx3, f2, sp);

  auto c5 = pres("gens: a\nrel: aaaaa\n");
  auto s5 = todd_coxeter(c5, {});
  auto sp5 = reidemeister_schreier(s5, c5);
  CHECK(sp5.generator_count() == 1);
  REQUIRE(sp5.relators.size() == 5);
  for (const auto& r : sp5.relators) CHECK(free_reduce(r) == Word{0});
  check_presentation_invariants(s5, c5, sp5);

  auto z2 = pres("gens: a b\nrel: abAB\n");
  auto t3 = builtin_family("Z2-torus", {3}, 0).graphs[0];
  auto sp9 = reidemeister_schreier(t3, z2);
  CHECK(sp9.relators.size() == 9);
  for (const auto& r : sp9.relators) CHECK(r.size() <= 4);
  check_presentation_invariants(t3, z2, sp9);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    auto s = random_action(2 + rng() % 15, 1 + rng() % 3, rng);
    Presentation free;
    free.generators = s.generators();
    auto spr = reidemeister_schreier(s, free);
    check_presentation_invariants(s, free, spr);
    // Free groups: rank n(|S| - 1) + 1.
    CHECK(spr.generator_count() == s.coset_count() * (s.generator_count() - 1) + 1);
  }
  for (const char* text : {"gens: a b\nrel: aa\nrel: bbb\nrel: abab\n", "gens: a b\nrel: abAB\nrel: aaaaaa\nrel: bbbb\n"}) {
    auto p = pres(text);
    for (const auto& sub : {std::vector<Word>{}, std::vector<Word>{Word{0}}, std::vector<Word>{Word{2}}}) {
      auto s = todd_coxeter(p, sub);
      check_presentation_invariants(s, p, reidemeister_schreier(s, p));
    }
  }
  CHECK(sp9.to_json(z2.generators)["generators"].size() == 10);
}

TEST_CASE("simplification and abelian rank") {
  CHECK(tietze_simplify(4, {}).d_upper == 4);
  CHECK(tietze_simplify(2, {Word{0}}).d_upper == 1);
  CHECK(abelianized_rank(4, {}) == 4);
  CHECK(abelianized_rank(1, {Word{0, 0}}) == 0);
  CHECK(abelianized_rank(pres("gens: a b\nrel: abAB\n")) == 2);

  auto z2 = pres("gens: a b\nrel: abAB\n");
  for (long long m = 1; m <= 7; ++m) {
    auto s = builtin_family("Z2-torus", {m}, 0).graphs[0];
    auto sp = reidemeister_schreier(s, z2);
    CHECK(abelianized_rank(sp) == 2);
    CHECK(tietze_simplify(sp).d_upper >= 2);
  }

  // Rational rank against a modular oracle on random relator sets.
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t gens = 1 + rng() % 6, rels = rng() % 7;
    std::vector<Word> rs;
    std::vector<std::vector<long long>> mat;
    for (std::size_t r = 0; r < rels; ++r) {
      Word x;
      std::vector<long long> row(gens, 0);
      std::size_t len = 1 + rng() % 8;
      for (std::size_t i = 0; i < len; ++i) {
        int l = static_cast<int>(rng() % (2 * gens));
        x.push_back(l);
        row[l >> 1] += (l & 1) ? -1 : 1;
      }
      rs.push_back(x);
      mat.push_back(row);
    }
    std::size_t ab = abelianized_rank(gens, rs);
    CHECK(ab == gens - rank_mod_p(mat));
    auto tz = tietze_simplify(gens, rs);
    CHECK(ab <= tz.d_upper);
    CHECK(abelianized_rank(tz.generator_count, tz.relators) == ab);
  }
}

TEST_CASE("rank quotients") {
  CHECK(rank_quotient(4, 3) == Rational::make(1, 1));
  CHECK(rank_quotient(1, 17) == Rational::make(0, 1));
  CHECK(rank_quotient(2, 4) == Rational::make(1, 4));
  CHECK(rank_quotient(2, 4).value() == 0.25);
  CHECK_THROWS_AS(rank_quotient(2, 0), InputError);
}

TEST_CASE("generator verification") {
  auto z2 = pres("gens: a b\nrel: abAB\n");
  for (long long m = 2; m <= 6; ++m) {
    auto s = builtin_family("Z2-torus", {m}, 0).graphs[0];
    CHECK(verify_generators(z2, s, {Word(m, 0), Word(m, 2)}).pass);
  }
  auto s2 = builtin_family("Z2-torus", {2}, 0).graphs[0];
  auto bad = verify_generators(z2, s2, {Word(4, 0), Word(2, 2)});
  CHECK_FALSE(bad.pass);
  CHECK(bad.found_index == 8);
  CHECK_THROWS_AS(verify_generators(z2, s2, {Word{0}}), InputError);

  auto f2 = pres("gens: a b\n");
  auto idx3 = schreier_from_permutations({{1, 2, 0}, {0, 1, 2}}, {'a', 'b'});
  auto sp = reidemeister_schreier(idx3, f2);
  std::vector<Word> basis;
  for (std::size_t g = 0; g < sp.generator_count(); ++g) basis.push_back(sp.generator_word(g));
  CHECK(verify_generators(f2, idx3, basis).pass);
}

TEST_CASE("rank gradient tables") {
  auto z = builtin_family("Z2-torus", {2, 3, 4, 5, 6}, 0);
  auto rows = rank_gradient_table(z.presentation, z.graphs, z.candidates);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    long long m = static_cast<long long>(i) + 2;
    CHECK(rows[i].index == static_cast<std::size_t>(m * m));
    CHECK(rows[i].d_lower == 2);
    CHECK(rows[i].d_upper == 2);
    CHECK(rows[i].r_lower == Rational::make(1, m * m));
    CHECK(rows[i].r_upper == Rational::make(1, m * m));
  }
  auto f = builtin_family("F2-random", {5, 10, 20, 40}, 3);
  for (const auto& row : rank_gradient_table(f.presentation, f.graphs)) {
    CHECK(row.method == "free");
    CHECK(row.d_lower == row.index + 1);
    CHECK(row.r_lower == Rational::make(1, 1));
    CHECK(row.r_upper == Rational::make(1, 1));
  }
  auto c = builtin_family("cyclic", {12, 1, 2, 3, 4, 6, 12}, 0);
  for (const auto& row : rank_gradient_table(c.presentation, c.graphs)) {
    // H = <a^d> is cyclic of order 12/d: trivial only at d = 12.
    CHECK(row.d_upper == (row.index == 12 ? 0u : 1u));
    CHECK(row.d_lower == 0);
  }
}

TEST_CASE("fixed points and ball matching") {
  auto torus = builtin_family("Z2-torus", {5, 12}, 0);
  auto rep = farber_statistic(torus.graphs[0], {Word{}, Word{0}, Word{0, 2, 1, 3}});
  CHECK(rep.words[0].fixed_fraction == 1.0);
  CHECK(rep.words[1].fixed_fraction == 0.0);
  CHECK(rep.words[2].fixed_fraction == 1.0);
  CHECK(*farber_statistic(torus.graphs[1], {}, CayleyKind::free_abelian, 2).ball_match_fraction == 1.0);
  CHECK(*farber_statistic(torus.graphs[0], {}, CayleyKind::free_abelian, 2).ball_match_fraction == 0.0);
  CHECK(*farber_statistic(torus.graphs[0], {}, CayleyKind::free_abelian, 1).ball_match_fraction == 1.0);

  auto cycles = builtin_family("Z-cycle", {5, 6}, 0);
  CHECK(*farber_statistic(cycles.graphs[0], {}, CayleyKind::free, 2).ball_match_fraction == 0.0);
  CHECK(*farber_statistic(cycles.graphs[1], {}, CayleyKind::free, 2).ball_match_fraction == 1.0);

  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto f = builtin_family("F2-random", {100}, seed);
    total += farber_statistic(f.graphs[0], {Word{0, 2}}).words[0].fixed_fraction;
  }
  CHECK(total / 200 == doctest::Approx(0.01).epsilon(0.3));
  CHECK_THROWS_AS(farber_statistic(torus.graphs[0], {}, CayleyKind::none, 2), InputError);
}

TEST_CASE("families") {
  auto f = builtin_family("F2-random", {50, 100}, 7);
  CHECK(f.graphs.size() == 2);
  CHECK(f.graphs[1].coset_count() == 100);
  CHECK(builtin_family("F2-random", {50, 100}, 7).graphs == f.graphs);
  auto k3 = builtin_family("Fk-random", {3, 20}, 1);
  CHECK(k3.graphs[0].generator_count() == 3);
  auto cyc = builtin_family("Z-cycle", {4, 9}, 0);
  CHECK(cyc.graphs[1].coset_count() == 9);
  CHECK_THROWS_AS(builtin_family("nope", {}, 0), InputError);
  CHECK_THROWS_AS(builtin_family("cyclic", {12, 5}, 0), InputError);
  auto steps = builtin_family("Z2-torus", {4}, 0).graphs[0].to_steps();
  CHECK(steps.step_count == 2);
  CHECK_FALSE(steps.symmetric);
}

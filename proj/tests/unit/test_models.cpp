#include <random>

#include "doctest.h"
#include "musep/formula.hpp"
#include "musep/model.hpp"
#include "musep/parity.hpp"
#include "musep/tree_pool.hpp"

using namespace musep;

namespace {

KripkeModel chain(std::size_t n, bool loop_at_end) {
  KripkeModel m;
  m.actions = {"a"};
  m.props = {"p"};
  for (std::size_t i = 0; i < n; ++i) m.add_point(0);
  for (std::size_t i = 0; i + 1 < n; ++i) m.add_edge(static_cast<Point>(i), 0, static_cast<Point>(i + 1));
  if (loop_at_end) m.add_edge(static_cast<Point>(n - 1), 0, static_cast<Point>(n - 1));
  return m;
}

bool holds(const KripkeModel& m, const char* text) {
  Signature sig(m.actions, m.props);
  return check_model(m, normalize(parse_formula(text, sig)));
}

}  // namespace

TEST_CASE("fixpoints on finite chains and loops") {
  auto fin = chain(3, false);
  auto lasso = chain(3, true);
  CHECK_FALSE(holds(fin, "nu x. <a> x"));
  CHECK(holds(lasso, "nu x. <a> x"));
  CHECK(holds(fin, "mu x. [a] x"));
  CHECK_FALSE(holds(lasso, "mu x. [a] x"));
  CHECK(holds(fin, "<a><a>[a]false"));
  CHECK_FALSE(holds(fin, "<a><a><a>true"));
}

TEST_CASE("propositions and reachability") {
  auto m = chain(4, false);
  m.valuation[3] = 1;
  CHECK(holds(m, "mu x. p | <a> x"));
  CHECK_FALSE(holds(m, "p"));
  auto pts = satisfying_points(m, normalize(parse_formula("mu x. p | <a> x", Signature({"a"}, {"p"}))));
  for (Point v = 0; v < 4; ++v) CHECK(pts.test(v));
  CHECK(m.holds(3, "p"));
  CHECK(m.point_props(3) == std::vector<std::string>{"p"});
}

TEST_CASE("model checking requires normalized input") {
  auto m = chain(2, false);
  CHECK_THROWS_AS(check_model(m, Formula::nabla("a", {Formula::top()})), FormulaError);
}

TEST_CASE("bounded bisimulation") {
  // chains of length 3 and 4 agree up to depth 2 and differ at depth 3
  auto a = chain(3, false), b = chain(4, false);
  CHECK(n_bisimilar(a, b, 0));
  CHECK(n_bisimilar(a, b, 2));
  CHECK_FALSE(n_bisimilar(a, b, 3));
  // a loop is bisimilar to every finite chain up to the chain's length minus one
  auto l = chain(1, true);
  CHECK(n_bisimilar(l, b, 3));
  CHECK_FALSE(n_bisimilar(l, b, 4));
  CHECK(n_bisimilar(l, chain(2, true), kInfiniteDepth));

  // duplicated children do not matter
  KripkeModel t;
  t.actions = {"a"};
  t.props = {"p"};
  Point r = t.add_point(0), x = t.add_point(1), y = t.add_point(1);
  t.add_edge(r, 0, x);
  t.add_edge(r, 0, y);
  KripkeModel s;
  s.actions = {"a"};
  s.props = {"p"};
  Point r2 = s.add_point(0), z = s.add_point(1);
  s.add_edge(r2, 0, z);
  CHECK(n_bisimilar(t, s, kInfiniteDepth));
}

TEST_CASE("bisimulation compares props by name") {
  KripkeModel a;
  a.actions = {"a"};
  a.props = {"p", "q"};
  a.add_point(0b10);
  KripkeModel b;
  b.actions = {"a"};
  b.props = {"q"};
  b.add_point(0b1);
  CHECK(n_bisimilar(a, b, 0));
}

TEST_CASE("unravelling and union") {
  auto l = chain(1, true);
  auto u = unravel(l, 3);
  CHECK(u.is_tree());
  CHECK(u.size() == 4);
  CHECK(n_bisimilar(u, l, 3));
  auto d = disjoint_union(chain(2, false), chain(3, false));
  CHECK(d.size() == 5);
  CHECK_FALSE(chain(2, true).is_acyclic());
}

TEST_CASE("json round trip and word shorthand") {
  auto m = chain(3, true);
  m.valuation[1] = 1;
  auto back = model_from_json(model_to_json(m));
  CHECK(n_bisimilar(m, back, kInfiniteDepth));
  auto w = model_from_json(R"({"props":["p"],"prefix":[["p"],[]],"loop":[["p"]]})");
  CHECK(w.size() == 3);
  CHECK(holds(w, "p & <a>(!p & <a>(p & <a> p))"));
  CHECK_THROWS(model_from_json("{\"points\": 3"));
}

TEST_CASE("word models") {
  WordModel w;
  w.props = {"p"};
  w.prefix = {1, 0};
  auto k = w.to_kripke();
  CHECK(k.size() == 2);
  CHECK(holds(k, "p & <a>(!p & [a]false)"));
  w.loop = {1};
  CHECK(holds(w.to_kripke(), "nu x. <a> x"));
}

TEST_CASE("tree pool enumerates trees up to isomorphism") {
  TreePoolConfig c;
  c.actions = {"a"};
  c.props = {"p"};
  c.depth = 0;
  CHECK(TreePool::count(c) == 2);
  c.depth = 1;
  c.branching = 1;
  // leaves (2) plus a root of either color over one of 2 leaves
  CHECK(TreePool::count(c) == 6);
  TreePool pool(c);
  CHECK(pool.size() == 6);
  // no two entries are bisimilar
  auto cls = bisimulation_classes(pool.graph(), kInfiniteDepth);
  std::sort(cls.begin(), cls.end());
  CHECK(std::unique(cls.begin(), cls.end()) == cls.end());
  for (std::size_t i = 0; i < pool.size(); ++i) CHECK(pool.entry(i).is_tree());

  c.decorated = true;
  TreePool dec(c);
  bool loops = false;
  for (std::size_t i = 0; i < dec.size(); ++i) loops = loops || dec.has_loops(i);
  CHECK(loops);
}

TEST_CASE("parity solver matches exhaustive search on random games") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    ParityGame g;
    const std::uint32_t n = 2 + rng() % 6;
    for (std::uint32_t v = 0; v < n; ++v) g.add_vertex(rng() % 2, rng() % 4);
    for (std::uint32_t v = 0; v < n; ++v) {
      const auto deg = 1 + rng() % 2;
      for (std::uint32_t e = 0; e < deg; ++e) g.add_edge(v, static_cast<std::uint32_t>(rng() % n));
    }
    auto fast = solve_parity_game(g);
    auto slow = solve_parity_game_brute_force(g);
    REQUIRE(fast.winner == slow);
    // strategies stay in the winning region
    for (std::uint32_t v = 0; v < n; ++v)
      if (g.owner[v] == fast.winner[v] && fast.strategy[v] >= 0)
        CHECK(fast.winner[static_cast<std::size_t>(fast.strategy[v])] == fast.winner[v]);
  }
}

TEST_CASE("parity game dot output") {
  ParityGame g;
  g.add_vertex(0, 2);
  g.add_vertex(1, 1);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  auto dot = to_dot(g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("0:2") != std::string::npos);
}

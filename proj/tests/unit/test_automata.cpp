#include "doctest.h"
#include "musep/automata.hpp"
#include "musep/tree_pool.hpp"

using namespace musep;

namespace {

TreePool small_pool(std::vector<std::string> actions, std::vector<std::string> props, std::uint32_t branching = 2) {
  TreePoolConfig c;
  c.actions = std::move(actions);
  c.props = std::move(props);
  c.depth = 2;
  c.branching = branching;
  return TreePool(c);
}

// Reference: all relations, filtered for totality and minimality.
std::size_t count_minimal_covers(std::uint32_t m, std::uint32_t k) {
  const std::uint32_t edges = m * k;
  auto total = [&](std::uint64_t r) {
    for (std::uint32_t i = 0; i < m; ++i) {
      bool any = false;
      for (std::uint32_t j = 0; j < k; ++j) any = any || ((r >> (i * k + j)) & 1);
      if (!any) return false;
    }
    for (std::uint32_t j = 0; j < k; ++j) {
      bool any = false;
      for (std::uint32_t i = 0; i < m; ++i) any = any || ((r >> (i * k + j)) & 1);
      if (!any) return false;
    }
    return true;
  };
  std::size_t n = 0;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << edges); ++r) {
    if (!total(r)) continue;
    bool minimal = true;
    for (std::uint32_t e = 0; e < edges && minimal; ++e)
      if (((r >> e) & 1) && total(r & ~(std::uint64_t{1} << e))) minimal = false;
    n += minimal;
  }
  return n;
}

}  // namespace

TEST_CASE("compiled automata accept exactly the models of the formula") {
  Signature sig({"a", "b"}, {"p"});
  auto pool = small_pool(sig.actions(), sig.props());
  for (const char* t : {"p", "<a>p & [b]!p", "mu x. p | <a>x | <b>x", "nu x. !p & [a]x", "<a>true & <b>true",
                        "[a][b]false", "mu x. [a]x & [b]x"}) {
    auto f = parse_formula(t, sig);
    auto a = compile(f, sig.actions(), sig.props());
    REQUIRE_NOTHROW(a.validate());
    auto nf = normalize(f);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      auto m = pool.entry(i);
      bad += accepts(a, m) != check_model(m, nf);
    }
    CHECK_MESSAGE(bad == 0, t);
  }
}

TEST_CASE("membership on cyclic models") {
  Signature sig({"a"}, {"p"});
  auto inf = compile(parse_formula("nu x. <a> x", sig), sig.actions(), sig.props());
  auto fin = compile(parse_formula("mu x. [a] x", sig), sig.actions(), sig.props());
  KripkeModel loop;
  loop.actions = {"a"};
  loop.props = {"p"};
  loop.add_point(0);
  loop.add_edge(0, 0, 0);
  CHECK(accepts(inf, loop));
  CHECK_FALSE(accepts(fin, loop));
}

TEST_CASE("alternation is rejected at compile time") {
  Signature sig({"a"}, {});
  CHECK_THROWS_AS(compile(parse_formula("mu x. nu y. <a>x & [a]y", sig), sig.actions(), sig.props()), FormulaError);
}

TEST_CASE("apta priorities") {
  Signature sig({"a"}, {"p"});
  auto apta = Apta::from_formula(normalize(parse_formula("mu x. p | <a>x", sig)), sig.actions(), sig.props());
  bool has_mu = false;
  for (std::uint32_t q = 0; q < apta.size(); ++q) has_mu = has_mu || apta.priority(q) == 1;
  CHECK(has_mu);
  auto nu = Apta::from_formula(normalize(parse_formula("nu x. p & <a>x", sig)), sig.actions(), sig.props());
  for (std::uint32_t q = 0; q < nu.size(); ++q) CHECK(nu.priority(q) == 2);
}

TEST_CASE("emptiness and witnesses") {
  Signature sig({"a"}, {"p"});
  for (const char* t : {"nu x. <a>x", "mu x. p | <a>x", "<a>(p & [a]!p & <a>true)", "nu x. <a>p & [a]x"}) {
    auto f = parse_formula(t, sig);
    auto a = compile(f, sig.actions(), sig.props());
    auto e = analyze_emptiness(a);
    REQUIRE_FALSE(e.empty(a));
    auto w = emptiness_witness(a, e, a.initial);
    CHECK_MESSAGE(check_model(w, normalize(f)), t);
  }
  for (const char* t : {"p & !p", "<a>p & [a]!p", "mu x. <a>x", "nu x. <a>x & mu y. [a]y"}) {
    auto a = compile(parse_formula(t, sig), sig.actions(), sig.props());
    CHECK_MESSAGE(analyze_emptiness(a).empty(a), t);
  }
}

TEST_CASE("emptiness game shape") {
  Signature sig({"a"}, {"p"});
  auto a = compile(parse_formula("<a>p", sig), sig.actions(), sig.props());
  auto g = emptiness_game(a);
  CHECK(g.size() >= a.size() + 2);
  auto sol = solve_parity_game(g);
  CHECK(sol.winner[a.initial] == 0);
}

TEST_CASE("minimal covers") {
  CHECK(minimal_covers(0, 0).size() == 1);
  CHECK(minimal_covers(0, 2).empty());
  CHECK(minimal_covers(2, 0).empty());
  for (std::uint32_t m = 1; m <= 3; ++m)
    for (std::uint32_t k = 1; k <= 3; ++k) CHECK(minimal_covers(m, k).size() == count_minimal_covers(m, k));
}

TEST_CASE("intersection, lifting, projection") {
  Signature sig({"a", "b"}, {"p", "q"});
  auto pool = small_pool(sig.actions(), sig.props(), 1);
  auto f = parse_formula("<a>p", sig), g = parse_formula("mu x. q | <b>x", sig);
  auto a = compile(f, sig.actions(), sig.props()), b = compile(g, sig.actions(), sig.props());
  auto prod = intersect(a, b);
  auto nf = normalize(f), ng = normalize(g);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto m = pool.entry(i);
    CHECK(accepts(prod.automaton, m, prod.roots[0]) == (check_model(m, nf) && check_model(m, ng)));
  }

  // compiled over {a}/{p}, then lifted: b-children and q are free
  Signature small({"a"}, {"p"});
  auto lifted = lift(compile(parse_formula("<a>p", small), small.actions(), small.props()), sig.actions(), sig.props());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto m = pool.entry(i);
    CHECK(accepts(lifted, m) == check_model(m, nf));
  }

  // exists q. (p & q & <a>!q)  is  p & <a>true
  auto pq = compile(parse_formula("p & q & <a>!q", sig), sig.actions(), sig.props());
  auto proj = project(pq, {"p"});
  auto want = normalize(parse_formula("p & <a>true", Signature({"a", "b"}, {"p"})));
  TreePoolConfig c;
  c.actions = sig.actions();
  c.props = {"p"};
  c.depth = 2;
  TreePool ppool(c);
  for (std::size_t i = 0; i < ppool.size(); ++i) {
    auto m = ppool.entry(i);
    CHECK(accepts(proj, m) == check_model(m, want));
  }
}

TEST_CASE("word restriction") {
  Signature sig({"a"}, {"p"});
  auto a = restrict_to_words(compile(parse_formula("<a>p & <a>!p", sig), sig.actions(), sig.props()));
  CHECK(analyze_emptiness(a).empty(a));
  auto w = compile(parse_formula("<a>p & <a>true", sig), sig.actions(), sig.props(), true);
  CHECK_FALSE(analyze_emptiness(w).empty(w));
}

TEST_CASE("text and dot dumps") {
  Signature sig({"a"}, {"p"});
  auto a = compile(parse_formula("mu x. p | <a>x", sig), sig.actions(), sig.props());
  CHECK_FALSE(dump_text(a).empty());
  CHECK(to_dot(a).rfind("digraph", 0) == 0);
}

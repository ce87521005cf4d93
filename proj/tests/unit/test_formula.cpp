#include <string>

#include "doctest.h"
#include "musep/dag.hpp"
#include "musep/formula.hpp"
#include "musep/model.hpp"
#include "musep/tree_pool.hpp"

using namespace musep;

namespace {

TreePool trees(std::vector<std::string> actions, std::vector<std::string> props, std::uint32_t depth) {
  TreePoolConfig c;
  c.actions = std::move(actions);
  c.props = std::move(props);
  c.depth = depth;
  c.branching = 2;
  return TreePool(c);
}

// Same truth value at every point of the pool.
bool agree_on(const TreePool& pool, const Formula& a, const Formula& b) {
  auto x = satisfying_points(pool.graph(), a);
  auto y = satisfying_points(pool.graph(), b);
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (x.test(i) != y.test(i)) return false;
  return true;
}

}  // namespace

TEST_CASE("parser maps the grammar directly") {
  Signature sig({"a"}, {"p"});
  auto f = parse_formula("mu x. (p | <a> x)", sig);
  REQUIRE(f.kind() == Kind::Mu);
  CHECK(f.name() == "x");
  const auto& body = f.child();
  REQUIRE(body.kind() == Kind::Or);
  CHECK(body.child(0).kind() == Kind::Prop);
  CHECK(body.child(1).kind() == Kind::Diamond);
  CHECK(body.child(1).name() == "a");
  CHECK(body.child(1).child().kind() == Kind::Var);

  auto inf = parse_formula("nu x. <a> x", sig);
  CHECK(inf.kind() == Kind::Nu);
  CHECK(inf.child().kind() == Kind::Diamond);
}

TEST_CASE("parser rejects undeclared names and unbound variables") {
  Signature sig({"a", "b"}, {"p"});
  CHECK_THROWS_WITH_AS(parse_formula("<b> q", sig), doctest::Contains("undeclared proposition"), ParseError);
  CHECK_THROWS_WITH_AS(parse_formula("<c> p", sig), doctest::Contains("undeclared action"), ParseError);
  CHECK_THROWS_AS(parse_formula("p &", sig), ParseError);
  CHECK_THROWS_WITH_AS(parse_formula("<a?> p", sig), doctest::Contains("tests"), ParseError);
}

TEST_CASE("precedence: ! binds tighter than &, & tighter than |, binders extend right") {
  Signature sig({"a"}, {"p", "q"});
  auto f = parse_formula("!p & q | p", sig);
  REQUIRE(f.kind() == Kind::Or);
  CHECK(f.child(0).kind() == Kind::And);
  CHECK(f.child(0).child(0).kind() == Kind::Not);
  auto g = parse_formula("mu x. p | <a> x", sig);
  CHECK(g.kind() == Kind::Mu);
}

TEST_CASE("text output round-trips through the parser") {
  Signature sig({"a", "b"}, {"p", "q"});
  for (const char* t : {"mu x. (p | <a> x)", "nu y. [a] y & <b> !q", "true", "false", "[a](p | q) & !(<b>p)",
                        "<a;b*>p", "[(a+b)*]q"}) {
    auto f = parse_formula(t, sig);
    CHECK(parse_formula(f.to_string(), sig) == f);
  }
  Signature one({"a"}, {"p", "q"});
  auto n = parse_formula("nabla{p, <a>q}", one);
  CHECK(n.kind() == Kind::Nabla);
  CHECK(parse_formula(n.to_string(), one) == n);
  CHECK_THROWS_AS(parse_formula("nabla{p}", sig), ParseError);
}

TEST_CASE("nnf dualizes fixpoints and drops double negation") {
  Signature sig({"a"}, {"p"});
  auto f = to_nnf(parse_formula("!(mu x. p | <a> x)", sig));
  REQUIRE(f.kind() == Kind::Nu);
  REQUIRE(f.child().kind() == Kind::And);
  CHECK(f.child().child(0).kind() == Kind::NegProp);
  CHECK(f.child().child(1).kind() == Kind::Box);
  CHECK(f.child().child(1).child().kind() == Kind::Var);
  CHECK(f.child().child(1).child().name() == f.name());

  CHECK(to_nnf(parse_formula("!!p", sig)) == Formula::prop("p"));
}

TEST_CASE("nnf preserves truth on enumerated trees") {
  Signature sig({"a", "b"}, {"p"});
  auto pool = trees({"a", "b"}, {"p"}, 2);
  for (const char* t : {"!(mu x. p | <a> x)", "!(<a>p & [b]!p)", "!(nu x. p & [a] x) | <b>true",
                        "!!(mu x. [a]x & [b]x)"}) {
    auto raw = parse_formula(t, sig);
    CHECK_MESSAGE(agree_on(pool, raw, to_nnf(raw)), t);
  }
}

TEST_CASE("nabla and color sugar") {
  Signature sig({"a"}, {"p", "q"});
  auto psi = Formula::prop("p");
  auto one = expand_sugar(Formula::nabla("a", {psi}));
  CHECK(one == Formula::conj(Formula::diamond("a", psi), Formula::box("a", psi)));

  auto none = expand_sugar(Formula::nabla("a", {}));
  CHECK(none == Formula::box("a", Formula::bottom()));

  auto c = expand_sugar(Formula::color(1, {"p", "q"}));
  CHECK(c == Formula::conj(Formula::prop("p"), Formula::neg_prop("q")));
}

TEST_CASE("expanded nabla: every member in some child, every child satisfies some member") {
  Signature sig({"a"}, {"p"});
  auto pool = trees({"a"}, {"p"}, 2);
  std::vector<Formula> phis{Formula::prop("p"), Formula::diamond("a", Formula::top())};
  auto expanded = expand_sugar(Formula::nabla("a", phis));
  auto sat = satisfying_points(pool.graph(), expanded);
  auto s0 = satisfying_points(pool.graph(), phis[0]);
  auto s1 = satisfying_points(pool.graph(), phis[1]);
  const auto& m = pool.graph();
  for (Point v = 0; v < m.size(); ++v) {
    bool some0 = false, some1 = false, all = true;
    for (const auto& [a, w] : m.succ[v]) {
      some0 = some0 || s0.test(w);
      some1 = some1 || s1.test(w);
      all = all && (s0.test(w) || s1.test(w));
    }
    CHECK(sat.test(v) == (some0 && some1 && all));
  }
}

TEST_CASE("negated singleton nabla is box-not or diamond-not") {
  Signature sig({"a"}, {"p"});
  auto pool = trees({"a"}, {"p"}, 2);
  auto psi = Formula::prop("p");
  auto lhs = to_nnf(Formula::negation(expand_sugar(Formula::nabla("a", {psi}))));
  auto rhs = Formula::disj(Formula::box("a", Formula::neg_prop("p")), Formula::diamond("a", Formula::neg_prop("p")));
  CHECK(agree_on(pool, lhs, rhs));
}

TEST_CASE("pdl translation") {
  Signature sig({"A", "B", "C"}, {});
  auto pool = trees({"A", "B"}, {}, 3);
  auto p = translate_pdl(parse_formula("<A;A*;B>true", sig));
  auto hand = parse_formula("<A> mu x. (<B>true | <A>x)", sig);
  CHECK(agree_on(pool, normalize(p), normalize(hand)));

  auto pp = translate_pdl(parse_formula("[(A+B+C)*]([A]false & [B]false)", sig));
  CHECK(pp.kind() == Kind::Nu);
  CHECK(analyze(pp).alternation_free);

  auto plain = parse_formula("<A>true", sig);
  CHECK(translate_pdl(plain) == plain);
}

TEST_CASE("guarding") {
  Signature sig({"a"}, {"p"});
  auto pool = trees({"a"}, {"p"}, 3);
  auto g = normalize(parse_formula("mu x. (p | x)", sig));
  CHECK(analyze(g).guarded);
  CHECK(agree_on(pool, g, Formula::prop("p")));

  auto inf = parse_formula("nu x. <a> x", sig);
  CHECK(guard(to_nnf(inf)) == to_nnf(inf));

  auto bot = normalize(parse_formula("mu x. (x | <a> x)", sig));
  CHECK(analyze(bot).guarded);
  CHECK(agree_on(pool, bot, Formula::bottom()));
}

TEST_CASE("analysis measures") {
  Signature sig({"a"}, {"p", "q"});
  auto inf = analyze(parse_formula("nu x. <a> x", sig));
  CHECK(inf.modal_depth == 1);
  CHECK(inf.alternation_free);
  CHECK_FALSE(inf.is_modal);

  auto m = analyze(parse_formula("<a>(p & [a]q)", sig));
  CHECK(m.modal_depth == 2);
  CHECK(m.is_modal);
  CHECK(m.size == 5);

  auto alt = analyze(parse_formula("mu x. nu y. (<a> x & [a] y)", sig));
  CHECK_FALSE(alt.alternation_free);
  CHECK_FALSE(alt.alternation_witness.empty());
  CHECK_THROWS_AS(require_alternation_free(parse_formula("mu x. nu y. (<a> x & [a] y)", sig)), FormulaError);
}

TEST_CASE("normal form invariants") {
  Signature sig({"a", "b"}, {"p"});
  auto f = normalize(parse_formula("!(mu x. p | <a> x) & mu y. (y | [b] y)", sig));
  auto info = analyze(f);
  CHECK(info.nnf);
  CHECK(info.guarded);
  CHECK(info.modal_depth <= info.depth);
}

TEST_CASE("dag sharing and round trip") {
  Signature sig({"a"}, {"p"});
  auto f = parse_formula("(<a>p & [a]p) | (<a>p & p)", sig);
  auto dag = FormulaDag::from_formula(normalize(f));
  CHECK(dag.to_formula() == normalize(f));
  auto again = FormulaDag::from_json(dag.to_json());
  CHECK(again.to_json() == dag.to_json());
  CHECK(FormulaDag::from_formula(dag.to_formula()).to_json() == dag.to_json());
  // <a>p occurs twice in the tree but once in the table
  CHECK(dag.reachable_count() < analyze(f).size);
}

TEST_CASE("signature header") {
  auto s = Signature::parse_header("sig actions=A,B props=p,q");
  CHECK(s.actions() == std::vector<std::string>{"A", "B"});
  CHECK(s.props() == std::vector<std::string>{"p", "q"});
  CHECK(Signature::parse_header(s.header()) == s);
}

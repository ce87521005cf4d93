#include "doctest.h"
#include "musep/synthesis.hpp"
#include "musep/tree_pool.hpp"
#include "support.hpp"

using namespace musep;
using testsupport::load;

namespace {

bool equivalent_on_pool(const Formula& a, const Formula& b, const Signature& sig, std::uint32_t depth) {
  TreePoolConfig c;
  c.actions = sig.actions();
  c.props = sig.props();
  c.depth = depth;
  c.decorated = true;
  TreePool pool(c);
  auto x = satisfying_points(pool.graph(), normalize(a));
  auto y = satisfying_points(pool.graph(), normalize(b));
  return x == y;
}

}  // namespace

TEST_CASE("separator for complementary literals") {
  Signature sig({"a"}, {"p"});
  EngineOptions o;
  o.hint = sig;
  auto r = synthesize_separator(parse_formula("p", sig), parse_formula("!p", sig), o);
  CHECK(r.verdict.n_min == 0u);
  CHECK(r.report.verified());
  CHECK(equivalent_on_pool(r.separator.to_formula(), Formula::prop("p"), sig, 2));
  CHECK(analyze(r.separator.to_formula()).modal_depth == 0);
}

TEST_CASE("separator for the program example") {
  auto P = load("ex1_P"), Q = load("ex1_Pprime");
  EngineOptions o;
  o.hint = P.sig;
  auto r = synthesize_separator(P.formula, Q.formula, o);
  CHECK(r.report.verified());
  auto psi = r.separator.to_formula();
  CHECK(analyze(psi).is_modal);
  CHECK(analyze(psi).modal_depth <= 1);
}

TEST_CASE("no separator when none exists") {
  auto F = load("inf"), G = load("not_inf");
  EngineOptions o;
  o.hint = F.sig;
  CHECK_THROWS_AS(synthesize_separator(F.formula, G.formula, o), NotSeparableError);
}

TEST_CASE("verification") {
  auto P = load("ex1_P"), Q = load("ex1_Pprime");
  VerifyOptions vo;
  vo.hint = P.sig;
  auto good = verify_separator(P.formula, parse_formula("<A>true", P.sig), Q.formula, vo);
  CHECK(good.verified());
  CHECK(good.spot_checked > 0);

  auto weak = verify_separator(P.formula, Formula::top(), Q.formula, vo);
  CHECK(weak.entails_left);
  CHECK_FALSE(weak.refutes_right);
  REQUIRE(weak.right_counter.has_value());
  CHECK(check_model(*weak.right_counter, normalize(Q.formula)));
  CHECK_FALSE(weak.verified());

  auto strong = verify_separator(P.formula, Formula::bottom(), Q.formula, vo);
  CHECK_FALSE(strong.entails_left);
  REQUIRE(strong.left_counter.has_value());
  CHECK(check_model(*strong.left_counter, normalize(P.formula)));

  CHECK_THROWS_WITH_AS(verify_separator(P.formula, parse_formula("mu x. <A>true | <B>x", P.sig), Q.formula, vo),
                       doctest::Contains("modal"), FormulaError);
  CHECK_FALSE(weak.to_json().empty());
  CHECK_FALSE(weak.to_text().empty());
}

TEST_CASE("interpolants use only shared props") {
  for (const auto& c : testsupport::craig_cases()) {
    EngineOptions o;
    o.hint = c.problem.sig;
    auto r = synthesize_craig_separator(c.problem.left, c.problem.right, o);
    CHECK_MESSAGE(r.report.verified(), c.name);
    auto used = analyze(r.separator.to_formula()).props;
    for (const auto& p : used)
      CHECK_MESSAGE(std::find(r.shared_props.begin(), r.shared_props.end(), p) != r.shared_props.end(), c.name);
  }
}

TEST_CASE("uniform consequence is entailed and has the requested depth") {
  Signature sig({"a"}, {"p"});
  auto f = parse_formula("mu x. p | <a>x", sig);
  for (std::uint64_t n = 0; n <= 3; ++n) {
    auto dag = uniform_consequence_of(f, n, ModelClass::General, std::nullopt, sig);
    auto psi = dag.to_formula();
    CHECK(analyze(psi).is_modal);
    CHECK(analyze(psi).modal_depth <= n);
    // f entails psi
    auto a = compile(Formula::conj(f, Formula::negation(psi)), sig.actions(), sig.props());
    CHECK(analyze_emptiness(a).empty(a));
  }
}

TEST_CASE("color sets become prime implicant covers") {
  FormulaDag dag;
  std::vector<std::string> props{"p", "q"};
  // {p&q, p&!q} is just p
  auto id = color_set_formula(dag, props, {0b01, 0b11});
  dag.set_root(id);
  CHECK(dag.to_formula() == Formula::prop("p"));
  auto all = color_set_formula(dag, props, {0, 1, 2, 3});
  CHECK(all == dag.top());
  auto none = color_set_formula(dag, props, {});
  CHECK(none == dag.bottom());
}

TEST_CASE("rendering") {
  Signature sig({"a"}, {"p"});
  auto dag = FormulaDag::from_formula(normalize(parse_formula("<a>p & [a]p", sig)));
  auto text = render_formula(dag, DagFormat::Text);
  CHECK(normalize(parse_formula(text, sig)) == dag.to_formula());
  auto back = FormulaDag::from_json(render_formula(dag, DagFormat::Json));
  CHECK(back.to_formula() == dag.to_formula());
  auto stats = render_formula(dag, DagFormat::Stats);
  CHECK(stats.find("modal_depth") != std::string::npos);
  CHECK(dag_format_from_name("dag") == DagFormat::Dag);
  CHECK_FALSE(dag_format_from_name("xml").has_value());
  CHECK_THROWS(render_formula(dag, DagFormat::Tree, 1));
}

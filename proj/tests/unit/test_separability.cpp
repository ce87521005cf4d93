#include "doctest.h"
#include "musep/separability.hpp"
#include "support.hpp"

using namespace musep;
using testsupport::load;

namespace {

EngineOptions opts(const Signature& sig, ModelClass c = ModelClass::General) {
  EngineOptions o;
  o.hint = sig;
  o.model_class = c;
  return o;
}

}  // namespace

TEST_CASE("program example needs depth one") {
  auto P = load("ex1_P"), Q = load("ex1_Pprime");
  auto v = decide_separability(P.formula, Q.formula, opts(P.sig));
  CHECK(v.separable);
  REQUIRE(v.n_min.has_value());
  CHECK(*v.n_min == 1);
}

TEST_CASE("infinite path versus finite paths") {
  auto F = load("inf"), G = load("not_inf");
  auto general = decide_separability(F.formula, G.formula, opts(F.sig), 3);
  CHECK_FALSE(general.separable);
  REQUIRE(general.counterexample.has_value());
  CHECK(general.counterexample->valid());
  CHECK(general.counterexample->n == 3);
  CHECK(n_bisimilar(general.counterexample->left, general.counterexample->right, 3));

  auto fin = decide_separability(F.formula, G.formula, opts(F.sig, ModelClass::FiniteTrees));
  CHECK(fin.separable);
}

TEST_CASE("tallness gives the minimal depth") {
  Signature sig({"a", "b"}, {"p"});
  struct Case {
    const char* f;
    const char* g;
    std::uint64_t n;
  };
  for (auto c : {Case{"p", "!p", 0}, Case{"<a>p", "[a]!p", 1}, Case{"<a><b>true", "[a][b]false", 2},
                 Case{"<a><a><a>true", "[a][a][a]false", 3}}) {
    SeparabilityProblem prob(parse_formula(c.f, sig), parse_formula(c.g, sig), opts(sig));
    CHECK_MESSAGE(prob.tallness() == static_cast<std::int64_t>(c.n) - 1, c.f);
    auto v = prob.verdict();
    REQUIRE(v.n_min.has_value());
    CHECK(*v.n_min == c.n);
    for (std::uint64_t k = 0; k < c.n; ++k) CHECK_FALSE(prob.separable_at(k));
    CHECK(prob.separable_at(c.n));
    CHECK(prob.separable_at(c.n + 4));
  }
}

TEST_CASE("unbounded tallness means not separable") {
  Signature sig({"a"}, {"p"});
  SeparabilityProblem prob(parse_formula("mu x. p | <a>x", sig), parse_formula("nu x. !p & [a]x", sig), opts(sig));
  CHECK(prob.tallness() == kInfiniteTallness);
  auto v = prob.verdict();
  CHECK_FALSE(v.separable);
  CHECK_FALSE(v.n_min.has_value());
  CHECK(v.cap_l == prob.cap_l());
  for (std::uint64_t n : {0, 2, 5}) CHECK(prob.counterexample(n).valid());
}

TEST_CASE("counterexamples on separable inputs below the minimal depth") {
  Signature sig({"a"}, {"p"});
  SeparabilityProblem prob(parse_formula("<a><a>p", sig), parse_formula("[a][a]!p", sig), opts(sig));
  auto c = prob.counterexample(1);
  CHECK(c.valid());
  CHECK_THROWS(prob.counterexample(2));
}

TEST_CASE("overlapping inputs are rejected with a joint model") {
  Signature sig({"a"}, {"p", "q"});
  auto f = parse_formula("p", sig), g = parse_formula("<a>q", sig);
  try {
    SeparabilityProblem prob(f, g, opts(sig));
    FAIL("expected NotExclusiveError");
  } catch (const NotExclusiveError& e) {
    CHECK(check_model(e.witness(), normalize(f)));
    CHECK(check_model(e.witness(), normalize(g)));
  }
}

TEST_CASE("word classes") {
  auto F = load("ef_p"), G = load("ag_not_p");
  auto general = decide_separability(F.formula, G.formula, opts(F.sig));
  auto words = decide_separability(F.formula, G.formula, opts(F.sig, ModelClass::Words));
  CHECK_FALSE(general.separable);
  CHECK_FALSE(words.separable);
  auto fw = decide_separability(F.formula, G.formula, opts(F.sig, ModelClass::FiniteWords));
  CHECK_FALSE(fw.separable);
  CHECK(is_word_class(ModelClass::InfiniteWords));
  CHECK_FALSE(is_word_class(ModelClass::FiniteTrees));
}

TEST_CASE("ontology restricts the models") {
  Signature sig({"a"}, {"p"});
  EngineOptions o = opts(sig, ModelClass::Ontology);
  // every point has at most one child and p never holds below the root
  o.ontology = parse_formula("nu x. [a]!p & [a]x", sig);
  auto v = decide_separability(parse_formula("mu x. p | <a>x", sig), parse_formula("!p", sig), o);
  REQUIRE(v.separable);
  CHECK(*v.n_min == 0);
}

TEST_CASE("results do not depend on jobs or seed") {
  for (const auto& p : testsupport::corpus_pairs()) {
    auto base = testsupport::options_for(p);
    SeparabilityProblem ref(p.f, p.g, base);
    for (unsigned jobs : {2u, 4u})
      for (std::uint64_t seed : {1u, 99u}) {
        auto o = base;
        o.jobs = jobs;
        o.seed = seed;
        SeparabilityProblem other(p.f, p.g, o);
        CHECK_MESSAGE(other.verdict().to_json() == ref.verdict().to_json(), p.label());
      }
  }
}

TEST_CASE("consistent_pairs agrees with single products") {
  Signature sig({"a"}, {"p"});
  auto a = compile(parse_formula("mu x. p | <a>x", sig), sig.actions(), sig.props());
  auto b = compile(parse_formula("nu x. !p & <a>x", sig), sig.actions(), sig.props());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t q = 0; q < a.size(); ++q)
    for (std::uint32_t r = 0; r < b.size(); ++r) pairs.emplace_back(q, r);
  auto batched = consistent_pairs(a, b, pairs, 3, 5);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto prod = intersect(a, b, {pairs[i]});
    auto e = analyze_emptiness(prod.automaton);
    CHECK(batched[i] == static_cast<bool>(e.nonempty[prod.roots[0]]));
  }
}

TEST_CASE("class names and verdict output") {
  for (auto c : {ModelClass::General, ModelClass::Words, ModelClass::FiniteTrees, ModelClass::FiniteWords,
                 ModelClass::InfiniteWords, ModelClass::Ontology})
    CHECK(class_from_name(class_name(c)) == c);
  CHECK_FALSE(class_from_name("nonsense").has_value());
  Signature sig({"a"}, {"p"});
  auto v = decide_separability(parse_formula("p", sig), parse_formula("!p", sig), opts(sig));
  CHECK(v.to_json().find("\"n_min\"") != std::string::npos);
  CHECK_FALSE(v.to_text().empty());
}

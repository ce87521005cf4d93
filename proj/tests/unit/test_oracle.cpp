#include "doctest.h"
#include "musep/families.hpp"
#include "musep/oracle.hpp"
#include "musep/synthesis.hpp"
#include "support.hpp"

using namespace musep;
using testsupport::load;

TEST_CASE("brute force finds n-bisimilar models") {
  auto F = load("inf"), G = load("not_inf");
  OracleOptions o;
  o.hint = F.sig;
  for (std::uint64_t n = 0; n <= 2; ++n) {
    auto r = brute_force_condition_iv(F.formula, G.formula, n, o);
    REQUIRE_FALSE(r.separable);
    REQUIRE(r.witness.has_value());
    CHECK(check_model(r.witness->first, normalize(F.formula)));
    CHECK(check_model(r.witness->second, normalize(G.formula)));
    CHECK(n_bisimilar(r.witness->first, r.witness->second, n));
  }
  Signature sig({"a"}, {"p"});
  auto sep = brute_force_condition_iv(parse_formula("<a>p", sig), parse_formula("[a]!p", sig), 1, o);
  CHECK(sep.separable);
  CHECK_FALSE(sep.caveat.empty());
}

TEST_CASE("oracle budget") {
  Signature sig({"a", "b"}, {"p", "q"});
  OracleOptions o;
  o.budget = 10;
  CHECK_THROWS_AS(brute_force_condition_iv(parse_formula("<a>p", sig), parse_formula("[a]!p & <b>q", sig), 3, o), BudgetError);
}

TEST_CASE("type space") {
  TypeSpace s({"a"}, {"p"}, 1);
  CHECK(s.size(0) == 2);
  CHECK(s.size() == 8);  // color times subset of the two leaf types
  // each characteristic formula holds in exactly one canonical tree
  for (std::uint32_t t = 0; t < s.size(); ++t) {
    auto chi = normalize(s.characteristic(1, t));
    for (std::uint32_t u = 0; u < s.size(); ++u) CHECK(check_model(s.canonical_tree(1, u), chi) == (t == u));
  }
  TypeSpace two({"a", "b"}, {}, 2);
  CHECK(two.size(1) == 4);
  CHECK(two.size() == 256);
  CHECK_THROWS_AS(TypeSpace({"a"}, {"p", "q"}, 3, 1000), BudgetError);
}

TEST_CASE("naive uniform consequence agrees with the automaton construction") {
  Signature sig({"a"}, {"p"});
  for (const char* t : {"mu x. p | <a>x", "nu x. <a>x", "<a>p & [a]!p", "mu x. [a]x"}) {
    auto f = parse_formula(t, sig);
    for (std::uint64_t n = 0; n <= 2; ++n) {
      auto naive = naive_uniform_consequence(f, n, sig);
      TypeSpace space(sig.actions(), sig.props(), static_cast<std::uint32_t>(n));
      auto built = uniform_consequence_of(f, n, ModelClass::General, std::nullopt, sig);
      CHECK_MESSAGE(type_profile(space, built.to_formula()) == naive.consistent, t << " n=" << n);
    }
  }
}

TEST_CASE("benchmark families") {
  CHECK(family_from_name("counter-words") == FamilyKind::CounterWords);
  CHECK(family_name(FamilyKind::EvenOdd) == "even-odd");
  CHECK_FALSE(family_from_name("fizz").has_value());

  CHECK(counter_word_length(0) == 1);
  CHECK(counter_word_length(2) == 12);

  auto ct = gen_benchmark_family(FamilyKind::CounterTrees, 2);
  CHECK(ct.model_class == ModelClass::General);
  CHECK(analyze(ct.left).alternation_free);

  auto eo = gen_benchmark_family(FamilyKind::EvenOdd, 4);
  CHECK(is_word_class(eo.model_class));
  CHECK_THROWS(gen_benchmark_family(FamilyKind::EvenOdd, 0));
}

TEST_CASE("counter words: a unique model of the right length") {
  for (unsigned n = 0; n <= 2; ++n) {
    auto fam = gen_benchmark_family(FamilyKind::CounterWords, n);
    EngineOptions o;
    o.model_class = fam.model_class;
    o.hint = fam.sig;
    auto a = compile(Formula::conj(class_constraint(fam.model_class, fam.sig.actions()), fam.left),
                     fam.sig.actions(), fam.sig.props(), true);
    auto e = analyze_emptiness(a);
    REQUIRE_FALSE(e.empty(a));
    auto w = emptiness_witness(a, e, a.initial);
    CHECK(w.is_acyclic());
    CHECK(w.size() == counter_word_length(n));
  }
}

TEST_CASE("even automaton counts a-points") {
  auto a = even_automaton();
  for (unsigned len = 1; len <= 6; ++len)
    for (unsigned mask = 0; mask < (1u << len); ++mask) {
      WordModel w;
      w.props = a.props;
      for (unsigned i = 0; i < len; ++i) w.prefix.push_back((mask >> i) & 1);
      CHECK(accepts(a, w.to_kripke(a.actions.front())) == (__builtin_popcount(mask) % 2 == 0));
    }
}

TEST_CASE("even-odd words separate exactly at their length") {
  auto fam = gen_benchmark_family(FamilyKind::EvenOdd, 3);
  EngineOptions o;
  o.model_class = fam.model_class;
  o.hint = fam.sig;
  auto v = decide_separability(fam.left, fam.right, o);
  REQUIRE(v.separable);
  CHECK(*v.n_min == 2);
}

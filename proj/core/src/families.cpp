#include "musep/families.hpp"

#include <map>
#include <vector>

namespace musep {

namespace {

Formula dia_n(const std::string& a, std::uint64_t k, Formula f) {
  for (std::uint64_t i = 0; i < k; ++i) f = Formula::diamond(a, f);
  return f;
}

Formula box_n(const std::string& a, std::uint64_t k, Formula f) {
  for (std::uint64_t i = 0; i < k; ++i) f = Formula::box(a, f);
  return f;
}

BenchFamily counter_trees(unsigned n) {
  std::vector<std::string> ps;
  for (unsigned i = 0; i <= n; ++i) ps.push_back("p" + std::to_string(i));
  const std::string a = "a";
  std::vector<Formula> zero;
  for (const auto& p : ps) zero.push_back(Formula::neg_prop(p));

  // value 2^n: only the top bit set
  std::vector<Formula> last;
  for (unsigned i = 0; i < n; ++i) last.push_back(Formula::neg_prop(ps[i]));
  last.push_back(Formula::prop(ps[n]));
  auto is_last = Formula::conj(last);
  auto not_last = Formula::negation(is_last);

  // child bit i = bit i xor (bits below i all set)
  std::vector<Formula> inc;
  for (unsigned i = 0; i <= n; ++i) {
    std::vector<Formula> lower;
    for (unsigned j = 0; j < i; ++j) lower.push_back(Formula::prop(ps[j]));
    auto carry = Formula::conj(lower);
    auto flips = Formula::disj(Formula::conj(Formula::prop(ps[i]), Formula::negation(carry)),
                               Formula::conj(Formula::neg_prop(ps[i]), carry));
    inc.push_back(Formula::disj(Formula::conj(flips, Formula::box(a, Formula::prop(ps[i]))),
                                Formula::conj(Formula::negation(flips), Formula::box(a, Formula::neg_prop(ps[i])))));
  }
  auto local = Formula::disj(Formula::conj(is_last, Formula::box(a, Formula::bottom())),
                             Formula::conj(not_last, Formula::conj(inc)));
  auto everywhere = Formula::nu("x", Formula::conj(local, Formula::box(a, Formula::var("x"))));
  auto c = Formula::conj(Formula::conj(zero), everywhere);
  return {FamilyKind::CounterTrees, n, Signature({a}, ps), c, Formula::negation(c), ModelClass::General};
}

BenchFamily counter_words(unsigned n) {
  const std::string a = "a";
  auto m = Formula::prop("m"), nm = Formula::neg_prop("m");
  auto b = Formula::prop("b"), nb = Formula::neg_prop("b");
  auto x = Formula::var("x");
  Signature sig({a}, {"m", "b"});
  if (n == 0) {
    auto w = Formula::conj({m, nb, Formula::box(a, Formula::bottom())});
    return {FamilyKind::CounterWords, 0, sig, w, Formula::negation(w), ModelClass::Words};
  }
  const std::uint64_t k = n + 1;
  // N(j): copy bit j into the next block; C(j): carry still pending at bit j
  std::vector<Formula> N(n + 1), C(n + 1);
  for (unsigned j = n; j >= 1; --j) {
    auto next_n = j < n ? Formula::diamond(a, N[j + 1]) : Formula::diamond(a, x);
    N[j] = Formula::conj({nm,
                          Formula::disj(Formula::conj(b, dia_n(a, k, b)), Formula::conj(nb, dia_n(a, k, nb))),
                          next_n});
    auto on_one = j < n ? Formula::diamond(a, C[j + 1]) : Formula::box(a, Formula::bottom());
    C[j] = Formula::conj(
        nm, Formula::disj(Formula::conj({b, box_n(a, k, nb), on_one}), Formula::conj({nb, dia_n(a, k, b), next_n})));
  }
  auto w = Formula::nu("x", Formula::conj({m, nb, Formula::diamond(a, C[1])}));
  std::vector<Formula> parts{w};
  for (unsigned j = 1; j <= n; ++j) parts.push_back(dia_n(a, j, nb));
  auto phi = Formula::conj(parts);
  return {FamilyKind::CounterWords, n, sig, phi, Formula::negation(phi), ModelClass::Words};
}

BenchFamily even_odd(unsigned n) {
  if (n == 0) throw std::invalid_argument("even-odd needs n >= 1");
  const std::string a = "a";
  // even/odd count of a-points among the first k points (which must exist)
  std::map<unsigned, std::pair<Formula, Formula>> memo;
  auto pre = [&](auto&& self, unsigned k) -> std::pair<Formula, Formula> {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    std::pair<Formula, Formula> r;
    if (k == 1) {
      r = {Formula::neg_prop("a"), Formula::prop("a")};
    } else if (k % 2 == 0) {
      auto [e, o] = self(self, k / 2);
      auto h = k / 2;
      r = {Formula::disj(Formula::conj(e, dia_n(a, h, e)), Formula::conj(o, dia_n(a, h, o))),
           Formula::disj(Formula::conj(e, dia_n(a, h, o)), Formula::conj(o, dia_n(a, h, e)))};
    } else {
      auto [e, o] = self(self, k - 1);
      auto step = k - 1;
      r = {Formula::disj(Formula::conj(e, dia_n(a, step, Formula::neg_prop("a"))),
                         Formula::conj(o, dia_n(a, step, Formula::prop("a")))),
           Formula::disj(Formula::conj(e, dia_n(a, step, Formula::prop("a"))),
                         Formula::conj(o, dia_n(a, step, Formula::neg_prop("a"))))};
    }
    memo.emplace(k, r);
    return r;
  };
  auto [e, o] = pre(pre, n);
  auto end = box_n(a, n, Formula::bottom());
  return {FamilyKind::EvenOdd, n, Signature({a}, {"a"}), Formula::conj(e, end), Formula::conj(o, end),
          ModelClass::Words};
}

}  // namespace

std::string_view family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::CounterTrees: return "counter-trees";
    case FamilyKind::CounterWords: return "counter-words";
    case FamilyKind::EvenOdd: return "even-odd";
  }
  return "";
}

std::optional<FamilyKind> family_from_name(std::string_view name) {
  for (auto k : {FamilyKind::CounterTrees, FamilyKind::CounterWords, FamilyKind::EvenOdd})
    if (family_name(k) == name) return k;
  return std::nullopt;
}

BenchFamily gen_benchmark_family(FamilyKind kind, unsigned n) {
  switch (kind) {
    case FamilyKind::CounterTrees: return counter_trees(n);
    case FamilyKind::CounterWords: return counter_words(n);
    case FamilyKind::EvenOdd: return even_odd(n);
  }
  throw std::invalid_argument("unknown family");
}

std::uint64_t counter_word_length(unsigned n) { return (std::uint64_t{n} + 1) << n; }

Npta even_automaton() {
  Npta a;
  a.actions = {"a"};
  a.props = {"a"};
  auto even = a.add_state(1, "even");
  auto odd = a.add_state(1, "odd");
  a.initial = even;
  for (std::uint32_t q : {even, odd}) {
    for (Color c = 0; c < 2; ++c) {
      bool parity_after = (q == odd) != (c == 1);  // true: odd
      std::uint32_t next = parity_after ? odd : even;
      a.delta[q][c].push_back(MoveSet{{0, next}});
      if (!parity_after) a.delta[q][c].push_back(MoveSet{});
    }
  }
  return a;
}

}  // namespace musep

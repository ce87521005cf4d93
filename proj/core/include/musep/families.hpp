#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "musep/automata.hpp"
#include "musep/formula.hpp"
#include "musep/separability.hpp"

namespace musep {

enum class FamilyKind { CounterTrees, CounterWords, EvenOdd };

std::string_view family_name(FamilyKind k);
std::optional<FamilyKind> family_from_name(std::string_view name);

/// A generated input pair and the class it is meant to be decided over.
struct BenchFamily {
  FamilyKind kind;
  unsigned n = 0;
  Signature sig;
  Formula left;
  Formula right;
  ModelClass model_class = ModelClass::General;
};

/// counter-trees: C_n over p0..pn (root counts 0, every child counts one more,
///   2^n is a leaf), paired with its negation.
/// counter-words: the unique word of (n+1)·2^n points listing the n-bit
///   counter values in blocks (marker m, then bits b, least significant first),
///   paired with its negation.
/// even-odd: words of exactly n >= 1 points with an even / odd number of
///   a-points, built by halving.
BenchFamily gen_benchmark_family(FamilyKind kind, unsigned n);

/// Points of the word defined by counter-words(n).
std::uint64_t counter_word_length(unsigned n);

/// Two-state word automaton over prop `a` accepting the finite words with an
/// even number of a-points.
Npta even_automaton();

}  // namespace musep

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "musep/automata.hpp"
#include "musep/dag.hpp"
#include "musep/separability.hpp"

namespace musep {

/// Smallest disjunction of prime-implicant cubes covering exactly `colors`
/// (Quine–McCluskey with a deterministic greedy cover).
FormulaDag::Id color_set_formula(FormulaDag& dag, const std::vector<std::string>& props,
                                 const std::vector<Color>& colors);

/// ψ_{n,q}: modal depth n, satisfied by M iff some N accepted from q is
/// n-bisimilar to M.
class UniformBuilder {
 public:
  UniformBuilder(const Npta& a, FormulaDag& dag);
  FormulaDag::Id psi(std::uint64_t n, std::uint32_t q);
  const Emptiness& emptiness() const { return e_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct General {
    MoveSet moves;
    std::vector<bool> free;  // per action: children unconstrained
    bool operator<(const General& o) const { return std::tie(moves, free) < std::tie(o.moves, o.free); }
    bool operator==(const General& o) const = default;
  };
  std::vector<General> generalize(std::vector<MoveSet> ts) const;
  FormulaDag::Id nabla(const General& g, std::uint64_t n);

  const Npta& a_;
  FormulaDag& dag_;
  Emptiness e_;
  std::map<std::pair<std::uint64_t, std::uint32_t>, FormulaDag::Id> memo_;
};

/// Word-automaton variant: run predicates ψ^m_{pq} composed by halving.
class WordUniformBuilder {
 public:
  WordUniformBuilder(const Npta& a, FormulaDag& dag);
  /// "a run from p to q reads the first m letters".
  FormulaDag::Id run(std::uint64_t m, std::uint32_t p, std::uint32_t q);
  /// The n-uniform consequence from the initial state.
  FormulaDag::Id build(std::uint64_t n);
  /// States reachable from p in exactly m steps (sorted).
  const std::vector<std::uint32_t>& reach(std::uint64_t m, std::uint32_t p);
  std::size_t memo_size() const { return memo_.size(); }

 private:
  const Npta& a_;
  FormulaDag& dag_;
  Emptiness e_;
  std::string action_;
  std::vector<std::vector<std::vector<std::uint32_t>>> succ_;  // [p][c]
  std::map<std::tuple<std::uint64_t, std::uint32_t, std::uint32_t>, FormulaDag::Id> memo_;
  std::map<std::pair<std::uint64_t, std::uint32_t>, std::vector<std::uint32_t>> reach_;
};

FormulaDag uniform_consequence(const Npta& a, std::uint64_t n);
FormulaDag uniform_consequence_words(const Npta& a, std::uint64_t n);

/// Compiles f (relativized to the class) and builds its n-uniform consequence.
FormulaDag uniform_consequence_of(const Formula& f, std::uint64_t n, ModelClass c = ModelClass::General,
                                  const std::optional<Formula>& ontology = std::nullopt, const Signature& hint = {});

struct VerifyOptions {
  ModelClass model_class = ModelClass::General;
  std::optional<Formula> ontology;
  Signature hint;
  /// Enumerated models for the spot checks.
  std::uint32_t spot_depth = 3;
  std::uint32_t spot_branching = 2;
  std::uint64_t spot_budget = 200'000;
  /// When set, the separator may only use these props.
  std::optional<std::vector<std::string>> allowed_props;
};

struct VerificationReport {
  bool modal = true;
  bool entails_left = false;   // θ∧f ⊨ ψ
  bool refutes_right = false;  // θ∧ψ ⊨ ¬g
  std::optional<KripkeModel> left_counter;   // model of θ∧f∧¬ψ
  std::optional<KripkeModel> right_counter;  // model of θ∧ψ∧g
  std::uint64_t spot_checked = 0;
  std::uint64_t spot_failures = 0;
  std::uint32_t spot_depth = 0;
  std::optional<bool> craig_ok;
  bool verified() const {
    return modal && entails_left && refutes_right && spot_failures == 0 && craig_ok.value_or(true);
  }
  std::string to_json() const;
  std::string to_text() const;
};

/// Checks f ⊨ ψ and ψ ⊨ ¬g over the class. Throws FormulaError if ψ is not modal.
VerificationReport verify_separator(const Formula& f, const Formula& psi, const Formula& g,
                                    const VerifyOptions& options = {});

struct SeparatorResult {
  SeparabilityVerdict verdict;
  FormulaDag separator;
  VerificationReport report;
  std::vector<std::string> shared_props;  // Craig runs only
};

class NotSeparableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform consequence at the exact minimal depth, then verification.
SeparatorResult synthesize_separator(const Formula& f, const Formula& g, const EngineOptions& options = {});

/// Separator over the props shared by f and g, built on the projected automata.
SeparatorResult synthesize_craig_separator(const Formula& f, const Formula& g, const EngineOptions& options = {});

enum class DagFormat { Text, Tree, Json, Dag, Stats };
std::optional<DagFormat> dag_format_from_name(std::string_view name);
/// Renders a separator; `text` and `tree` expand the DAG (refusing above `max_tree` nodes).
std::string render_formula(const FormulaDag& dag, DagFormat format, std::uint64_t max_tree = 5'000'000);

}  // namespace musep

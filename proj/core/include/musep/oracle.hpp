#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "musep/formula.hpp"
#include "musep/model.hpp"
#include "musep/separability.hpp"
#include "musep/tree_pool.hpp"

namespace musep {

// Brute-force references for the engine and the uniform-consequence builder.
// They only use model checking, bisimulation and tree enumeration, except where
// noted on naive_uniform_consequence.

struct OracleOptions {
  ModelClass model_class = ModelClass::General;
  std::optional<Formula> ontology;
  Signature hint;
  /// Trees are enumerated up to depth n + depth_extra (lowered to fit the budget).
  std::uint32_t depth_extra = 2;
  std::uint32_t branching = 2;
  bool decorated = true;
  std::uint64_t budget = 2'000'000;
};

struct OracleResult {
  /// No pair of enumerated models of f and f' agrees up to depth n.
  bool separable = true;
  std::optional<std::pair<KripkeModel, KripkeModel>> witness;
  std::uint32_t depth = 0;  // enumeration depth actually used
  std::uint64_t trees = 0;
  /// "separable" only holds within the enumeration bounds.
  std::string caveat;
};

/// Searches enumerated trees for M |= f, M' |= f' with M and M' n-bisimilar.
/// Throws BudgetError when even depth n does not fit the budget.
OracleResult brute_force_condition_iv(const Formula& f, const Formula& g, std::uint64_t n,
                                      const OracleOptions& options = {});

/// Every n-type over a signature, as hereditarily finite sets: a level-k type
/// is a color plus, per action, a set of level-(k-1) types.
class TypeSpace {
 public:
  struct Type {
    Color color;
    std::vector<std::vector<std::uint32_t>> children;  // [action] sorted level-(k-1) ids
  };

  /// Throws BudgetError if some level has more than max_types members.
  TypeSpace(std::vector<std::string> actions, std::vector<std::string> props, std::uint32_t n,
            std::uint64_t max_types = 100'000);

  std::uint32_t depth() const { return n_; }
  std::size_t size(std::uint32_t level) const { return levels_[level].size(); }
  std::size_t size() const { return levels_[n_].size(); }
  const Type& type(std::uint32_t level, std::uint32_t id) const { return levels_[level][id]; }

  /// Smallest tree of the type (depth <= level).
  KripkeModel canonical_tree(std::uint32_t level, std::uint32_t id) const;
  /// Characteristic formula: holds exactly in the models of this type.
  Formula characteristic(std::uint32_t level, std::uint32_t id) const;

  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& props() const { return props_; }

 private:
  Point grow(KripkeModel& m, std::uint32_t level, std::uint32_t id) const;

  std::vector<std::string> actions_, props_;
  std::uint32_t n_;
  std::vector<std::vector<Type>> levels_;
};

struct NaiveUniform {
  Formula formula;                     // disjunction of characteristic formulas
  std::vector<bool> consistent;        // per level-n type
  std::uint64_t by_enumeration = 0;    // types settled by an enumerated model
  std::uint64_t by_automaton = 0;      // types settled by an emptiness query
};

/// Disjunction of the n-types consistent with f. A type is consistent when an
/// extension of its canonical tree (open leaves optionally looping) models f;
/// remaining types are decided by automaton emptiness of f and the
/// characteristic formula, with the witness re-checked by model checking.
NaiveUniform naive_uniform_consequence(const Formula& f, std::uint64_t n, const Signature& sig,
                                       std::uint64_t max_types = 100'000);

/// Indices of level-n types whose canonical tree satisfies the modal formula.
std::vector<bool> type_profile(const TypeSpace& space, const Formula& modal);

}  // namespace musep

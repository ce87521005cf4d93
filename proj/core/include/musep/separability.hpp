#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "musep/automata.hpp"
#include "musep/formula.hpp"
#include "musep/model.hpp"

namespace musep {

enum class ModelClass { General, Words, FiniteTrees, FiniteWords, InfiniteWords, Ontology };

std::string_view class_name(ModelClass c);
std::optional<ModelClass> class_from_name(std::string_view name);
/// Word classes use word automata (single action, at most one child).
bool is_word_class(ModelClass c);

/// Ordered action and prop lists an analysis runs over.
struct Alphabet {
  std::vector<std::string> actions;
  std::vector<std::string> props;
};

/// Actions and props used by the formulas, ordered by `hint` first, then by name.
/// Word classes get exactly one action (`a` when none is used).
Alphabet joint_alphabet(const std::vector<Formula>& fs, ModelClass c, const Signature& hint = {});

/// The class constraint θ over the given actions (⊤ for general and words).
Formula class_constraint(ModelClass c, const std::vector<std::string>& actions,
                         const std::optional<Formula>& ontology = std::nullopt);

/// (θ∧f, θ∧g), normalized.
std::pair<Formula, Formula> relativize(ModelClass c, const std::optional<Formula>& ontology, const Formula& f,
                                       const Formula& g, const std::vector<std::string>& actions);

/// Raised when the inputs share a model; carries a joint witness.
class NotExclusiveError : public std::runtime_error {
 public:
  NotExclusiveError(const std::string& what, KripkeModel witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const KripkeModel& witness() const { return witness_; }

 private:
  KripkeModel witness_;
};

struct EngineOptions {
  ModelClass model_class = ModelClass::General;
  std::optional<Formula> ontology;
  unsigned jobs = 1;
  /// Shuffles the order in which consistency queries are evaluated.
  std::optional<std::uint64_t> seed;
  Signature hint;
};

struct Counterexample {
  KripkeModel left;
  KripkeModel right;
  std::uint64_t n = 0;
  bool left_ok = false;
  bool right_ok = false;
  bool bisimilar_ok = false;
  bool valid() const { return left_ok && right_ok && bisimilar_ok; }
};

inline constexpr std::int64_t kInfiniteTallness = std::numeric_limits<std::int64_t>::max();

struct SeparabilityVerdict {
  bool separable = false;
  std::optional<std::uint64_t> n_min;
  std::uint64_t cap_l = 0;
  ModelClass model_class = ModelClass::General;
  std::optional<Counterexample> counterexample;

  std::string to_json() const;
  std::string to_text() const;
};

/// Product safety automaton over state pairs together with its tallness table.
///
/// A pair (q, q') fails at depth n when the two automata accept models from q
/// and q' whose n-prefixes coincide. Tallness is the largest such n (-1 when
/// none, kInfiniteTallness when unbounded); separability at depth n holds iff
/// tallness(initial) < n.
class SeparabilityProblem {
 public:
  struct Transition {
    Color color;
    std::uint32_t left;   // index into delta[q][color]
    std::uint32_t right;  // index into delta'[q'][color]
    std::vector<std::pair<std::uint32_t, std::uint32_t>> children;  // (action, pair id)
  };
  struct PairInfo {
    std::uint32_t left;
    std::uint32_t right;
    std::int64_t tallness;
    bool consistent;
    bool finite_tree;  // accepts some finite tree, consistent pairs being leaves
  };

  SeparabilityProblem(const Formula& f, const Formula& g, EngineOptions options = {});
  /// Works on two automata over one alphabet. Without formulas, counterexamples
  /// are validated by automaton membership.
  SeparabilityProblem(Npta left, Npta right, EngineOptions options);

  SeparabilityVerdict verdict() const;
  std::int64_t tallness() const { return pairs_[0].tallness; }
  bool separable_at(std::uint64_t n) const;
  /// Models of f and g with equal n-prefixes; requires !separable_at(n).
  Counterexample counterexample(std::uint64_t n) const;

  const Npta& left() const { return left_; }
  const Npta& right() const { return right_; }
  const Emptiness& left_emptiness() const { return left_e_; }
  const Emptiness& right_emptiness() const { return right_e_; }
  const Formula& left_formula() const { return left_f_; }
  const Formula& right_formula() const { return right_f_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const EngineOptions& options() const { return options_; }
  std::uint64_t cap_l() const { return static_cast<std::uint64_t>(left_.size()) * right_.size() + 1; }

  const std::vector<PairInfo>& pairs() const { return pairs_; }
  const std::vector<std::vector<Transition>>& transitions() const { return trans_; }
  std::size_t transition_count() const;

 private:
  void init();
  void build_pairs();
  void compute_tallness();
  void compute_consistency();
  void compute_finite_flags();
  std::uint32_t pair_id(std::uint32_t q, std::uint32_t r);
  std::pair<Point, Point> build(KripkeModel& m, KripkeModel& m2, std::uint32_t x, std::uint64_t n) const;

  EngineOptions options_;
  Alphabet alphabet_;
  Formula left_f_, right_f_;
  Npta left_, right_;
  Emptiness left_e_, right_e_;
  std::vector<PairInfo> pairs_;
  std::vector<std::vector<Transition>> trans_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

/// Consistency of state pairs: L(a from p) ∩ L(b from p') ≠ ∅, answered through
/// intersection products. Queries are split into `jobs` batches evaluated
/// concurrently; the order is shuffled when a seed is given. Results do not
/// depend on either.
std::vector<bool> consistent_pairs(const Npta& a, const Npta& b,
                                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs, unsigned jobs = 1,
                                   std::optional<std::uint64_t> seed = std::nullopt);

/// Convenience wrapper: relativize, build, report.
SeparabilityVerdict decide_separability(const Formula& f, const Formula& g, const EngineOptions& options = {},
                                        std::optional<std::uint64_t> counterexample_depth = std::nullopt);

/// Serialization used in verdict output.
std::string counterexample_json(const Counterexample& c);

}  // namespace musep

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "musep/bitset.hpp"
#include "musep/dag.hpp"
#include "musep/formula.hpp"
#include "musep/model.hpp"
#include "musep/parity.hpp"

namespace musep {

/// Alternating parity tree automaton read off a normalized, guarded,
/// alternation-free formula. States are the root and the arguments of
/// modalities; transitions are kept in disjunctive normal form over the atoms
/// "some a-child is accepted from q" / "every a-child is accepted from q".
class Apta {
 public:
  struct Atom {
    bool universal = false;
    std::uint32_t action = 0;
    std::uint32_t state = 0;
    auto operator<=>(const Atom&) const = default;
  };
  using Clause = std::vector<Atom>;  // sorted, duplicate free

  /// f must be normalized; every action/prop it uses must be listed.
  static Apta from_formula(const Formula& f, std::vector<std::string> actions, std::vector<std::string> props);

  std::size_t size() const { return node_of_.size(); }
  std::uint32_t initial() const { return 0; }
  /// 1 for states carrying a free least-fixpoint variable, else 2.
  int priority(std::uint32_t q) const { return priority_[q]; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& props() const { return props_; }
  Color num_colors() const { return Color{1} << props_.size(); }

  /// Minimal DNF of the transition formula; empty vector means false.
  const std::vector<Clause>& dnf(std::uint32_t q, Color c) const;
  std::string transition_text(std::uint32_t q, Color c) const;
  std::string state_formula(std::uint32_t q) const;

 private:
  const std::vector<Clause>& node_dnf(FormulaDag::Id n, Color c) const;

  std::vector<std::string> actions_;
  std::vector<std::string> props_;
  FormulaDag dag_;
  std::vector<FormulaDag::Id> node_of_;
  std::unordered_map<FormulaDag::Id, std::uint32_t> state_of_;
  std::unordered_map<std::string, FormulaDag::Id> binder_body_;
  std::vector<int> priority_;
  mutable std::unordered_map<std::uint64_t, std::vector<Clause>> memo_;
};

/// (action index, state) pair; a transition is a set of them.
using Move = std::pair<std::uint32_t, std::uint32_t>;
using MoveSet = std::vector<Move>;  // sorted, duplicate free

/// Nondeterministic parity tree automaton with priorities in {1, 2} (Büchi).
///
/// A transition S in delta[q][c] accepts a point of color c when its children
/// can be labelled so that every child gets a state s with (a, s) in S for the
/// child's action a, and every element of S labels at least one child.
struct Npta {
  std::vector<std::string> actions;
  std::vector<std::string> props;
  std::uint32_t initial = 0;
  std::vector<std::uint8_t> rank;
  std::vector<std::vector<std::vector<MoveSet>>> delta;  // [state][color]
  std::vector<std::string> labels;
  /// State accepting every tree, if the automaton has one.
  std::optional<std::uint32_t> top;

  std::size_t size() const { return rank.size(); }
  Color num_colors() const { return Color{1} << props.size(); }
  std::size_t transition_count() const;
  std::uint32_t add_state(std::uint8_t r, std::string label);
  /// Adds (or returns) the state accepting every tree.
  std::uint32_t ensure_top(bool words = false);
  /// Throws std::logic_error when an invariant is broken.
  void validate() const;
};

struct DealternationOptions {
  /// Keep only runs where every point has at most one child (single action).
  bool words = false;
  std::uint64_t max_states = 500'000;
};

/// Breakpoint construction: macrostates (S, O) with O the μ-obligations that
/// still have to be discharged.
Npta dealternate(const Apta& a, const DealternationOptions& options = {});

/// normalize, check alternation-freedom, build the APTA, dealternate.
Npta compile(const Formula& f, const std::vector<std::string>& actions, const std::vector<std::string>& props,
             bool words = false);

/// Re-expresses the automaton over larger alphabets. New actions are left
/// unconstrained; new props are ignored.
Npta lift(const Npta& a, const std::vector<std::string>& actions, const std::vector<std::string>& props);

/// Drops transitions with more than one element (single action only).
Npta restrict_to_words(const Npta& a);

/// Existential projection onto a subset of the props.
Npta project(const Npta& a, const std::vector<std::string>& props);

// ---------------------------------------------------------------------------
// Emptiness

/// Vertices 0..size()-1 are the states, then a winning and a losing sink, then
/// one Pathfinder vertex per distinct transition set.
ParityGame emptiness_game(const Npta& a);

struct Emptiness {
  std::vector<bool> nonempty;             // per state
  std::vector<std::vector<bool>> ne;       // [state][color]: some transition with nonempty targets
  std::vector<std::int64_t> choice_color;  // winning strategy per nonempty state
  std::vector<std::int64_t> choice_move;   // index into delta[q][choice_color]
  bool empty(const Npta& a) const { return !nonempty[a.initial]; }
};

Emptiness analyze_emptiness(const Npta& a);

/// Regular model (possibly cyclic) accepted from q, root colored c when given.
/// Requires nonempty[q] (and ne[q][c]).
KripkeModel emptiness_witness(const Npta& a, const Emptiness& e, std::uint32_t q,
                              std::optional<Color> c = std::nullopt);

// ---------------------------------------------------------------------------
// Membership

/// Per point of an acyclic model: the states accepting the subtree there.
std::vector<Bitset> accepting_states(const Npta& a, const KripkeModel& m);

/// Acceptance of the pointed model. Acyclic models are decided exactly,
/// cyclic ones through their unravelling.
bool accepts(const Npta& a, const KripkeModel& m, std::optional<std::uint32_t> state = std::nullopt);

// ---------------------------------------------------------------------------
// Products

/// All minimal left-and-right-total relations between {0..m-1} and {0..k-1}.
/// Both sides empty gives one empty relation; exactly one empty gives none.
std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> minimal_covers(std::uint32_t m, std::uint32_t k);

/// Büchi product accepting L(a) ∩ L(b), started from several state pairs.
/// Both automata must share actions and props.
struct Product {
  Npta automaton;
  std::vector<std::uint32_t> roots;  // product state per requested pair
};
Product intersect(const Npta& a, const Npta& b, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);
Product intersect(const Npta& a, const Npta& b);

// ---------------------------------------------------------------------------
// Output

std::string dump_text(const Npta& a);
std::string to_dot(const Npta& a);
std::string move_set_text(const Npta& a, const MoveSet& s);

}  // namespace musep

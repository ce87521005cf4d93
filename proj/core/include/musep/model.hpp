#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "musep/bitset.hpp"
#include "musep/formula.hpp"

namespace musep {

using Point = std::uint32_t;

/// Finite pointed Kripke structure. Colors are bitmasks over `props`;
/// successor lists may contain repeated edges (used by tree pools to keep
/// isomorphic siblings apart).
struct KripkeModel {
  std::vector<std::string> actions;
  std::vector<std::string> props;
  std::vector<Color> valuation;
  std::vector<std::vector<std::pair<std::uint32_t, Point>>> succ;  // (action index, target)
  Point root = 0;
  std::vector<std::string> names;  // optional, parallel to valuation

  std::size_t size() const { return valuation.size(); }
  Point add_point(Color c);
  void add_edge(Point from, std::uint32_t action, Point to);
  std::uint32_t action_id(const std::string& a);  // adds if missing
  std::uint32_t prop_id(const std::string& p);    // adds if missing
  bool holds(Point v, std::string_view prop) const;
  /// Color of v re-expressed over `universe`.
  Color color_over(Point v, const std::vector<std::string>& universe) const;
  std::vector<std::string> point_props(Point v) const;

  bool is_tree() const;
  bool is_acyclic() const;
  /// Height of the reachable part when acyclic (0 for a single point).
  std::uint64_t height() const;
  /// Restriction to points reachable from the root.
  KripkeModel reachable() const;
};

/// Finite word or lasso prefix·loop^ω over a single action.
struct WordModel {
  std::vector<std::string> props;
  std::vector<Color> prefix;
  std::vector<Color> loop;  // empty for finite words

  KripkeModel to_kripke(const std::string& action = "a") const;
};

/// Unbounded bisimulation depth.
inline constexpr std::uint64_t kInfiniteDepth = std::numeric_limits<std::uint64_t>::max();

// ---------------------------------------------------------------------------
// Model checking

/// Root satisfaction. f must be normalized (NNF, no sugar); free variables are an error.
bool check_model(const KripkeModel& m, const Formula& f);
/// Satisfying point set.
Bitset satisfying_points(const KripkeModel& m, const Formula& f);

// ---------------------------------------------------------------------------
// Bisimulation

/// Refinement classes after `rounds` rounds (kInfiniteDepth: until stable).
/// Points with equal class are `rounds`-bisimilar. Colors are compared by
/// proposition names, actions by name.
std::vector<std::uint32_t> bisimulation_classes(const KripkeModel& m, std::uint64_t rounds);

/// n-bisimilarity of the roots (unravelling semantics).
bool n_bisimilar(const KripkeModel& a, const KripkeModel& b, std::uint64_t n);

/// Disjoint union; the second model's points are offset by a.size().
KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b);

/// Tree of all root paths of length <= depth.
KripkeModel unravel(const KripkeModel& m, std::uint64_t depth);

// ---------------------------------------------------------------------------
// JSON

/// Accepts `{points, root, edges}` or the word shorthand `{prefix, loop}`.
KripkeModel model_from_json(std::string_view text, const std::string& word_action = "a");
std::string model_to_json(const KripkeModel& m);

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace musep

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "musep/model.hpp"

namespace musep {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TreePoolConfig {
  std::vector<std::string> actions;
  std::vector<std::string> props;
  std::uint32_t depth = 2;
  std::uint32_t branching = 2;  // total number of children per point
  /// Leaves may additionally carry self-loops on any subset of actions, which
  /// gives the pool regular infinite behaviour (lassos, loops).
  bool decorated = false;
  std::uint64_t budget = 2'000'000;
};

/// All trees up to isomorphism within the bounds, in a canonical order:
/// by depth, then color, then the sorted multiset of (child, action).
///
/// Trees share subtrees: the pool is one Kripke graph in which point i is the
/// root of entry i, so evaluating a formula once over graph() decides it for
/// every entry.
class TreePool {
 public:
  explicit TreePool(TreePoolConfig config);

  /// Number of entries the configuration produces (saturating).
  static std::uint64_t count(const TreePoolConfig& config);

  std::size_t size() const { return graph_.size(); }
  const KripkeModel& graph() const { return graph_; }
  const TreePoolConfig& config() const { return config_; }
  std::uint32_t depth(std::size_t i) const { return depth_[i]; }
  bool has_loops(std::size_t i) const { return loops_[i] != 0; }

  /// Entry i as a standalone model (reachable part, rooted at the entry).
  KripkeModel entry(std::size_t i) const;

 private:
  TreePoolConfig config_;
  KripkeModel graph_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> loops_;
};

}  // namespace musep

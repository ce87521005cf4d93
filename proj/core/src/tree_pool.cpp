#include "musep/tree_pool.hpp"

#include <limits>

namespace musep {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kMax / b ? kMax : a * b;
}
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; }

// multisets of size s from n kinds
std::uint64_t multichoose(std::uint64_t n, std::uint64_t s) {
  if (s == 0) return 1;
  if (n == 0) return 0;
  // C(n+s-1, s) computed incrementally; exact while it fits
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= s; ++i) {
    auto num = n + i - 1;
    if (r > kMax / num) return kMax;
    r = r * num / i;
  }
  return r;
}

std::uint64_t leaf_count(const TreePoolConfig& c) {
  std::uint64_t colors = std::uint64_t{1} << c.props.size();
  std::uint64_t loops = c.decorated ? (std::uint64_t{1} << c.actions.size()) : 1;
  return colors * loops;
}

}  // namespace

std::uint64_t TreePool::count(const TreePoolConfig& c) {
  std::uint64_t colors = std::uint64_t{1} << c.props.size();
  std::uint64_t total = leaf_count(c);
  std::uint64_t below = total;  // entries of depth <= k-1
  std::uint64_t before = 0;     // entries of depth <= k-2
  for (std::uint32_t k = 1; k <= c.depth; ++k) {
    auto opts_all = sat_mul(below, c.actions.size());
    auto opts_old = sat_mul(before, c.actions.size());
    std::uint64_t level = 0;
    for (std::uint32_t s = 1; s <= c.branching; ++s) {
      auto all = multichoose(opts_all, s);
      auto old = multichoose(opts_old, s);
      level = sat_add(level, all == kMax ? kMax : all - old);
    }
    level = sat_mul(level, colors);
    before = below;
    below = sat_add(below, level);
    total = below;
  }
  return total;
}

TreePool::TreePool(TreePoolConfig config) : config_(std::move(config)) {
  auto n = count(config_);
  if (n > config_.budget)
    throw BudgetError("tree enumeration needs " + (n == kMax ? std::string("too many") : std::to_string(n)) +
                      " trees, budget is " + std::to_string(config_.budget));
  graph_.actions = config_.actions;
  graph_.props = config_.props;
  Color colors = Color{1} << config_.props.size();
  std::uint32_t loop_sets = config_.decorated ? (1u << config_.actions.size()) : 1;
  for (Color c = 0; c < colors; ++c) {
    for (std::uint32_t l = 0; l < loop_sets; ++l) {
      auto v = graph_.add_point(c);
      for (std::uint32_t a = 0; a < config_.actions.size(); ++a)
        if ((l >> a) & 1) graph_.add_edge(v, a, v);
      depth_.push_back(0);
      loops_.push_back(l);
    }
  }
  std::size_t below = graph_.size();
  std::size_t before = 0;
  std::uint32_t na = static_cast<std::uint32_t>(config_.actions.size());
  for (std::uint32_t k = 1; k <= config_.depth; ++k) {
    // option o = child * na + action, children of depth <= k-1
    std::size_t opts = below * na;
    std::size_t first_new = before * na;  // options whose child has depth k-1
    std::vector<std::size_t> pick;
    std::vector<std::vector<std::size_t>> multisets;
    for (std::uint32_t s = 1; s <= config_.branching; ++s) {
      pick.assign(s, 0);
      if (opts == 0) break;
      while (true) {
        if (pick.back() >= first_new) multisets.push_back(pick);
        // next non-decreasing sequence
        std::int64_t i = static_cast<std::int64_t>(s) - 1;
        while (i >= 0 && pick[i] == opts - 1) --i;
        if (i < 0) break;
        ++pick[i];
        for (std::size_t j = i + 1; j < s; ++j) pick[j] = pick[i];
      }
    }
    for (Color c = 0; c < colors; ++c) {
      for (const auto& ms : multisets) {
        auto v = graph_.add_point(c);
        for (auto o : ms) graph_.add_edge(v, static_cast<std::uint32_t>(o % na), static_cast<Point>(o / na));
        depth_.push_back(k);
        loops_.push_back(0);
      }
    }
    before = below;
    below = graph_.size();
  }
}

KripkeModel TreePool::entry(std::size_t i) const {
  KripkeModel m = graph_;
  m.root = static_cast<Point>(i);
  return m.reachable();
}

}  // namespace musep

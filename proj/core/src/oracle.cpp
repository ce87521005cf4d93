#include "musep/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "musep/automata.hpp"
#include "musep/tree_pool.hpp"

namespace musep {

OracleResult brute_force_condition_iv(const Formula& f, const Formula& g, std::uint64_t n,
                                      const OracleOptions& options) {
  std::vector<Formula> fs{f, g};
  if (options.ontology) fs.push_back(*options.ontology);
  auto alpha = joint_alphabet(fs, options.model_class, options.hint);
  auto theta = class_constraint(options.model_class, alpha.actions, options.ontology);

  auto nf = normalize(Formula::conj(theta, f));
  auto ng = normalize(Formula::conj(theta, g));
  const std::uint32_t max_branching = is_word_class(options.model_class) ? 1 : options.branching;

  // Wide pools are shallow; narrower ones reach deeper within the same budget.
  OracleResult r;
  bool any = false;
  for (std::uint32_t k = max_branching; k >= 1; --k) {
    TreePoolConfig cfg;
    cfg.actions = alpha.actions;
    cfg.props = alpha.props;
    cfg.branching = k;
    cfg.decorated = options.decorated;
    cfg.budget = options.budget;
    cfg.depth = static_cast<std::uint32_t>(n + options.depth_extra);
    while (cfg.depth > n && TreePool::count(cfg) > cfg.budget) --cfg.depth;
    if (TreePool::count(cfg) > cfg.budget) continue;
    any = true;

    TreePool pool(cfg);
    r.depth = std::max(r.depth, cfg.depth);
    r.trees += pool.size();
    const auto& m = pool.graph();
    auto sf = satisfying_points(m, nf);
    auto sg = satisfying_points(m, ng);
    auto cls = bisimulation_classes(m, n);

    std::unordered_map<std::uint32_t, Point> first_f;
    for (Point i = 0; i < m.size(); ++i)
      if (sf.test(i)) first_f.emplace(cls[i], i);
    for (Point j = 0; j < m.size(); ++j) {
      if (!sg.test(j)) continue;
      auto it = first_f.find(cls[j]);
      if (it == first_f.end()) continue;
      r.separable = false;
      r.witness.emplace(pool.entry(it->second), pool.entry(j));
      return r;
    }
    if (!r.caveat.empty()) r.caveat += "; ";
    r.caveat += "depth <= " + std::to_string(cfg.depth) + " at branching <= " + std::to_string(k);
  }
  if (!any) throw BudgetError("oracle: depth " + std::to_string(n) + " exceeds the enumeration budget");
  r.caveat = "no witness among " + std::to_string(r.trees) + " trees (" + r.caveat + ")";
  return r;
}

// ---------------------------------------------------------------------------

TypeSpace::TypeSpace(std::vector<std::string> actions, std::vector<std::string> props, std::uint32_t n,
                     std::uint64_t max_types)
    : actions_(std::move(actions)), props_(std::move(props)), n_(n) {
  const Color colors = Color{1} << props_.size();
  const std::size_t na = actions_.size();
  levels_.emplace_back();
  for (Color c = 0; c < colors; ++c) levels_[0].push_back({c, std::vector<std::vector<std::uint32_t>>(na)});
  for (std::uint32_t k = 1; k <= n; ++k) {
    const auto below = levels_[k - 1].size();
    if (below >= 63) throw BudgetError("type space too large");
    const std::uint64_t subsets = std::uint64_t{1} << below;
    long double total = static_cast<long double>(colors);
    for (std::size_t a = 0; a < na; ++a) total *= static_cast<long double>(subsets);
    if (total > static_cast<long double>(max_types)) throw BudgetError("type space too large");
    std::vector<Type> level;
    // mixed radix: color, then one subset mask per action
    std::vector<std::uint64_t> masks(na, 0);
    for (Color c = 0; c < colors; ++c) {
      std::fill(masks.begin(), masks.end(), 0);
      while (true) {
        Type t{c, std::vector<std::vector<std::uint32_t>>(na)};
        for (std::size_t a = 0; a < na; ++a)
          for (std::uint32_t s = 0; s < below; ++s)
            if ((masks[a] >> s) & 1) t.children[a].push_back(s);
        level.push_back(std::move(t));
        std::size_t a = 0;
        while (a < na && ++masks[a] == subsets) masks[a++] = 0;
        if (a == na) break;
      }
    }
    levels_.push_back(std::move(level));
  }
}

Point TypeSpace::grow(KripkeModel& m, std::uint32_t level, std::uint32_t id) const {
  const auto& t = levels_[level][id];
  Point v = m.add_point(t.color);
  for (std::uint32_t a = 0; a < actions_.size(); ++a)
    for (auto s : t.children[a]) m.add_edge(v, a, grow(m, level - 1, s));
  return v;
}

KripkeModel TypeSpace::canonical_tree(std::uint32_t level, std::uint32_t id) const {
  KripkeModel m;
  m.actions = actions_;
  m.props = props_;
  m.root = grow(m, level, id);
  return m;
}

Formula TypeSpace::characteristic(std::uint32_t level, std::uint32_t id) const {
  const auto& t = levels_[level][id];
  std::vector<Formula> parts{Formula::color(t.color, props_)};
  if (level > 0) {
    for (std::uint32_t a = 0; a < actions_.size(); ++a) {
      std::vector<Formula> kids;
      for (auto s : t.children[a]) {
        kids.push_back(characteristic(level - 1, s));
        parts.push_back(Formula::diamond(actions_[a], kids.back()));
      }
      parts.push_back(Formula::box(actions_[a], Formula::disj(kids)));
    }
  }
  return Formula::conj(parts);
}

std::vector<bool> type_profile(const TypeSpace& space, const Formula& modal) {
  auto nf = normalize(modal);
  std::vector<bool> out(space.size());
  for (std::uint32_t t = 0; t < space.size(); ++t)
    out[t] = check_model(space.canonical_tree(space.depth(), t), nf);
  return out;
}

namespace {

// Points at depth `n` of a canonical tree (the ones whose successors are unconstrained).
std::vector<Point> open_leaves(const KripkeModel& m, std::uint64_t n) {
  std::vector<Point> layer{m.root};
  for (std::uint64_t d = 0; d < n; ++d) {
    std::vector<Point> next;
    for (auto v : layer)
      for (const auto& [a, w] : m.succ[v]) next.push_back(w);
    layer = std::move(next);
  }
  return layer;
}

}  // namespace

NaiveUniform naive_uniform_consequence(const Formula& f, std::uint64_t n, const Signature& sig,
                                       std::uint64_t max_types) {
  const auto& actions = sig.actions();
  const auto& props = sig.props();
  TypeSpace space(actions, props, static_cast<std::uint32_t>(n), max_types);
  auto nf = normalize(f);
  NaiveUniform out;
  out.consistent.assign(space.size(), false);
  const std::uint32_t na = static_cast<std::uint32_t>(actions.size());
  std::vector<Formula> disjuncts;

  for (std::uint32_t t = 0; t < space.size(); ++t) {
    auto tree = space.canonical_tree(space.depth(), t);
    bool found = check_model(tree, nf);
    if (!found) {
      auto open = open_leaves(tree, n);
      for (std::uint32_t mask = 1; !found && mask < (1u << na); ++mask) {
        auto ext = tree;
        for (auto v : open)
          for (std::uint32_t a = 0; a < na; ++a)
            if ((mask >> a) & 1) ext.add_edge(v, a, v);
        found = check_model(ext, nf);
      }
    }
    if (found) {
      ++out.by_enumeration;
    } else {
      ++out.by_automaton;
      auto chi = space.characteristic(space.depth(), t);
      auto a = compile(Formula::conj(f, chi), actions, props);
      auto e = analyze_emptiness(a);
      if (!e.empty(a)) {
        auto w = emptiness_witness(a, e, a.initial);
        if (!check_model(w, nf) || !n_bisimilar(w, tree, n))
          throw std::logic_error("naive uniform consequence: emptiness witness failed re-check");
        found = true;
      }
    }
    if (found) {
      out.consistent[t] = true;
      disjuncts.push_back(space.characteristic(space.depth(), t));
    }
  }
  out.formula = Formula::disj(disjuncts);
  return out;
}

}  // namespace musep

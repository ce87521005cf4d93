#include <algorithm>
#include <set>

#include "musep/synthesis.hpp"

namespace musep {

namespace {

struct Cube {
  Color val;
  Color mask;  // don't-care bits
  bool operator<(const Cube& o) const { return std::tie(mask, val) < std::tie(o.mask, o.val); }
  bool operator==(const Cube& o) const = default;
  bool covers(Color c) const { return (c & ~mask) == val; }
};

std::vector<Cube> prime_implicants(const std::vector<Color>& colors) {
  std::set<Cube> current;
  for (auto c : colors) current.insert({c, 0});
  std::set<Cube> primes;
  while (!current.empty()) {
    std::set<Cube> next;
    std::set<Cube> used;
    std::vector<Cube> v(current.begin(), current.end());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (v[i].mask != v[j].mask) continue;
        Color diff = v[i].val ^ v[j].val;
        if (diff == 0 || (diff & (diff - 1)) != 0) continue;
        next.insert({v[i].val & ~diff, v[i].mask | diff});
        used.insert(v[i]);
        used.insert(v[j]);
      }
    for (const auto& c : v)
      if (!used.count(c)) primes.insert(c);
    current = std::move(next);
  }
  return {primes.begin(), primes.end()};
}

std::vector<Cube> minimal_cover(const std::vector<Color>& colors) {
  auto primes = prime_implicants(colors);
  std::vector<Cube> chosen;
  std::set<Color> open(colors.begin(), colors.end());
  // essential primes
  for (auto c : colors) {
    const Cube* only = nullptr;
    int count = 0;
    for (const auto& p : primes)
      if (p.covers(c)) {
        ++count;
        only = &p;
      }
    if (count == 1 && std::find(chosen.begin(), chosen.end(), *only) == chosen.end()) chosen.push_back(*only);
  }
  for (const auto& p : chosen)
    for (auto it = open.begin(); it != open.end();) it = p.covers(*it) ? open.erase(it) : std::next(it);
  while (!open.empty()) {
    const Cube* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& p : primes) {
      std::size_t n = 0;
      for (auto c : open) n += p.covers(c);
      if (n > best_n) {
        best_n = n;
        best = &p;
      }
    }
    chosen.push_back(*best);
    for (auto it = open.begin(); it != open.end();) it = best->covers(*it) ? open.erase(it) : std::next(it);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

FormulaDag::Id color_set_formula(FormulaDag& dag, const std::vector<std::string>& props,
                                 const std::vector<Color>& colors) {
  std::vector<Color> cs = colors;
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  if (cs.empty()) return dag.bottom();
  const auto k = props.size();
  if (cs.size() == (std::size_t{1} << k)) return dag.top();
  std::vector<Cube> cubes;
  if (k <= 10) {
    cubes = minimal_cover(cs);
  } else {
    for (auto c : cs) cubes.push_back({c, 0});
  }
  std::vector<FormulaDag::Id> ds;
  for (const auto& cube : cubes) {
    std::vector<FormulaDag::Id> lits;
    for (std::size_t i = 0; i < k; ++i)
      if (!((cube.mask >> i) & 1)) lits.push_back(dag.literal(props[i], (cube.val >> i) & 1));
    ds.push_back(dag.conj(std::move(lits)));
  }
  return dag.disj(std::move(ds));
}

// ---------------------------------------------------------------------------

UniformBuilder::UniformBuilder(const Npta& a, FormulaDag& dag) : a_(a), dag_(dag), e_(analyze_emptiness(a)) {}

std::vector<UniformBuilder::General> UniformBuilder::generalize(std::vector<MoveSet> ts) const {
  const auto na = a_.actions.size();
  std::set<General> items;
  for (auto& t : ts) items.insert(General{std::move(t), std::vector<bool>(na, false)});
  if (a_.top) {
    for (std::uint32_t b = 0; b < na; ++b) {
      Move tm{b, *a_.top};
      std::set<General> merged, consumed;
      for (const auto& g : items) {
        if (g.free[b] || consumed.count(g)) continue;
        if (!std::binary_search(g.moves.begin(), g.moves.end(), tm)) continue;
        General partner = g;
        partner.moves.erase(std::lower_bound(partner.moves.begin(), partner.moves.end(), tm));
        if (!items.count(partner) || consumed.count(partner)) continue;
        consumed.insert(g);
        consumed.insert(partner);
        General m = g;
        m.free[b] = true;
        merged.insert(std::move(m));
      }
      for (const auto& g : consumed) items.erase(g);
      items.insert(merged.begin(), merged.end());
    }
  }
  return {items.begin(), items.end()};
}

FormulaDag::Id UniformBuilder::nabla(const General& g, std::uint64_t n) {
  std::vector<FormulaDag::Id> parts;
  for (std::uint32_t x = 0; x < a_.actions.size(); ++x) {
    const auto& act = a_.actions[x];
    std::vector<FormulaDag::Id> kids;
    bool has_top = false;
    for (const auto& [y, s] : g.moves) {
      if (y != x) continue;
      if (a_.top && s == *a_.top) {
        has_top = true;
        continue;
      }
      kids.push_back(psi(n, s));
    }
    for (auto k : kids) parts.push_back(dag_.diamond(act, k));
    if (g.free[x]) continue;
    if (has_top) {
      if (kids.empty()) parts.push_back(dag_.diamond(act, dag_.top()));
    } else {
      parts.push_back(dag_.box(act, dag_.disj(kids)));
    }
  }
  return dag_.conj(std::move(parts));
}

FormulaDag::Id UniformBuilder::psi(std::uint64_t n, std::uint32_t q) {
  if (a_.top && q == *a_.top) return dag_.top();
  if (!e_.nonempty[q]) return dag_.bottom();
  auto key = std::make_pair(n, q);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  FormulaDag::Id r;
  if (n == 0) {
    std::vector<Color> cs;
    for (Color c = 0; c < a_.num_colors(); ++c)
      if (e_.ne[q][c]) cs.push_back(c);
    r = color_set_formula(dag_, a_.props, cs);
  } else {
    std::map<FormulaDag::Id, std::vector<Color>> groups;
    for (Color c = 0; c < a_.num_colors(); ++c) {
      std::vector<MoveSet> live;
      for (const auto& s : a_.delta[q][c])
        if (std::all_of(s.begin(), s.end(), [&](const Move& m) { return e_.nonempty[m.second]; })) live.push_back(s);
      for (const auto& g : generalize(std::move(live))) {
        auto part = nabla(g, n - 1);
        if (part == dag_.bottom()) continue;
        auto& v = groups[part];
        if (v.empty() || v.back() != c) v.push_back(c);
      }
    }
    std::vector<FormulaDag::Id> ds;
    for (const auto& [part, cs] : groups) ds.push_back(dag_.conj(color_set_formula(dag_, a_.props, cs), part));
    r = dag_.disj(std::move(ds));
  }
  memo_.emplace(key, r);
  return r;
}

// ---------------------------------------------------------------------------

WordUniformBuilder::WordUniformBuilder(const Npta& a, FormulaDag& dag) : a_(a), dag_(dag), e_(analyze_emptiness(a)) {
  if (a.actions.size() != 1) throw std::invalid_argument("word construction needs exactly one action");
  action_ = a.actions[0];
  succ_.assign(a.size(), std::vector<std::vector<std::uint32_t>>(a.num_colors()));
  for (std::uint32_t p = 0; p < a.size(); ++p)
    for (Color c = 0; c < a.num_colors(); ++c) {
      auto& v = succ_[p][c];
      for (const auto& s : a.delta[p][c])
        if (s.size() == 1) v.push_back(s[0].second);
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

const std::vector<std::uint32_t>& WordUniformBuilder::reach(std::uint64_t m, std::uint32_t p) {
  auto key = std::make_pair(m, p);
  auto it = reach_.find(key);
  if (it != reach_.end()) return it->second;
  std::vector<std::uint32_t> r;
  if (m == 0) {
    r = {p};
  } else if (m == 1) {
    for (const auto& v : succ_[p]) r.insert(r.end(), v.begin(), v.end());
  } else {
    auto h = m / 2;
    auto mid = reach(h, p);
    for (auto q : mid) {
      const auto& tail = reach(m - h, q);
      r.insert(r.end(), tail.begin(), tail.end());
    }
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return reach_.emplace(key, std::move(r)).first->second;
}

FormulaDag::Id WordUniformBuilder::run(std::uint64_t m, std::uint32_t p, std::uint32_t q) {
  if (m == 0) return p == q ? dag_.top() : dag_.bottom();
  auto key = std::make_tuple(m, p, q);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  FormulaDag::Id r;
  if (m == 1) {
    std::vector<Color> cs;
    for (Color c = 0; c < a_.num_colors(); ++c)
      if (std::binary_search(succ_[p][c].begin(), succ_[p][c].end(), q)) cs.push_back(c);
    r = color_set_formula(dag_, a_.props, cs);
  } else {
    auto h = m / 2;
    std::vector<FormulaDag::Id> ds;
    auto mid = reach(h, p);
    for (auto q2 : mid) {
      const auto& tail = reach(m - h, q2);
      if (!std::binary_search(tail.begin(), tail.end(), q)) continue;
      auto left = run(h, p, q2);
      auto right = run(m - h, q2, q);
      ds.push_back(dag_.conj(left, dag_.diamonds(action_, h, right)));
    }
    r = dag_.disj(std::move(ds));
  }
  memo_.emplace(key, r);
  return r;
}

FormulaDag::Id WordUniformBuilder::build(std::uint64_t n) {
  auto init = a_.initial;
  std::vector<FormulaDag::Id> ds;
  std::vector<std::uint32_t> layer{init};
  auto colors_where = [&](std::uint32_t q, bool leaf) {
    std::vector<Color> cs;
    for (Color c = 0; c < a_.num_colors(); ++c) {
      bool ok = leaf ? std::any_of(a_.delta[q][c].begin(), a_.delta[q][c].end(), [](const MoveSet& s) { return s.empty(); })
                     : static_cast<bool>(e_.ne[q][c]);
      if (ok) cs.push_back(c);
    }
    return cs;
  };
  for (std::uint64_t m = 0; m < n; ++m) {
    for (auto q : layer) {
      auto acc = colors_where(q, true);
      if (acc.empty()) continue;
      auto end = dag_.conj(color_set_formula(dag_, a_.props, acc), dag_.box(action_, dag_.bottom()));
      ds.push_back(dag_.conj(run(m, init, q), dag_.diamonds(action_, m, end)));
    }
    std::vector<std::uint32_t> next;
    for (auto q : layer)
      for (const auto& v : succ_[q]) next.insert(next.end(), v.begin(), v.end());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    layer = std::move(next);
  }
  for (auto q : layer) {
    auto cont = colors_where(q, false);
    if (cont.empty()) continue;
    ds.push_back(dag_.conj(run(n, init, q), dag_.diamonds(action_, n, color_set_formula(dag_, a_.props, cont))));
  }
  return dag_.disj(std::move(ds));
}

// ---------------------------------------------------------------------------

FormulaDag uniform_consequence(const Npta& a, std::uint64_t n) {
  FormulaDag dag;
  UniformBuilder b(a, dag);
  dag.set_root(b.psi(n, a.initial));
  return dag.compacted();
}

FormulaDag uniform_consequence_words(const Npta& a, std::uint64_t n) {
  FormulaDag dag;
  WordUniformBuilder b(a, dag);
  dag.set_root(b.build(n));
  return dag.compacted();
}

FormulaDag uniform_consequence_of(const Formula& f, std::uint64_t n, ModelClass c,
                                  const std::optional<Formula>& ontology, const Signature& hint) {
  std::vector<Formula> fs{f};
  if (ontology) fs.push_back(*ontology);
  auto alpha = joint_alphabet(fs, c, hint);
  auto rel = normalize(Formula::conj(class_constraint(c, alpha.actions, ontology), f));
  bool words = is_word_class(c);
  auto a = compile(rel, alpha.actions, alpha.props, words);
  return words ? uniform_consequence_words(a, n) : uniform_consequence(a, n);
}

}  // namespace musep

#include <algorithm>
#include <deque>
#include <map>

#include "musep/automata.hpp"
#include "musep/tree_pool.hpp"

namespace musep {

namespace {

// atom of a combined clause; `tag` marks atoms owed by the obligation set
struct TAtom {
  Apta::Atom atom;
  bool tag = false;
  bool operator<(const TAtom& o) const { return atom < o.atom; }
};
using TClause = std::vector<TAtom>;

TClause merge(const TClause& a, const TClause& b) {
  TClause out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].atom < b[j].atom)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].atom < a[i].atom) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].atom, a[i].tag || b[j].tag});
      ++i;
      ++j;
    }
  }
  return out;
}

// a is at most as demanding as b
bool weaker(const TClause& a, const TClause& b) {
  std::size_t j = 0;
  for (const auto& x : a) {
    while (j < b.size() && b[j].atom < x.atom) ++j;
    if (j == b.size() || b[j].atom != x.atom) return false;
    if (x.tag && !b[j].tag) return false;
  }
  return true;
}

std::vector<TClause> prune(std::vector<TClause> cs) {
  auto key = [](const TClause& c) {
    std::vector<std::tuple<bool, std::uint32_t, std::uint32_t, bool>> k;
    for (const auto& t : c) k.emplace_back(t.atom.universal, t.atom.action, t.atom.state, t.tag);
    return k;
  };
  std::sort(cs.begin(), cs.end(), [&](const TClause& a, const TClause& b) {
    return a.size() != b.size() ? a.size() < b.size() : key(a) < key(b);
  });
  std::vector<TClause> kept;
  for (auto& c : cs) {
    bool dominated = false;
    for (const auto& k : kept)
      if (k.size() <= c.size() && weaker(k, c)) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(std::move(c));
  }
  return kept;
}

// set partitions of {0..n-1} as restricted growth strings
std::vector<std::vector<std::uint32_t>> partitions(std::uint32_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  if (n == 0) return {{}};
  std::vector<std::uint32_t> a(n, 0), mx(n, 0);
  while (true) {
    out.push_back(a);
    std::int64_t i = static_cast<std::int64_t>(n) - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i <= 0) break;
    ++a[i];
    for (std::size_t j = i + 1; j < n; ++j) a[j] = 0;
    for (std::size_t j = i; j < n; ++j) mx[j] = std::max(j ? mx[j - 1] : 0u, a[j]);
  }
  return out;
}

struct Label {
  std::vector<std::uint32_t> states;
  std::vector<std::uint32_t> tagged;
};

class Dealternator {
 public:
  Dealternator(const Apta& a, const DealternationOptions& opt) : a_(a), opt_(opt) {
    out_.actions = a.actions();
    out_.props = a.props();
    if (opt.words && a.actions().size() != 1)
      throw FormulaError("word automata need exactly one action");
  }

  Npta run() {
    std::vector<std::uint32_t> s0{a_.initial()};
    std::vector<std::uint32_t> o0;
    if (a_.priority(a_.initial()) == 1) o0 = s0;
    out_.initial = intern(s0, o0);
    while (!queue_.empty()) {
      auto id = queue_.front();
      queue_.pop_front();
      for (Color c = 0; c < out_.num_colors(); ++c) out_.delta[id][c] = transitions(id, c);
    }
    return std::move(out_);
  }

 private:
  std::uint32_t intern(std::vector<std::uint32_t> s, std::vector<std::uint32_t> o) {
    auto key = std::make_pair(std::move(s), std::move(o));
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (macros_.size() >= opt_.max_states)
      throw BudgetError("dealternation exceeds " + std::to_string(opt_.max_states) + " states");
    std::string label = "{";
    for (std::size_t i = 0; i < key.first.size(); ++i) label += (i ? "," : "") + std::to_string(key.first[i]);
    label += "}";
    if (!key.second.empty()) {
      label += "|{";
      for (std::size_t i = 0; i < key.second.size(); ++i) label += (i ? "," : "") + std::to_string(key.second[i]);
      label += "}";
    }
    auto id = out_.add_state(key.second.empty() ? 2 : 1, std::move(label));
    if (key.first.empty()) out_.top = id;
    macros_.push_back(key);
    ids_.emplace(std::move(key), id);
    queue_.push_back(id);
    return id;
  }

  std::uint32_t child(const Label& l, bool obligations_pending) {
    std::vector<std::uint32_t> s = l.states;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<std::uint32_t> o;
    const auto& base = obligations_pending ? l.tagged : s;
    for (auto q : base)
      if (a_.priority(q) == 1) o.push_back(q);
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    return intern(std::move(s), std::move(o));
  }

  std::vector<MoveSet> transitions(std::uint32_t id, Color c) {
    const auto [s, o] = macros_[id];
    bool pending = !o.empty();
    std::vector<TClause> combined{TClause{}};
    for (auto q : s) {
      const auto& d = a_.dnf(q, c);
      if (d.empty()) return {};
      bool tag = pending && std::binary_search(o.begin(), o.end(), q);
      std::vector<TClause> next;
      for (const auto& x : combined)
        for (const auto& cl : d) {
          TClause y;
          for (const auto& at : cl) y.push_back({at, tag});
          next.push_back(merge(x, y));
        }
      if (next.size() > 200'000) throw BudgetError("dealternation clause product too large");
      combined = prune(std::move(next));
    }
    const auto na = static_cast<std::uint32_t>(out_.actions.size());
    std::vector<MoveSet> result;
    for (const auto& cl : combined) {
      // per action: alternatives, each a list of child labels
      std::vector<std::vector<std::vector<Label>>> per_action(na);
      for (std::uint32_t act = 0; act < na; ++act) {
        std::vector<TAtom> ex;
        Label u;
        for (const auto& t : cl) {
          if (t.atom.action != act) continue;
          if (t.atom.universal) {
            u.states.push_back(t.atom.state);
            if (t.tag) u.tagged.push_back(t.atom.state);
          } else {
            ex.push_back(t);
          }
        }
        auto& alts = per_action[act];
        if (ex.empty()) {
          alts.push_back({});
          alts.push_back({u});
          continue;
        }
        auto parts = opt_.words ? std::vector<std::vector<std::uint32_t>>{std::vector<std::uint32_t>(ex.size(), 0)}
                                : partitions(static_cast<std::uint32_t>(ex.size()));
        for (const auto& p : parts) {
          std::uint32_t blocks = p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
          std::vector<Label> children(blocks, u);
          for (std::size_t i = 0; i < ex.size(); ++i) {
            children[p[i]].states.push_back(ex[i].atom.state);
            if (ex[i].tag) children[p[i]].tagged.push_back(ex[i].atom.state);
          }
          alts.push_back(children);
          if (!opt_.words) {
            children.push_back(u);
            alts.push_back(std::move(children));
          }
        }
      }
      // cartesian product over actions
      std::vector<std::size_t> pick(na, 0);
      while (true) {
        MoveSet ms;
        std::size_t elements = 0;
        for (std::uint32_t act = 0; act < na; ++act)
          for (const auto& l : per_action[act][pick[act]]) {
            ms.emplace_back(act, child(l, pending));
            ++elements;
          }
        if (!opt_.words || elements <= 1) {
          std::sort(ms.begin(), ms.end());
          ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
          result.push_back(std::move(ms));
        }
        std::uint32_t i = 0;
        while (i < na && ++pick[i] == per_action[i].size()) pick[i++] = 0;
        if (i == na) break;
      }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
  }

  const Apta& a_;
  DealternationOptions opt_;
  Npta out_;
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> macros_;
  std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>, std::uint32_t> ids_;
  std::deque<std::uint32_t> queue_;
};

}  // namespace

Npta dealternate(const Apta& a, const DealternationOptions& options) { return Dealternator(a, options).run(); }

Npta compile(const Formula& f, const std::vector<std::string>& actions, const std::vector<std::string>& props,
             bool words) {
  auto n = normalize(f);
  require_alternation_free(n);
  auto apta = Apta::from_formula(n, actions, props);
  DealternationOptions opt;
  opt.words = words;
  return dealternate(apta, opt);
}

}  // namespace musep

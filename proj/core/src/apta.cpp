#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "musep/automata.hpp"
#include "musep/tree_pool.hpp"

namespace musep {

namespace {

constexpr std::size_t kMaxClauses = 200'000;

using Clause = Apta::Clause;

std::vector<Clause> prune(std::vector<Clause> cs) {
  std::sort(cs.begin(), cs.end(), [](const Clause& a, const Clause& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<Clause> kept;
  for (auto& c : cs) {
    bool dominated = false;
    for (const auto& k : kept)
      if (k.size() <= c.size() && std::includes(c.begin(), c.end(), k.begin(), k.end())) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(std::move(c));
  }
  return kept;
}

std::vector<Clause> conj(const std::vector<Clause>& a, const std::vector<Clause>& b) {
  std::vector<Clause> out;
  if (a.size() * b.size() > kMaxClauses) throw BudgetError("transition formula too large for DNF");
  for (const auto& x : a)
    for (const auto& y : b) {
      Clause c;
      std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(c));
      out.push_back(std::move(c));
    }
  return prune(std::move(out));
}

}  // namespace

Apta Apta::from_formula(const Formula& f, std::vector<std::string> actions, std::vector<std::string> props) {
  Apta a;
  a.actions_ = std::move(actions);
  a.props_ = std::move(props);
  if (a.props_.size() > 24) throw FormulaError("too many propositions for an automaton (" +
                                               std::to_string(a.props_.size()) + ")");
  a.dag_ = FormulaDag::from_formula(f);
  const auto& dag = a.dag_;

  // binders and free variables
  std::unordered_map<std::string, Kind> binder_kind;
  std::unordered_map<std::string, FormulaDag::Id> binder_node;
  for (FormulaDag::Id i = 0; i < dag.size(); ++i) {
    const auto& n = dag.node(i);
    if (n.kind == Kind::Mu || n.kind == Kind::Nu) {
      binder_kind[n.name] = n.kind;
      binder_node[n.name] = i;
      a.binder_body_[n.name] = n.children[0];
    }
    if (n.kind == Kind::Not) throw FormulaError("automaton construction needs negation normal form");
    if (n.kind == Kind::Prop || n.kind == Kind::NegProp) {
      if (std::find(a.props_.begin(), a.props_.end(), n.name) == a.props_.end())
        throw FormulaError("proposition '" + n.name + "' is not in the automaton alphabet");
    }
    if (n.kind == Kind::Diamond || n.kind == Kind::Box) {
      if (std::find(a.actions_.begin(), a.actions_.end(), n.name) == a.actions_.end())
        throw FormulaError("action '" + n.name + "' is not in the automaton alphabet");
    }
  }
  std::vector<std::vector<std::string>> free(dag.size());
  for (FormulaDag::Id i = 0; i < dag.size(); ++i) {
    const auto& n = dag.node(i);
    std::set<std::string> s;
    if (n.kind == Kind::Var) s.insert(n.name);
    for (auto c : n.children) s.insert(free[c].begin(), free[c].end());
    if (n.kind == Kind::Mu || n.kind == Kind::Nu) s.erase(n.name);
    free[i].assign(s.begin(), s.end());
  }

  // a variable is the same closure member as its binder
  std::function<std::uint32_t(FormulaDag::Id)> state = [&](FormulaDag::Id n) -> std::uint32_t {
    auto it = a.state_of_.find(n);
    if (it != a.state_of_.end()) return it->second;
    if (dag.node(n).kind == Kind::Var) {
      auto b = binder_node.find(dag.node(n).name);
      if (b == binder_node.end()) throw FormulaError("unbound variable '" + dag.node(n).name + "'");
      auto q = state(b->second);
      a.state_of_.emplace(n, q);
      return q;
    }
    auto q = static_cast<std::uint32_t>(a.node_of_.size());
    a.state_of_.emplace(n, q);
    a.node_of_.push_back(n);
    int prio = dag.node(n).kind == Kind::Mu ? 1 : 2;
    for (const auto& x : free[n]) {
      auto k = binder_kind.find(x);
      if (k != binder_kind.end() && k->second == Kind::Mu) prio = 1;
    }
    a.priority_.push_back(prio);
    return q;
  };
  state(dag.root());
  for (std::size_t q = 0; q < a.node_of_.size(); ++q) {
    std::vector<bool> seen(dag.size(), false);
    std::vector<FormulaDag::Id> stack{a.node_of_[q]};
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (seen[n]) continue;
      seen[n] = true;
      const auto& node = dag.node(n);
      switch (node.kind) {
        case Kind::Diamond:
        case Kind::Box:
          state(node.children[0]);
          break;
        case Kind::Var: {
          auto it = a.binder_body_.find(node.name);
          if (it == a.binder_body_.end()) throw FormulaError("unbound variable '" + node.name + "'");
          stack.push_back(it->second);
          break;
        }
        default:
          for (auto c : node.children) stack.push_back(c);
      }
    }
  }
  return a;
}

const std::vector<Clause>& Apta::node_dnf(FormulaDag::Id n, Color c) const {
  std::uint64_t key = (std::uint64_t{n} << 32) | c;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const auto& node = dag_.node(n);
  std::vector<Clause> r;
  auto prop_holds = [&](const std::string& p) {
    auto i = std::find(props_.begin(), props_.end(), p) - props_.begin();
    return ((c >> i) & 1) != 0;
  };
  auto action_index = [&](const std::string& x) {
    return static_cast<std::uint32_t>(std::find(actions_.begin(), actions_.end(), x) - actions_.begin());
  };
  switch (node.kind) {
    case Kind::True:
      r = {Clause{}};
      break;
    case Kind::False:
      break;
    case Kind::Prop:
      if (prop_holds(node.name)) r = {Clause{}};
      break;
    case Kind::NegProp:
      if (!prop_holds(node.name)) r = {Clause{}};
      break;
    case Kind::And: {
      r = {Clause{}};
      for (auto ch : node.children) {
        const auto& d = node_dnf(ch, c);
        if (d.empty()) {
          r.clear();
          break;
        }
        r = conj(r, d);
      }
      break;
    }
    case Kind::Or: {
      for (auto ch : node.children) {
        const auto& d = node_dnf(ch, c);
        r.insert(r.end(), d.begin(), d.end());
      }
      r = prune(std::move(r));
      break;
    }
    case Kind::Diamond:
    case Kind::Box:
      r = {Clause{Atom{node.kind == Kind::Box, action_index(node.name), state_of_.at(node.children[0])}}};
      break;
    case Kind::Mu:
    case Kind::Nu:
      r = node_dnf(node.children[0], c);
      break;
    case Kind::Var:
      r = node_dnf(binder_body_.at(node.name), c);
      break;
    default:
      throw FormulaError("unexpected node in automaton construction");
  }
  return memo_.emplace(key, std::move(r)).first->second;
}

const std::vector<Clause>& Apta::dnf(std::uint32_t q, Color c) const { return node_dnf(node_of_[q], c); }

std::string Apta::state_formula(std::uint32_t q) const { return dag_.to_formula(node_of_[q]).to_string(); }

std::string Apta::transition_text(std::uint32_t q, Color c) const {
  const auto& d = dnf(q, c);
  if (d.empty()) return "false";
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += " | ";
    if (d[i].empty()) {
      out += "true";
      continue;
    }
    if (d.size() > 1 && d[i].size() > 1) out += "(";
    for (std::size_t j = 0; j < d[i].size(); ++j) {
      const auto& at = d[i][j];
      if (j) out += " & ";
      out += at.universal ? "[" : "<";
      out += actions_[at.action];
      out += at.universal ? "]" : ">";
      out += "q" + std::to_string(at.state);
    }
    if (d.size() > 1 && d[i].size() > 1) out += ")";
  }
  return out;
}

}  // namespace musep

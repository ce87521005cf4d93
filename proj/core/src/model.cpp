#include "musep/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "json.hpp"

namespace musep {

Point KripkeModel::add_point(Color c) {
  valuation.push_back(c);
  succ.emplace_back();
  if (!names.empty()) names.push_back("v" + std::to_string(valuation.size() - 1));
  return static_cast<Point>(valuation.size() - 1);
}

void KripkeModel::add_edge(Point from, std::uint32_t action, Point to) { succ[from].emplace_back(action, to); }

std::uint32_t KripkeModel::action_id(const std::string& a) {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == a) return static_cast<std::uint32_t>(i);
  actions.push_back(a);
  return static_cast<std::uint32_t>(actions.size() - 1);
}

std::uint32_t KripkeModel::prop_id(const std::string& p) {
  for (std::size_t i = 0; i < props.size(); ++i)
    if (props[i] == p) return static_cast<std::uint32_t>(i);
  if (props.size() >= 63) throw ModelError("too many propositions in model");
  props.push_back(p);
  return static_cast<std::uint32_t>(props.size() - 1);
}

bool KripkeModel::holds(Point v, std::string_view prop) const {
  for (std::size_t i = 0; i < props.size(); ++i)
    if (props[i] == prop) return (valuation[v] >> i) & 1;
  return false;
}

Color KripkeModel::color_over(Point v, const std::vector<std::string>& universe) const {
  Color c = 0;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (holds(v, universe[i])) c |= Color{1} << i;
  return c;
}

std::vector<std::string> KripkeModel::point_props(Point v) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < props.size(); ++i)
    if ((valuation[v] >> i) & 1) out.push_back(props[i]);
  return out;
}

bool KripkeModel::is_acyclic() const {
  std::vector<int> state(size(), 0);
  std::function<bool(Point)> dfs = [&](Point v) {
    state[v] = 1;
    for (auto [a, w] : succ[v]) {
      if (state[w] == 1) return false;
      if (state[w] == 0 && !dfs(w)) return false;
    }
    state[v] = 2;
    return true;
  };
  return dfs(root);
}

bool KripkeModel::is_tree() const {
  if (!is_acyclic()) return false;
  std::vector<int> indeg(size(), 0);
  std::vector<bool> seen(size(), false);
  std::deque<Point> q{root};
  seen[root] = true;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto [a, w] : succ[v]) {
      if (++indeg[w] > 1) return false;
      if (!seen[w]) {
        seen[w] = true;
        q.push_back(w);
      }
    }
  }
  return indeg[root] == 0;
}

std::uint64_t KripkeModel::height() const {
  std::vector<std::int64_t> h(size(), -1);
  std::function<std::uint64_t(Point)> go = [&](Point v) -> std::uint64_t {
    if (h[v] >= 0) return static_cast<std::uint64_t>(h[v]);
    std::uint64_t best = 0;
    for (auto [a, w] : succ[v]) best = std::max(best, go(w) + 1);
    h[v] = static_cast<std::int64_t>(best);
    return best;
  };
  if (!is_acyclic()) throw ModelError("height of a cyclic model");
  return go(root);
}

KripkeModel KripkeModel::reachable() const {
  KripkeModel out;
  out.actions = actions;
  out.props = props;
  std::vector<std::int64_t> map(size(), -1);
  std::deque<Point> q{root};
  map[root] = 0;
  std::vector<Point> order{root};
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto [a, w] : succ[v]) {
      if (map[w] < 0) {
        map[w] = static_cast<std::int64_t>(order.size());
        order.push_back(w);
        q.push_back(w);
      }
    }
  }
  for (auto v : order) {
    out.valuation.push_back(valuation[v]);
    out.succ.emplace_back();
    if (!names.empty()) out.names.push_back(names[v]);
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto [a, w] : succ[order[i]]) out.succ[i].emplace_back(a, static_cast<Point>(map[w]));
  out.root = 0;
  return out;
}

KripkeModel WordModel::to_kripke(const std::string& action) const {
  KripkeModel m;
  m.props = props;
  m.actions = {action};
  Point prev = 0;
  bool first = true;
  auto push = [&](Color c) {
    auto v = m.add_point(c);
    if (!first) m.add_edge(prev, 0, v);
    first = false;
    prev = v;
    return v;
  };
  for (auto c : prefix) push(c);
  if (!loop.empty()) {
    Point loop_start = 0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      auto v = push(loop[i]);
      if (i == 0) loop_start = v;
    }
    m.add_edge(prev, 0, loop_start);
  }
  if (m.size() == 0) throw ModelError("empty word");
  m.root = 0;
  return m;
}

// ---------------------------------------------------------------------------
// Model checking

namespace {

class Checker {
 public:
  explicit Checker(const KripkeModel& m) : m_(m), n_(m.size()) {}

  Bitset eval(const Formula& f) {
    bool closed = free_vars(f).empty();
    if (closed) {
      auto it = memo_.find(f.id());
      if (it != memo_.end()) return it->second;
    }
    Bitset r = compute(f);
    if (closed) memo_.emplace(f.id(), r);
    return r;
  }

 private:
  Bitset compute(const Formula& f) {
    switch (f.kind()) {
      case Kind::True: return Bitset(n_, true);
      case Kind::False: return Bitset(n_, false);
      case Kind::Prop:
      case Kind::NegProp: {
        Bitset r(n_);
        std::int64_t idx = -1;
        for (std::size_t i = 0; i < m_.props.size(); ++i)
          if (m_.props[i] == f.name()) idx = static_cast<std::int64_t>(i);
        for (std::size_t v = 0; v < n_; ++v) {
          bool h = idx >= 0 && ((m_.valuation[v] >> idx) & 1);
          r.assign(v, h == (f.kind() == Kind::Prop));
        }
        return r;
      }
      case Kind::Not: return ~eval(f.child());
      case Kind::And: {
        Bitset r(n_, true);
        for (const auto& c : f.children()) r &= eval(c);
        return r;
      }
      case Kind::Or: {
        Bitset r(n_);
        for (const auto& c : f.children()) r |= eval(c);
        return r;
      }
      case Kind::Diamond:
      case Kind::Box: {
        auto s = eval(f.child());
        std::int64_t a = -1;
        for (std::size_t i = 0; i < m_.actions.size(); ++i)
          if (m_.actions[i] == f.name()) a = static_cast<std::int64_t>(i);
        bool dia = f.kind() == Kind::Diamond;
        Bitset r(n_);
        for (std::size_t v = 0; v < n_; ++v) {
          bool val = !dia;
          for (auto [act, w] : m_.succ[v]) {
            if (static_cast<std::int64_t>(act) != a) continue;
            if (dia && s.test(w)) {
              val = true;
              break;
            }
            if (!dia && !s.test(w)) {
              val = false;
              break;
            }
          }
          r.assign(v, val);
        }
        return r;
      }
      case Kind::Var: {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
          if (it->first == f.name()) return it->second;
        throw FormulaError("free variable '" + f.name() + "' in model checking");
      }
      case Kind::Mu:
      case Kind::Nu: {
        Bitset x(n_, f.kind() == Kind::Nu);
        env_.emplace_back(f.name(), x);
        std::size_t slot = env_.size() - 1;
        while (true) {
          auto next = eval(f.child());
          if (next == env_[slot].second) break;
          env_[slot].second = std::move(next);
        }
        auto r = env_[slot].second;
        env_.pop_back();
        return r;
      }
      default:
        throw FormulaError("model checking needs a normalized formula (found '" + std::string(kind_name(f.kind())) +
                           "')");
    }
  }

  const std::set<std::string>& free_vars(const Formula& f) {
    auto it = free_.find(f.id());
    if (it != free_.end()) return it->second;
    std::set<std::string> s;
    if (f.kind() == Kind::Var) {
      s.insert(f.name());
    } else {
      for (const auto& c : f.children()) {
        const auto& cs = free_vars(c);
        s.insert(cs.begin(), cs.end());
      }
      if (f.is_fixpoint()) s.erase(f.name());
    }
    return free_.emplace(f.id(), std::move(s)).first->second;
  }

  const KripkeModel& m_;
  std::size_t n_;
  std::unordered_map<const void*, Bitset> memo_;
  std::unordered_map<const void*, std::set<std::string>> free_;
  std::vector<std::pair<std::string, Bitset>> env_;
};

}  // namespace

Bitset satisfying_points(const KripkeModel& m, const Formula& f) { return Checker(m).eval(f); }

bool check_model(const KripkeModel& m, const Formula& f) {
  if (m.size() == 0) throw ModelError("empty model");
  return satisfying_points(m, f).test(m.root);
}

// ---------------------------------------------------------------------------
// Bisimulation

std::vector<std::uint32_t> bisimulation_classes(const KripkeModel& m, std::uint64_t rounds) {
  std::size_t n = m.size();
  // colors compared by name: sort prop indices by name
  std::vector<std::size_t> prop_order(m.props.size());
  for (std::size_t i = 0; i < prop_order.size(); ++i) prop_order[i] = i;
  std::sort(prop_order.begin(), prop_order.end(), [&](auto x, auto y) { return m.props[x] < m.props[y]; });
  std::vector<std::size_t> action_rank(m.actions.size());
  {
    std::vector<std::size_t> order(m.actions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return m.actions[x] < m.actions[y]; });
    for (std::size_t r = 0; r < order.size(); ++r) action_rank[order[r]] = r;
  }
  std::vector<std::uint32_t> cls(n);
  {
    std::map<std::vector<bool>, std::uint32_t> ids;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<bool> key;
      for (auto i : prop_order) key.push_back((m.valuation[v] >> i) & 1);
      auto it = ids.emplace(key, static_cast<std::uint32_t>(ids.size())).first;
      cls[v] = it->second;
    }
  }
  std::size_t count = 0;
  {
    std::set<std::uint32_t> s(cls.begin(), cls.end());
    count = s.size();
  }
  for (std::uint64_t r = 0; r < rounds; ++r) {
    std::map<std::pair<std::uint32_t, std::vector<std::pair<std::size_t, std::uint32_t>>>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::pair<std::size_t, std::uint32_t>> sig;
      for (auto [a, w] : m.succ[v]) sig.emplace_back(action_rank[a], cls[w]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto it = ids.emplace(std::make_pair(cls[v], std::move(sig)), static_cast<std::uint32_t>(ids.size())).first;
      next[v] = it->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;  // stable: further rounds change nothing
    count = ids.size();
  }
  return cls;
}

KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b) {
  KripkeModel u = a;
  if (u.names.empty() && !b.names.empty()) u.names.assign(a.size(), "");
  std::vector<std::uint32_t> amap, pmap;
  for (const auto& act : b.actions) amap.push_back(u.action_id(act));
  for (const auto& p : b.props) pmap.push_back(u.prop_id(p));
  auto offset = static_cast<Point>(a.size());
  for (std::size_t v = 0; v < b.size(); ++v) {
    Color c = 0;
    for (std::size_t i = 0; i < b.props.size(); ++i)
      if ((b.valuation[v] >> i) & 1) c |= Color{1} << pmap[i];
    u.valuation.push_back(c);
    u.succ.emplace_back();
    if (!u.names.empty()) u.names.push_back(b.names.empty() ? "" : b.names[v]);
  }
  for (std::size_t v = 0; v < b.size(); ++v)
    for (auto [act, w] : b.succ[v]) u.succ[offset + v].emplace_back(amap[act], offset + w);
  return u;
}

bool n_bisimilar(const KripkeModel& a, const KripkeModel& b, std::uint64_t n) {
  auto u = disjoint_union(a, b);
  auto cls = bisimulation_classes(u, n);
  return cls[a.root] == cls[a.size() + b.root];
}

KripkeModel unravel(const KripkeModel& m, std::uint64_t depth) {
  KripkeModel t;
  t.actions = m.actions;
  t.props = m.props;
  std::deque<std::tuple<Point, Point, std::uint64_t>> q;  // (original, copy, depth)
  t.add_point(m.valuation[m.root]);
  q.emplace_back(m.root, 0, 0);
  while (!q.empty()) {
    auto [v, c, d] = q.front();
    q.pop_front();
    if (d == depth) continue;
    for (auto [a, w] : m.succ[v]) {
      auto cw = t.add_point(m.valuation[w]);
      t.add_edge(c, a, cw);
      q.emplace_back(w, cw, d + 1);
    }
  }
  t.root = 0;
  return t;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Color color_from_json(KripkeModel& m, const nlohmann::json& props) {
  Color c = 0;
  for (const auto& p : props) c |= Color{1} << m.prop_id(p.get<std::string>());
  return c;
}

}  // namespace

KripkeModel model_from_json(std::string_view text, const std::string& word_action) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model JSON: ") + e.what());
  }
  KripkeModel m;
  try {
    if (j.contains("prefix") || j.contains("loop")) {
      m.actions = {word_action};
      std::vector<Color> prefix, loop;
      for (const auto& c : j.value("prefix", nlohmann::json::array())) prefix.push_back(color_from_json(m, c));
      for (const auto& c : j.value("loop", nlohmann::json::array())) loop.push_back(color_from_json(m, c));
      WordModel w{m.props, prefix, loop};
      return w.to_kripke(word_action);
    }
    std::unordered_map<std::string, Point> ids;
    m.names.clear();
    for (const auto& p : j.at("points")) {
      auto id = p.at("id").get<std::string>();
      if (ids.count(id)) throw ModelError("duplicate point id '" + id + "'");
      Color c = color_from_json(m, p.value("props", nlohmann::json::array()));
      m.valuation.push_back(c);
      m.succ.emplace_back();
      m.names.push_back(id);
      ids[id] = static_cast<Point>(m.valuation.size() - 1);
    }
    auto lookup = [&](const std::string& id) {
      auto it = ids.find(id);
      if (it == ids.end()) throw ModelError("unknown point '" + id + "'");
      return it->second;
    };
    m.root = lookup(j.at("root").get<std::string>());
    for (const auto& e : j.value("edges", nlohmann::json::array())) {
      auto from = lookup(e.at("from").get<std::string>());
      auto to = lookup(e.at("to").get<std::string>());
      m.add_edge(from, m.action_id(e.at("action").get<std::string>()), to);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  }
  if (m.size() == 0) throw ModelError("model has no points");
  return m;
}

std::string model_to_json(const KripkeModel& m) {
  auto name = [&](Point v) { return m.names.empty() || m.names[v].empty() ? "v" + std::to_string(v) : m.names[v]; };
  nlohmann::json points = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (Point v = 0; v < m.size(); ++v) {
    points.push_back({{"id", name(v)}, {"props", m.point_props(v)}});
    for (auto [a, w] : m.succ[v]) edges.push_back({{"from", name(v)}, {"action", m.actions[a]}, {"to", name(w)}});
  }
  nlohmann::json out;
  out["points"] = std::move(points);
  out["root"] = name(m.root);
  out["edges"] = std::move(edges);
  return out.dump();
}

}  // namespace musep

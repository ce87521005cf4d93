#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "musep/automata.hpp"
#include "musep/parity.hpp"
#include "musep/tree_pool.hpp"

namespace musep {

namespace {

std::string color_text(Color c, const std::vector<std::string>& props) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < props.size(); ++i)
    if ((c >> i) & 1) {
      if (!first) s += ",";
      s += props[i];
      first = false;
    }
  return s + "}";
}

// every subset of the given moves (words: at most one element)
std::vector<MoveSet> subsets(const MoveSet& moves, bool words) {
  std::vector<MoveSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << moves.size()); ++m) {
    if (words && __builtin_popcountll(m) > 1) continue;
    MoveSet s;
    for (std::size_t i = 0; i < moves.size(); ++i)
      if ((m >> i) & 1) s.push_back(moves[i]);
    out.push_back(std::move(s));
  }
  return out;
}

void sort_unique(std::vector<MoveSet>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::size_t Npta::transition_count() const {
  std::size_t n = 0;
  for (const auto& row : delta)
    for (const auto& ts : row) n += ts.size();
  return n;
}

std::uint32_t Npta::add_state(std::uint8_t r, std::string label) {
  rank.push_back(r);
  labels.push_back(std::move(label));
  delta.emplace_back(num_colors());
  return static_cast<std::uint32_t>(rank.size() - 1);
}

std::uint32_t Npta::ensure_top(bool words) {
  if (top) return *top;
  auto t = add_state(2, "top");
  top = t;
  MoveSet all;
  for (std::uint32_t a = 0; a < actions.size(); ++a) all.emplace_back(a, t);
  auto ts = subsets(all, words);
  for (Color c = 0; c < num_colors(); ++c) delta[t][c] = ts;
  return t;
}

void Npta::validate() const {
  if (rank.size() != delta.size() || labels.size() != rank.size())
    throw std::logic_error("automaton tables have different sizes");
  if (!rank.empty() && initial >= rank.size()) throw std::logic_error("initial state out of range");
  for (std::size_t q = 0; q < size(); ++q) {
    if (rank[q] != 1 && rank[q] != 2) throw std::logic_error("rank must be 1 or 2");
    if (delta[q].size() != num_colors()) throw std::logic_error("transition row has wrong color count");
    for (const auto& ts : delta[q])
      for (const auto& s : ts) {
        if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
          throw std::logic_error("transition is not a sorted set");
        for (const auto& [a, t] : s)
          if (a >= actions.size() || t >= size()) throw std::logic_error("transition element out of range");
      }
  }
}

Npta lift(const Npta& a, const std::vector<std::string>& actions, const std::vector<std::string>& props) {
  std::vector<std::uint32_t> amap;
  for (const auto& x : a.actions) {
    auto it = std::find(actions.begin(), actions.end(), x);
    if (it == actions.end()) throw std::invalid_argument("lift: action '" + x + "' missing from target alphabet");
    amap.push_back(static_cast<std::uint32_t>(it - actions.begin()));
  }
  std::vector<std::uint32_t> pmap;
  for (const auto& p : a.props) {
    auto it = std::find(props.begin(), props.end(), p);
    if (it == props.end()) throw std::invalid_argument("lift: prop '" + p + "' missing from target alphabet");
    pmap.push_back(static_cast<std::uint32_t>(it - props.begin()));
  }
  Npta out;
  out.actions = actions;
  out.props = props;
  out.initial = a.initial;
  for (std::size_t q = 0; q < a.size(); ++q) out.add_state(a.rank[q], a.labels[q]);
  std::vector<std::uint32_t> fresh;
  for (std::uint32_t i = 0; i < actions.size(); ++i)
    if (std::find(amap.begin(), amap.end(), i) == amap.end()) fresh.push_back(i);
  if (a.top) {
    out.top = *a.top;
    MoveSet all;
    for (std::uint32_t i = 0; i < actions.size(); ++i) all.emplace_back(i, *a.top);
    auto ts = subsets(all, false);
    for (Color c = 0; c < out.num_colors(); ++c) out.delta[*a.top][c] = ts;
  }
  std::vector<MoveSet> extras{{}};
  if (!fresh.empty()) {
    auto t = out.ensure_top();
    MoveSet tops;
    for (auto i : fresh) tops.emplace_back(i, t);
    extras = subsets(tops, false);
  }
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (a.top && q == *a.top) continue;
    for (Color c = 0; c < out.num_colors(); ++c) {
      Color old = 0;
      for (std::size_t i = 0; i < pmap.size(); ++i)
        if ((c >> pmap[i]) & 1) old |= Color{1} << i;
      auto& row = out.delta[q][c];
      for (const auto& s : a.delta[q][old]) {
        MoveSet base;
        for (const auto& [x, t] : s) base.emplace_back(amap[x], t);
        for (const auto& e : extras) {
          MoveSet m = base;
          m.insert(m.end(), e.begin(), e.end());
          std::sort(m.begin(), m.end());
          row.push_back(std::move(m));
        }
      }
      sort_unique(row);
    }
  }
  return out;
}

Npta restrict_to_words(const Npta& a) {
  if (a.actions.size() != 1) throw std::invalid_argument("word restriction needs exactly one action");
  Npta out = a;
  for (auto& row : out.delta)
    for (auto& ts : row) std::erase_if(ts, [](const MoveSet& s) { return s.size() > 1; });
  return out;
}

Npta project(const Npta& a, const std::vector<std::string>& props) {
  std::vector<std::uint32_t> keep;
  for (const auto& p : props) {
    auto it = std::find(a.props.begin(), a.props.end(), p);
    if (it == a.props.end()) throw std::invalid_argument("project: unknown prop '" + p + "'");
    keep.push_back(static_cast<std::uint32_t>(it - a.props.begin()));
  }
  Npta out;
  out.actions = a.actions;
  out.props = props;
  out.initial = a.initial;
  out.top = a.top;
  for (std::size_t q = 0; q < a.size(); ++q) out.add_state(a.rank[q], a.labels[q]);
  for (std::size_t q = 0; q < a.size(); ++q) {
    for (Color c = 0; c < a.num_colors(); ++c) {
      Color small = 0;
      for (std::size_t i = 0; i < keep.size(); ++i)
        if ((c >> keep[i]) & 1) small |= Color{1} << i;
      auto& row = out.delta[q][small];
      row.insert(row.end(), a.delta[q][c].begin(), a.delta[q][c].end());
    }
    for (auto& row : out.delta[q]) sort_unique(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Emptiness

namespace {

ParityGame build_emptiness_game(const Npta& a, std::map<MoveSet, std::uint32_t>& choice) {
  const auto n = static_cast<std::uint32_t>(a.size());
  ParityGame g;
  for (std::uint32_t q = 0; q < n; ++q) g.add_vertex(0, a.rank[q]);
  auto win = g.add_vertex(0, 2);
  g.add_edge(win, win);
  auto lose = g.add_vertex(0, 1);
  g.add_edge(lose, lose);
  auto choice_vertex = [&](const MoveSet& s) {
    auto it = choice.find(s);
    if (it != choice.end()) return it->second;
    auto v = g.add_vertex(1, 0);
    choice.emplace(s, v);
    if (s.empty()) g.add_edge(v, win);
    for (const auto& [x, t] : s) g.add_edge(v, t);
    return v;
  };
  for (std::uint32_t q = 0; q < n; ++q) {
    std::set<std::uint32_t> seen;
    for (Color c = 0; c < a.num_colors(); ++c)
      for (const auto& s : a.delta[q][c]) {
        auto v = choice_vertex(s);
        if (seen.insert(v).second) g.add_edge(q, v);
      }
    if (g.succ[q].empty()) g.add_edge(q, lose);
  }
  return g;
}

}  // namespace

ParityGame emptiness_game(const Npta& a) {
  std::map<MoveSet, std::uint32_t> choice;
  return build_emptiness_game(a, choice);
}

Emptiness analyze_emptiness(const Npta& a) {
  const auto n = static_cast<std::uint32_t>(a.size());
  std::map<MoveSet, std::uint32_t> choice;
  auto g = build_emptiness_game(a, choice);
  auto sol = solve_parity_game(g);
  Emptiness e;
  e.nonempty.resize(n);
  e.ne.assign(n, std::vector<bool>(a.num_colors(), false));
  e.choice_color.assign(n, -1);
  e.choice_move.assign(n, -1);
  for (std::uint32_t q = 0; q < n; ++q) e.nonempty[q] = sol.winner[q] == 0;
  for (std::uint32_t q = 0; q < n; ++q) {
    for (Color c = 0; c < a.num_colors(); ++c)
      for (const auto& s : a.delta[q][c]) {
        bool ok = std::all_of(s.begin(), s.end(), [&](const Move& m) { return e.nonempty[m.second]; });
        if (ok) {
          e.ne[q][c] = true;
          break;
        }
      }
    if (!e.nonempty[q]) continue;
    auto target = sol.strategy[q];
    for (Color c = 0; c < a.num_colors() && e.choice_color[q] < 0; ++c)
      for (std::size_t i = 0; i < a.delta[q][c].size(); ++i)
        if (choice.at(a.delta[q][c][i]) == target) {
          e.choice_color[q] = static_cast<std::int64_t>(c);
          e.choice_move[q] = static_cast<std::int64_t>(i);
          break;
        }
  }
  return e;
}

KripkeModel emptiness_witness(const Npta& a, const Emptiness& e, std::uint32_t q, std::optional<Color> c) {
  if (!e.nonempty[q]) throw std::invalid_argument("witness requested for an empty state");
  KripkeModel m;
  m.actions = a.actions;
  m.props = a.props;
  std::map<std::uint32_t, Point> point_of;
  std::deque<std::uint32_t> todo;
  auto point = [&](std::uint32_t s) {
    auto it = point_of.find(s);
    if (it != point_of.end()) return it->second;
    auto p = m.add_point(static_cast<Color>(e.choice_color[s]));
    point_of.emplace(s, p);
    todo.push_back(s);
    return p;
  };
  auto expand = [&](Point p, const MoveSet& s) {
    for (const auto& [x, t] : s) {
      auto w = point(t);
      m.add_edge(p, x, w);
    }
  };
  if (c) {
    if (!e.ne[q][*c]) throw std::invalid_argument("witness requested for a dead color");
    const MoveSet* chosen = nullptr;
    for (const auto& s : a.delta[q][*c])
      if (std::all_of(s.begin(), s.end(), [&](const Move& mv) { return e.nonempty[mv.second]; })) {
        chosen = &s;
        break;
      }
    auto root = m.add_point(*c);
    m.root = root;
    expand(root, *chosen);
  } else {
    m.root = point(q);
  }
  while (!todo.empty()) {
    auto s = todo.front();
    todo.pop_front();
    auto p = point_of.at(s);
    expand(p, a.delta[s][e.choice_color[s]][e.choice_move[s]]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Membership

namespace {

std::vector<std::int64_t> action_map(const Npta& a, const KripkeModel& m) {
  std::vector<std::int64_t> map;
  for (const auto& x : m.actions) {
    auto it = std::find(a.actions.begin(), a.actions.end(), x);
    map.push_back(it == a.actions.end() ? -1 : it - a.actions.begin());
  }
  return map;
}

bool match(const std::vector<std::uint32_t>& elems, const std::vector<Point>& children,
           const std::vector<Bitset>& acc) {
  // every child needs a label, every element a distinct child
  for (auto w : children) {
    bool ok = false;
    for (auto s : elems) ok = ok || acc[w].test(s);
    if (!ok) return false;
  }
  if (elems.size() > children.size()) return false;
  std::vector<std::int64_t> owner(children.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t e, std::vector<bool>& used) {
    for (std::size_t j = 0; j < children.size(); ++j) {
      if (used[j] || !acc[children[j]].test(elems[e])) continue;
      used[j] = true;
      if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), used)) {
        owner[j] = static_cast<std::int64_t>(e);
        return true;
      }
    }
    return false;
  };
  for (std::size_t e = 0; e < elems.size(); ++e) {
    std::vector<bool> used(children.size(), false);
    if (!augment(e, used)) return false;
  }
  return true;
}

}  // namespace

std::vector<Bitset> accepting_states(const Npta& a, const KripkeModel& m) {
  const auto n = m.size();
  auto amap = action_map(a, m);
  // topological order, children first
  std::vector<std::uint8_t> mark(n, 0);
  std::vector<Point> order;
  for (Point r = 0; r < n; ++r) {
    if (mark[r]) continue;
    std::vector<std::pair<Point, std::size_t>> stack{{r, 0}};
    mark[r] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < m.succ[v].size()) {
        auto w = m.succ[v][i++].second;
        if (mark[w] == 1) throw ModelError("membership on a cyclic model needs the game procedure");
        if (mark[w] == 0) {
          mark[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        mark[v] = 2;
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<Bitset> acc(n, Bitset(a.size()));
  const auto na = a.actions.size();
  for (auto v : order) {
    auto c = m.color_over(v, a.props);
    std::vector<std::vector<Point>> kids(na);
    for (const auto& [x, w] : m.succ[v])
      if (amap[x] >= 0) kids[amap[x]].push_back(w);
    for (std::uint32_t q = 0; q < a.size(); ++q) {
      for (const auto& s : a.delta[q][c]) {
        bool ok = true;
        for (std::uint32_t x = 0; x < na && ok; ++x) {
          std::vector<std::uint32_t> elems;
          for (const auto& [y, t] : s)
            if (y == x) elems.push_back(t);
          if (kids[x].empty()) {
            ok = elems.empty();
          } else {
            ok = !elems.empty() && match(elems, kids[x], acc);
          }
        }
        if (ok) {
          acc[v].set(q);
          break;
        }
      }
    }
  }
  return acc;
}

bool accepts(const Npta& a, const KripkeModel& model, std::optional<std::uint32_t> state) {
  auto q0 = state.value_or(a.initial);
  auto m = model.reachable();
  if (m.is_acyclic()) return accepting_states(a, m)[m.root].test(q0);

  // game: Automaton labels, Pathfinder challenges a child or an element
  auto amap = action_map(a, m);
  const auto na = a.actions.size();
  ParityGame g;
  auto win = g.add_vertex(0, 2);
  g.add_edge(win, win);
  auto lose = g.add_vertex(0, 1);
  g.add_edge(lose, lose);
  std::vector<std::vector<std::int64_t>> auto_v(m.size(), std::vector<std::int64_t>(a.size(), -1));
  std::map<std::pair<Point, MoveSet>, std::uint32_t> choice_v;
  std::map<std::pair<Point, std::vector<std::uint32_t>>, std::uint32_t> label_v;
  std::deque<std::pair<Point, std::uint32_t>> todo;
  auto auto_vertex = [&](Point v, std::uint32_t q) {
    if (auto_v[v][q] >= 0) return static_cast<std::uint32_t>(auto_v[v][q]);
    auto id = g.add_vertex(0, a.rank[q]);
    auto_v[v][q] = id;
    todo.emplace_back(v, q);
    return id;
  };
  std::vector<std::vector<std::vector<Point>>> kids(m.size(), std::vector<std::vector<Point>>(na));
  for (Point v = 0; v < m.size(); ++v) {
    for (const auto& [x, w] : m.succ[v])
      if (amap[x] >= 0) kids[v][amap[x]].push_back(w);
    for (auto& k : kids[v]) {
      std::sort(k.begin(), k.end());
      k.erase(std::unique(k.begin(), k.end()), k.end());
    }
  }
  auto root = auto_vertex(m.root, q0);
  while (!todo.empty()) {
    auto [v, q] = todo.front();
    todo.pop_front();
    auto self = static_cast<std::uint32_t>(auto_v[v][q]);
    auto c = m.color_over(v, a.props);
    for (const auto& s : a.delta[q][c]) {
      auto key = std::make_pair(v, s);
      auto it = choice_v.find(key);
      std::uint32_t cv;
      if (it != choice_v.end()) {
        cv = it->second;
      } else {
        cv = g.add_vertex(1, 0);
        choice_v.emplace(key, cv);
        for (std::uint32_t x = 0; x < na; ++x) {
          std::vector<std::uint32_t> elems;
          for (const auto& [y, t] : s)
            if (y == x) elems.push_back(t);
          for (auto w : kids[v][x]) {
            auto lk = std::make_pair(w, elems);
            auto lt = label_v.find(lk);
            std::uint32_t lv;
            if (lt != label_v.end()) {
              lv = lt->second;
            } else {
              lv = g.add_vertex(0, 0);
              label_v.emplace(lk, lv);
              if (elems.empty()) g.add_edge(lv, lose);
              for (auto t : elems) g.add_edge(lv, auto_vertex(w, t));
            }
            g.add_edge(cv, lv);
          }
          for (auto t : elems) {
            auto pv = g.add_vertex(0, 0);
            if (kids[v][x].empty()) g.add_edge(pv, lose);
            for (auto w : kids[v][x]) g.add_edge(pv, auto_vertex(w, t));
            g.add_edge(cv, pv);
          }
        }
        if (g.succ[cv].empty()) g.add_edge(cv, win);
      }
      g.add_edge(self, cv);
    }
    if (g.succ[self].empty()) g.add_edge(self, lose);
  }
  return solve_parity_game(g).winner[root] == 0;
}

// ---------------------------------------------------------------------------
// Products

std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> minimal_covers(std::uint32_t m, std::uint32_t k) {
  using Rel = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  if (m == 0 && k == 0) return {Rel{}};
  if (m == 0 || k == 0) return {};
  std::set<Rel> found;
  std::vector<std::uint32_t> f(m, 0);
  while (true) {
    std::vector<bool> hit(k, false);
    for (auto y : f) hit[y] = true;
    std::vector<std::uint32_t> rest;
    for (std::uint32_t y = 0; y < k; ++y)
      if (!hit[y]) rest.push_back(y);
    std::vector<std::uint32_t> g(rest.size(), 0);
    while (true) {
      Rel r;
      for (std::uint32_t x = 0; x < m; ++x) r.emplace_back(x, f[x]);
      for (std::size_t i = 0; i < rest.size(); ++i) r.emplace_back(g[i], rest[i]);
      std::sort(r.begin(), r.end());
      r.erase(std::unique(r.begin(), r.end()), r.end());
      std::vector<std::uint32_t> dx(m, 0), dy(k, 0);
      for (const auto& [x, y] : r) {
        ++dx[x];
        ++dy[y];
      }
      bool minimal = std::all_of(r.begin(), r.end(), [&](const auto& p) { return dx[p.first] == 1 || dy[p.second] == 1; });
      if (minimal) found.insert(std::move(r));
      std::size_t i = 0;
      while (i < g.size() && ++g[i] == m) g[i++] = 0;
      if (i == g.size()) break;
    }
    std::size_t i = 0;
    while (i < m && ++f[i] == k) f[i++] = 0;
    if (i == m) break;
  }
  return {found.begin(), found.end()};
}

Product intersect(const Npta& a, const Npta& b, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
  if (a.actions != b.actions || a.props != b.props)
    throw std::invalid_argument("intersect: automata over different alphabets");
  Product out;
  auto& p = out.automaton;
  p.actions = a.actions;
  p.props = a.props;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint8_t>, std::uint32_t> ids;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint8_t>> key_of;
  std::deque<std::uint32_t> todo;
  constexpr std::size_t kMaxStates = 2'000'000;
  auto intern = [&](std::uint32_t x, std::uint32_t y, std::uint8_t f) {
    auto key = std::make_tuple(x, y, f);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (key_of.size() >= kMaxStates) throw BudgetError("product automaton too large");
    std::uint8_t r = (f == 2 && b.rank[y] == 2) ? 2 : 1;
    auto id = p.add_state(r, "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(f) + ")");
    ids.emplace(key, id);
    key_of.push_back(key);
    todo.push_back(id);
    return id;
  };
  for (const auto& [x, y] : pairs) out.roots.push_back(intern(x, y, 1));
  if (!out.roots.empty()) p.initial = out.roots.front();
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>>
      cover_cache;
  auto covers = [&](std::uint32_t m, std::uint32_t k) -> const auto& {
    auto key = std::make_pair(m, k);
    auto it = cover_cache.find(key);
    if (it == cover_cache.end()) it = cover_cache.emplace(key, minimal_covers(m, k)).first;
    return it->second;
  };
  const auto na = static_cast<std::uint32_t>(a.actions.size());
  while (!todo.empty()) {
    auto id = todo.front();
    todo.pop_front();
    auto [x, y, f] = key_of[id];
    std::uint8_t nf = f == 1 ? (a.rank[x] == 2 ? 2 : 1) : (b.rank[y] == 2 ? 1 : 2);
    for (Color c = 0; c < p.num_colors(); ++c) {
      std::vector<MoveSet> row;
      for (const auto& s : a.delta[x][c])
        for (const auto& t : b.delta[y][c]) {
          std::vector<std::vector<std::uint32_t>> xs(na), ys(na);
          for (const auto& [act, q] : s) xs[act].push_back(q);
          for (const auto& [act, q] : t) ys[act].push_back(q);
          std::vector<const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>*> opts(na);
          bool dead = false;
          for (std::uint32_t act = 0; act < na && !dead; ++act) {
            opts[act] = &covers(static_cast<std::uint32_t>(xs[act].size()), static_cast<std::uint32_t>(ys[act].size()));
            dead = opts[act]->empty();
          }
          if (dead) continue;
          std::vector<std::size_t> pick(na, 0);
          while (true) {
            MoveSet ms;
            for (std::uint32_t act = 0; act < na; ++act)
              for (const auto& [i, j] : (*opts[act])[pick[act]])
                ms.emplace_back(act, intern(xs[act][i], ys[act][j], nf));
            std::sort(ms.begin(), ms.end());
            ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
            row.push_back(std::move(ms));
            std::uint32_t i = 0;
            while (i < na && ++pick[i] == opts[i]->size()) pick[i++] = 0;
            if (i == na) break;
          }
        }
      sort_unique(row);
      p.delta[id][c] = std::move(row);
    }
  }
  return out;
}

Product intersect(const Npta& a, const Npta& b) { return intersect(a, b, {{a.initial, b.initial}}); }

// ---------------------------------------------------------------------------
// Output

std::string move_set_text(const Npta& a, const MoveSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += "(" + a.actions[s[i].first] + ", q" + std::to_string(s[i].second) + ")";
  }
  return out + "}";
}

std::string dump_text(const Npta& a) {
  std::ostringstream os;
  os << "states " << a.size() << ", initial q" << a.initial << ", transitions " << a.transition_count() << "\n";
  os << "actions:";
  for (const auto& x : a.actions) os << " " << x;
  os << "\nprops:";
  for (const auto& x : a.props) os << " " << x;
  os << "\n";
  for (std::uint32_t q = 0; q < a.size(); ++q) {
    os << "q" << q << " rank " << int(a.rank[q]) << " " << a.labels[q];
    if (a.top && *a.top == q) os << " (top)";
    os << "\n";
    for (Color c = 0; c < a.num_colors(); ++c) {
      if (a.delta[q][c].empty()) continue;
      os << "  " << color_text(c, a.props) << ":";
      for (const auto& s : a.delta[q][c]) os << " " << move_set_text(a, s);
      os << "\n";
    }
  }
  return os.str();
}

std::string to_dot(const Npta& a) {
  std::ostringstream os;
  os << "digraph npta {\n  rankdir=LR;\n  init [shape=point];\n  init -> q" << a.initial << ";\n";
  for (std::uint32_t q = 0; q < a.size(); ++q)
    os << "  q" << q << " [shape=" << (a.rank[q] == 2 ? "doublecircle" : "circle") << ", label=\"q" << q << "\"];\n";
  std::size_t t = 0;
  for (std::uint32_t q = 0; q < a.size(); ++q)
    for (Color c = 0; c < a.num_colors(); ++c)
      for (const auto& s : a.delta[q][c]) {
        os << "  t" << t << " [shape=point];\n";
        os << "  q" << q << " -> t" << t << " [label=\"" << color_text(c, a.props) << "\"];\n";
        for (const auto& [x, r] : s) os << "  t" << t << " -> q" << r << " [label=\"" << a.actions[x] << "\"];\n";
        ++t;
      }
  os << "}\n";
  return os.str();
}

}  // namespace musep

#include "musep/parity.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace musep {

namespace {

class Zielonka {
 public:
  explicit Zielonka(const ParityGame& g) : g_(g), pred_(g.size()) {
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      if (g.succ[v].empty()) throw std::invalid_argument("parity game vertex without successor");
      for (auto w : g.succ[v]) pred_[w].push_back(v);
    }
    sol_.winner.assign(g.size(), 0);
    sol_.strategy.assign(g.size(), -1);
  }

  ParitySolution run() {
    std::vector<bool> all(g_.size(), true);
    solve(all);
    return std::move(sol_);
  }

 private:
  // attractor of `target` for player p inside subgame `in`; records strategies
  std::vector<bool> attractor(const std::vector<bool>& in, const std::vector<bool>& target, std::uint8_t p) {
    std::vector<bool> attr = target;
    std::vector<std::uint32_t> remaining(g_.size(), 0);
    std::deque<std::uint32_t> q;
    for (std::uint32_t v = 0; v < g_.size(); ++v) {
      if (!in[v]) continue;
      if (attr[v]) q.push_back(v);
      for (auto w : g_.succ[v])
        if (in[w]) ++remaining[v];
    }
    while (!q.empty()) {
      auto w = q.front();
      q.pop_front();
      for (auto v : pred_[w]) {
        if (!in[v] || attr[v]) continue;
        if (g_.owner[v] == p) {
          attr[v] = true;
          sol_.strategy[v] = w;
          q.push_back(v);
        } else if (--remaining[v] == 0) {
          attr[v] = true;
          q.push_back(v);
        }
      }
    }
    return attr;
  }

  static std::vector<bool> minus(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<bool> r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (b[i]) r[i] = false;
    return r;
  }

  // Solves the subgame `in`; writes winners and strategies for its vertices.
  void solve(std::vector<bool> in) {
    while (true) {
      std::int64_t maxp = -1;
      for (std::uint32_t v = 0; v < g_.size(); ++v)
        if (in[v]) maxp = std::max<std::int64_t>(maxp, g_.priority[v]);
      if (maxp < 0) return;
      auto p = static_cast<std::uint8_t>(maxp % 2);
      std::vector<bool> top(g_.size(), false);
      for (std::uint32_t v = 0; v < g_.size(); ++v)
        if (in[v] && g_.priority[v] == static_cast<std::uint32_t>(maxp)) top[v] = true;
      auto a = attractor(in, top, p);
      auto rest = minus(in, a);
      solve(rest);
      bool opponent_wins_somewhere = false;
      for (std::uint32_t v = 0; v < g_.size(); ++v)
        if (rest[v] && sol_.winner[v] != p) opponent_wins_somewhere = true;
      if (!opponent_wins_somewhere) {
        for (std::uint32_t v = 0; v < g_.size(); ++v) {
          if (!in[v]) continue;
          sol_.winner[v] = p;
          if (top[v] && g_.owner[v] == p) {
            for (auto w : g_.succ[v])
              if (in[w]) {
                sol_.strategy[v] = w;
                break;
              }
          }
        }
        return;
      }
      std::vector<bool> lost(g_.size(), false);
      for (std::uint32_t v = 0; v < g_.size(); ++v)
        if (rest[v] && sol_.winner[v] != p) lost[v] = true;
      auto b = attractor(in, lost, static_cast<std::uint8_t>(1 - p));
      for (std::uint32_t v = 0; v < g_.size(); ++v)
        if (b[v]) sol_.winner[v] = static_cast<std::uint8_t>(1 - p);
      in = minus(in, b);
    }
  }

  const ParityGame& g_;
  std::vector<std::vector<std::uint32_t>> pred_;
  ParitySolution sol_;
};

}  // namespace

ParitySolution solve_parity_game(const ParityGame& g) {
  auto sol = Zielonka(g).run();
  for (std::uint32_t v = 0; v < g.size(); ++v)
    if (sol.winner[v] != g.owner[v]) sol.strategy[v] = -1;
  return sol;
}

std::vector<std::uint8_t> solve_parity_game_brute_force(const ParityGame& g) {
  const auto n = static_cast<std::uint32_t>(g.size());
  std::vector<std::uint32_t> mine;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (g.succ[v].empty()) throw std::invalid_argument("parity game vertex without successor");
    if (g.owner[v] == 0) mine.push_back(v);
  }
  std::vector<std::uint8_t> winner(n, 1);
  std::vector<std::size_t> choice(mine.size(), 0);
  while (true) {
    // graph where player 0 is fixed; player 1 wins from v iff a reachable
    // cycle has odd maximum priority
    std::vector<std::vector<std::uint32_t>> edges(n);
    for (std::uint32_t v = 0; v < n; ++v) edges[v] = g.succ[v];
    for (std::size_t i = 0; i < mine.size(); ++i) edges[mine[i]] = {g.succ[mine[i]][choice[i]]};
    std::vector<bool> bad(n, false);  // vertices on an odd-max cycle
    for (std::uint32_t u = 0; u < n; ++u) {
      if (g.priority[u] % 2 == 0) continue;
      // is u on a cycle using only vertices with priority <= priority[u]?
      std::vector<bool> seen(n, false);
      std::deque<std::uint32_t> q;
      for (auto w : edges[u])
        if (g.priority[w] <= g.priority[u] && !seen[w]) {
          seen[w] = true;
          q.push_back(w);
        }
      while (!q.empty()) {
        auto x = q.front();
        q.pop_front();
        for (auto w : edges[x])
          if (g.priority[w] <= g.priority[u] && !seen[w]) {
            seen[w] = true;
            q.push_back(w);
          }
      }
      if (seen[u]) bad[u] = true;
    }
    for (std::uint32_t v = 0; v < n; ++v) {
      if (winner[v] == 0) continue;
      std::vector<bool> seen(n, false);
      std::deque<std::uint32_t> q{v};
      seen[v] = true;
      bool lose = false;
      while (!q.empty() && !lose) {
        auto x = q.front();
        q.pop_front();
        if (bad[x]) lose = true;
        for (auto w : edges[x])
          if (!seen[w]) {
            seen[w] = true;
            q.push_back(w);
          }
      }
      if (!lose) winner[v] = 0;
    }
    std::size_t i = 0;
    while (i < mine.size()) {
      if (++choice[i] < g.succ[mine[i]].size()) break;
      choice[i] = 0;
      ++i;
    }
    if (i == mine.size()) break;
  }
  return winner;
}

std::string to_dot(const ParityGame& g) {
  std::string out = "digraph game {\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    out += "  v" + std::to_string(v) + " [shape=" + (g.owner[v] == 0 ? "circle" : "box") + ", label=\"" +
           std::to_string(v) + ":" + std::to_string(g.priority[v]) + "\"];\n";
    for (auto w : g.succ[v]) out += "  v" + std::to_string(v) + " -> v" + std::to_string(w) + ";\n";
  }
  return out + "}\n";
}

}  // namespace musep

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace musep {

/// Two-player max-parity game. Player 0 (Automaton, even) wins a play iff the
/// largest priority seen infinitely often is even.
struct ParityGame {
  std::vector<std::uint8_t> owner;  // 0 or 1
  std::vector<std::uint32_t> priority;
  std::vector<std::vector<std::uint32_t>> succ;

  std::uint32_t add_vertex(std::uint8_t who, std::uint32_t prio) {
    owner.push_back(who);
    priority.push_back(prio);
    succ.emplace_back();
    return static_cast<std::uint32_t>(owner.size() - 1);
  }
  void add_edge(std::uint32_t from, std::uint32_t to) { succ[from].push_back(to); }
  std::size_t size() const { return owner.size(); }
};

struct ParitySolution {
  std::vector<std::uint8_t> winner;   // per vertex
  std::vector<std::int64_t> strategy;  // successor chosen by the owner on its own winning vertices, else -1
};

/// Recursive attractor decomposition (Zielonka). Every vertex needs a successor.
ParitySolution solve_parity_game(const ParityGame& g);

std::string to_dot(const ParityGame& g);

/// Exhaustive search over positional strategies of player 0; exponential, for cross-checking small games.
std::vector<std::uint8_t> solve_parity_game_brute_force(const ParityGame& g);

}  // namespace musep

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "parikh/error.hpp"
#include "parikh/generators.hpp"
#include "parikh/grammar.hpp"
#include "parikh/parse_tree.hpp"
#include "parikh/random.hpp"
#include "parikh/traces.hpp"
#include "parikh/treewidth.hpp"

namespace testing_support {

inline constexpr const char* kG3 = "start: A3\nA3 -> A2 A2\nA2 -> A1 A1\nA1 -> a\n";
inline constexpr const char* kAnBn = "start: S\nS -> a S b | _eps_\n";

inline parikh::Grammar grammar(const std::string& text) { return parikh::parse_grammar(text); }

inline parikh::Word word(const parikh::Grammar& g, const std::string& letters) {
  parikh::Word w;
  for (char c : letters) w.push_back(*g.find_terminal(std::string(1, c)));
  return w;
}

// G(n, p) with edge probability num/den.
inline parikh::Graph random_graph(parikh::Rng& rng, int n, int num, int den) {
  parikh::Graph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.chance(static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den))) g.add_edge(u, v);
    }
  }
  return g;
}

inline oracle::AdjMatrix matrix(const parikh::Graph& g) {
  oracle::AdjMatrix adj(static_cast<std::size_t>(g.vertex_count()),
                        std::vector<bool>(static_cast<std::size_t>(g.vertex_count()), false));
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
  return adj;
}

inline parikh::Graph path(int n) {
  parikh::Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline parikh::Graph cycle(int n) {
  parikh::Graph g = path(n);
  g.add_edge(n - 1, 0);
  return g;
}

inline parikh::Graph complete(int n) {
  parikh::Graph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

// Specs cycling through the sizes the stress harness uses.
inline parikh::RandomGrammarSpec small_spec(std::uint64_t seed, int max_n = 4) {
  parikh::Rng rng(seed);
  parikh::RandomGrammarSpec spec;
  spec.n = rng.between(1, max_n);
  spec.max_rhs = rng.between(1, 4);
  spec.max_alternatives = rng.between(1, 3);
  spec.terminals = rng.between(1, 3);
  spec.allow_eps = rng.chance(1, 2);
  spec.seed = seed;
  return spec;
}

// Valuation for rs whose level i holds one sampled tree per Followup entry.
// Nullopt when some Followup variable has no tree within max_nodes.
inline std::optional<parikh::Valuation> random_valuation(const parikh::Grammar& g,
                                                         const parikh::ReminderSequence& rs,
                                                         parikh::Rng& rng, std::size_t max_nodes) {
  parikh::Valuation val = parikh::Valuation::empty(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (parikh::VarId v : rs[i].followup) {
      try {
        parikh::add_tree(val.levels[i], parikh::sample_tree(g, v, max_nodes, rng));
      } catch (const parikh::PreconditionError&) {
        return std::nullopt;
      }
    }
  }
  return val;
}

}  // namespace testing_support

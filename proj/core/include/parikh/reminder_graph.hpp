#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parikh/grammar.hpp"
#include "parikh/treewidth.hpp"

namespace parikh {

// Why an edge is present. A sibling edge joins the variables at positions
// i != j of one production; a descendant edge joins `via` (reachable from
// position i) with the variable at position j.
struct EdgeWitness {
  enum class Kind { kSibling, kDescendant };
  Kind kind = Kind::kSibling;
  int production = 0;
  int i = 0;  // 0-based variable positions within the rhs
  int j = 0;
  VarId via = -1;

  friend auto operator<=>(const EdgeWitness&, const EdgeWitness&) = default;
};

// Undirected graph on the grammar's variables; vertex ids equal VarIds.
struct ReminderGraph {
  Graph graph;
  // First witness recorded for each edge (u < v).
  std::map<std::pair<VarId, VarId>, EdgeWitness> witnesses;
};

// For every production with r >= 2 variable occurrences A_1..A_r and every
// pair of positions i, j: {A_i, A_j} when i != j, and {A', A_j} for each
// A' != A_j reachable from A_i. Self-loops are dropped.
ReminderGraph build_reminder_graph(const Grammar& g);

// Re-derives an edge from its witness; false when the witness does not
// justify the edge.
bool replay_witness(const Grammar& g, const Relation& reach, std::pair<VarId, VarId> edge,
                    const EdgeWitness& w);

enum class WidthMode { kExact, kHeuristic };

struct RegularityWidth {
  int d = 1;  // treewidth + 1
  TreeDecomposition witness;
  bool exact = true;
};

// d = width(witness) + 1. Exact mode is optimal (or throws BudgetExceeded);
// heuristic mode gives an upper bound.
RegularityWidth regularity_width(const ReminderGraph& rg, WidthMode mode,
                                 const ExactBudget& budget = {});
RegularityWidth regularity_width(const Grammar& g, WidthMode mode,
                                 const ExactBudget& budget = {});

std::string to_dot(const Grammar& g, const ReminderGraph& rg);
// 1-based id -> variable name, matching to_pace_gr(rg.graph).
nlohmann::json pace_id_map(const Grammar& g);

}  // namespace parikh

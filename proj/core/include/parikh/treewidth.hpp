#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace parikh {

// Simple undirected graph on vertices 0..n-1. Self-loops are ignored.
class Graph {
 public:
  explicit Graph(int n = 0) : adjacency_(static_cast<std::size_t>(n)) {}

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const;
  // Returns true when the edge was new.
  bool add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  const std::vector<int>& neighbors(int v) const { return adjacency_.at(v); }
  // Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<int>> adjacency_;  // sorted
};

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;               // sorted vertex lists
  std::vector<std::pair<int, int>> tree_edges;      // between bag indices

  // max |bag| - 1; -1 for a decomposition without vertices.
  int width() const;
  std::size_t node_count() const { return bags.size(); }
};

struct ValidationResult {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

// Checks that the bag tree is a tree, every vertex occupies a nonempty
// connected set of nodes and every edge is covered by some bag.
ValidationResult validate(const Graph& g, const TreeDecomposition& td);

// Width of the elimination order (max number of later neighbours in the
// fill-in graph) and the decomposition it induces.
int elimination_width(const Graph& g, std::span<const int> order);
TreeDecomposition decomposition_from_order(const Graph& g, std::span<const int> order);

struct TreewidthResult {
  int width = 0;
  TreeDecomposition decomposition;
};

struct ExactBudget {
  int max_vertices = 20;
  std::size_t max_expansions = 20'000'000;
};

// Optimal width by iterative deepening on the target width; each round is a
// branch-and-bound search over elimination orders with memoized eliminated
// sets. Throws BudgetExceeded beyond the vertex cap or the expansion budget.
TreewidthResult exact_treewidth(const Graph& g, const ExactBudget& budget = {});

// Greedy min-fill elimination, ties broken by lowest vertex id. A nonzero
// seed adds randomized tie-breaking restarts and keeps the best order.
TreewidthResult heuristic_treewidth(const Graph& g, std::uint64_t seed = 0);

// Contracts tree edges whose bags are in containment until none remain. The
// result is valid whenever the input is, has the same width, and at most
// max(1, |V|) nodes.
TreeDecomposition compact_node_count(const TreeDecomposition& td);

// Index of a node whose bag contains every vertex of `clique`. Throws
// PreconditionError when no bag does (the vertices cannot then form a clique
// of a graph the decomposition is valid for).
int clique_bag(const TreeDecomposition& td, std::span<const int> clique);
// Same, after checking that `clique` is pairwise adjacent in g.
int clique_bag(const Graph& g, const TreeDecomposition& td, std::span<const int> clique);

// PACE formats, 1-based ids.
std::string to_pace_gr(const Graph& g);
std::string to_pace_td(const TreeDecomposition& td, int vertex_count);
nlohmann::json to_json(const TreeDecomposition& td);

}  // namespace parikh

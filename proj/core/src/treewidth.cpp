#include "parikh/treewidth.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "parikh/error.hpp"
#include "parikh/random.hpp"

namespace parikh {

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : adjacency_) twice += nb.size();
  return twice / 2;
}

bool Graph::add_edge(int u, int v) {
  if (u == v) return false;
  auto& a = adjacency_.at(u);
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it != a.end() && *it == v) return false;
  a.insert(it, v);
  auto& b = adjacency_.at(v);
  b.insert(std::lower_bound(b.begin(), b.end(), u), u);
  return true;
}

bool Graph::has_edge(int u, int v) const {
  const auto& a = adjacency_.at(u);
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < vertex_count(); ++u) {
    for (int v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

int TreeDecomposition::width() const {
  std::size_t widest = 0;
  for (const auto& b : bags) widest = std::max(widest, b.size());
  return static_cast<int>(widest) - 1;
}

ValidationResult validate(const Graph& g, const TreeDecomposition& td) {
  auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };
  const int nodes = static_cast<int>(td.bags.size());
  const int n = g.vertex_count();
  if (nodes == 0) return fail("decomposition has no nodes");
  if (td.tree_edges.size() != static_cast<std::size_t>(nodes - 1)) {
    return fail("tree has " + std::to_string(td.tree_edges.size()) + " edges for " +
                std::to_string(nodes) + " nodes");
  }

  std::vector<std::vector<int>> tree(nodes);
  std::vector<int> parent(nodes);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : td.tree_edges) {
    if (a < 0 || b < 0 || a >= nodes || b >= nodes || a == b) {
      return fail("tree edge (" + std::to_string(a) + "," + std::to_string(b) + ") is invalid");
    }
    int ra = find(a), rb = find(b);
    if (ra == rb) return fail("tree edges form a cycle");
    parent[ra] = rb;
    tree[a].push_back(b);
    tree[b].push_back(a);
  }

  std::vector<std::vector<int>> holders(n);
  for (int i = 0; i < nodes; ++i) {
    for (int v : td.bags[i]) {
      if (v < 0 || v >= n) return fail("bag " + std::to_string(i) + " holds unknown vertex");
      holders[v].push_back(i);
    }
  }

  for (int v = 0; v < n; ++v) {
    if (holders[v].empty()) return fail("vertex " + std::to_string(v) + " is in no bag");
    std::vector<char> holds(nodes, 0), seen(nodes, 0);
    for (int i : holders[v]) holds[i] = 1;
    std::vector<int> stack{holders[v].front()};
    seen[holders[v].front()] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      ++reached;
      for (int y : tree[x]) {
        if (holds[y] && !seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    std::size_t distinct = std::count(holds.begin(), holds.end(), 1);
    if (reached != distinct) {
      return fail("bags holding vertex " + std::to_string(v) + " are not connected");
    }
  }

  for (auto [u, v] : g.edges()) {
    bool covered = std::any_of(holders[u].begin(), holders[u].end(), [&](int i) {
      return std::find(td.bags[i].begin(), td.bags[i].end(), v) != td.bags[i].end();
    });
    if (!covered) {
      return fail("edge {" + std::to_string(u) + "," + std::to_string(v) +
                  "} is not covered by any bag");
    }
  }
  return {};
}

namespace {

// Elimination with fill-in. Calls visit(v, later_neighbours) per step.
template <typename Visit>
void eliminate(const Graph& g, std::span<const int> order, Visit&& visit) {
  const int n = g.vertex_count();
  if (order.size() != static_cast<std::size_t>(n)) {
    throw PreconditionError("elimination order must list every vertex exactly once");
  }
  std::vector<std::set<int>> adj(n);
  for (auto [u, v] : g.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  std::vector<char> gone(n, 0);
  for (int v : order) {
    if (v < 0 || v >= n || gone[v]) {
      throw PreconditionError("elimination order must list every vertex exactly once");
    }
    std::vector<int> later(adj[v].begin(), adj[v].end());
    visit(v, later);
    for (int a : later) {
      adj[a].erase(v);
      for (int b : later) {
        if (a != b) adj[a].insert(b);
      }
    }
    adj[v].clear();
    gone[v] = 1;
  }
}

using Mask = std::uint64_t;

Mask bit(int v) { return Mask{1} << v; }

class ExactSearch {
 public:
  ExactSearch(const Graph& g, std::size_t max_expansions)
      : n_(g.vertex_count()), adj_(n_, 0), max_expansions_(max_expansions) {
    for (auto [u, v] : g.edges()) {
      adj_[u] |= bit(v);
      adj_[v] |= bit(u);
    }
    all_ = n_ == 64 ? ~Mask{0} : bit(n_) - 1;
  }

  // Elimination order of width <= k, if one exists.
  std::optional<std::vector<int>> decide(int k) {
    k_ = k;
    failed_.clear();
    order_.clear();
    if (dfs(0)) return order_;
    return std::nullopt;
  }

 private:
  // Vertices outside `eliminated` adjacent to v in the fill-in graph.
  Mask later_neighbours(Mask eliminated, int v) const {
    Mask seen = bit(v), frontier = bit(v), result = 0;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) {
        int u = std::countr_zero(f);
        Mask nb = adj_[u] & ~seen;
        seen |= nb;
        result |= nb & ~eliminated;
        next |= nb & eliminated;
      }
      frontier = next;
    }
    return result;
  }

  bool dfs(Mask eliminated) {
    Mask remaining = all_ & ~eliminated;
    if (std::popcount(remaining) <= k_ + 1) {
      for (Mask r = remaining; r; r &= r - 1) order_.push_back(std::countr_zero(r));
      return true;
    }
    if (failed_.count(eliminated)) return false;
    if (++expansions_ > max_expansions_) {
      throw BudgetExceeded("exact_treewidth: search expansions exhausted", max_expansions_);
    }

    std::vector<std::pair<int, Mask>> moves;
    for (Mask r = remaining; r; r &= r - 1) {
      int v = std::countr_zero(r);
      Mask q = later_neighbours(eliminated, v);
      if (std::popcount(q) > k_) continue;
      if (is_clique(eliminated, q)) {
        // A simplicial vertex within the width bound can always go first.
        moves.assign(1, {v, q});
        break;
      }
      moves.emplace_back(v, q);
    }
    for (const auto& [v, q] : moves) {
      order_.push_back(v);
      if (dfs(eliminated | bit(v))) return true;
      order_.pop_back();
    }
    failed_.insert(eliminated);
    return false;
  }

  bool is_clique(Mask eliminated, Mask q) const {
    for (Mask r = q; r; r &= r - 1) {
      int u = std::countr_zero(r);
      Mask others = q & ~bit(u);
      if ((later_neighbours(eliminated, u) & others) != others) return false;
    }
    return true;
  }

  int n_;
  std::vector<Mask> adj_;
  Mask all_ = 0;
  int k_ = 0;
  std::size_t expansions_ = 0;
  std::size_t max_expansions_;
  std::unordered_set<Mask> failed_;
  std::vector<int> order_;
};

// Degeneracy, a lower bound on treewidth.
int degeneracy(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> degree(n);
  for (int v = 0; v < n; ++v) degree[v] = static_cast<int>(g.neighbors(v).size());
  std::vector<char> gone(n, 0);
  int best = 0;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (!gone[v] && (pick < 0 || degree[v] < degree[pick])) pick = v;
    }
    best = std::max(best, degree[pick]);
    gone[pick] = 1;
    for (int u : g.neighbors(pick)) {
      if (!gone[u]) --degree[u];
    }
  }
  return best;
}

std::vector<int> min_fill_order(const Graph& g, Rng* rng) {
  const int n = g.vertex_count();
  std::vector<std::set<int>> adj(n);
  for (auto [u, v] : g.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  auto fill_of = [&](int v) {
    long fill = 0;
    for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
      for (auto b = std::next(a); b != adj[v].end(); ++b) {
        if (!adj[*a].count(*b)) ++fill;
      }
    }
    return fill;
  };
  std::vector<long> fill(n);
  for (int v = 0; v < n; ++v) fill[v] = fill_of(v);
  std::vector<char> gone(n, 0);
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    long best_fill = -1;
    std::vector<int> ties;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      if (best_fill < 0 || fill[v] < best_fill) {
        best_fill = fill[v];
        ties.assign(1, v);
      } else if (fill[v] == best_fill) {
        ties.push_back(v);
      }
    }
    int v = rng ? ties[rng->below(ties.size())] : ties.front();
    for (int a : adj[v]) {
      adj[a].erase(v);
      for (int b : adj[v]) {
        if (a != b) adj[a].insert(b);
      }
    }
    // Only vertices within two steps of v can see their fill change.
    std::set<int> dirty;
    for (int a : adj[v]) {
      dirty.insert(a);
      dirty.insert(adj[a].begin(), adj[a].end());
    }
    adj[v].clear();
    gone[v] = 1;
    order.push_back(v);
    for (int w : dirty) fill[w] = fill_of(w);
  }
  return order;
}

}  // namespace

int elimination_width(const Graph& g, std::span<const int> order) {
  int width = g.vertex_count() == 0 ? -1 : 0;
  eliminate(g, order, [&](int, const std::vector<int>& later) {
    width = std::max(width, static_cast<int>(later.size()));
  });
  return width;
}

TreeDecomposition decomposition_from_order(const Graph& g, std::span<const int> order) {
  const int n = g.vertex_count();
  TreeDecomposition td;
  if (n == 0) {
    td.bags.emplace_back();
    return td;
  }
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position.at(order[i]) = i;
  td.bags.resize(n);
  std::vector<int> parent(n, -1);
  eliminate(g, order, [&](int v, const std::vector<int>& later) {
    auto& bag = td.bags[position[v]];
    bag = later;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    int first = -1;
    for (int u : later) {
      if (first < 0 || position[u] < position[first]) first = u;
    }
    if (first >= 0) parent[position[v]] = position[first];
  });
  int previous_root = -1;
  for (int i = 0; i < n; ++i) {
    if (parent[i] >= 0) {
      td.tree_edges.emplace_back(i, parent[i]);
    } else {
      if (previous_root >= 0) td.tree_edges.emplace_back(previous_root, i);
      previous_root = i;
    }
  }
  return td;
}

TreewidthResult exact_treewidth(const Graph& g, const ExactBudget& budget) {
  const int n = g.vertex_count();
  if (n > budget.max_vertices || n > 64) {
    throw BudgetExceeded("exact_treewidth: graph has " + std::to_string(n) +
                             " vertices, above the exact-mode cap",
                         static_cast<std::size_t>(std::min(budget.max_vertices, 64)));
  }
  TreewidthResult upper = heuristic_treewidth(g);
  if (n == 0) return upper;
  ExactSearch search(g, budget.max_expansions);
  for (int k = degeneracy(g); k < upper.width; ++k) {
    if (auto order = search.decide(k)) {
      TreewidthResult r;
      r.decomposition = decomposition_from_order(g, *order);
      r.width = r.decomposition.width();
      return r;
    }
  }
  return upper;
}

TreewidthResult heuristic_treewidth(const Graph& g, std::uint64_t seed) {
  std::vector<int> best = min_fill_order(g, nullptr);
  int best_width = elimination_width(g, best);
  if (seed != 0) {
    Rng rng(seed);
    for (int round = 0; round < 16; ++round) {
      std::vector<int> order = min_fill_order(g, &rng);
      int w = elimination_width(g, order);
      if (w < best_width) {
        best_width = w;
        best = std::move(order);
      }
    }
  }
  TreewidthResult r;
  r.decomposition = decomposition_from_order(g, best);
  r.width = r.decomposition.width();
  return r;
}

TreeDecomposition compact_node_count(const TreeDecomposition& td) {
  std::vector<std::vector<int>> bags = td.bags;
  for (auto& b : bags) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  std::vector<std::pair<int, int>> edges = td.tree_edges;
  std::vector<char> alive(bags.size(), 1);

  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [a, b] = edges[e];
      int keep, drop;
      if (subset(bags[a], bags[b])) {
        keep = b;
        drop = a;
      } else if (subset(bags[b], bags[a])) {
        keep = a;
        drop = b;
      } else {
        continue;
      }
      edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(e));
      for (auto& [x, y] : edges) {
        if (x == drop) x = keep;
        if (y == drop) y = keep;
      }
      alive[drop] = 0;
      changed = true;
      break;
    }
  }

  std::vector<int> remap(bags.size(), -1);
  TreeDecomposition out;
  for (std::size_t i = 0; i < bags.size(); ++i) {
    if (!alive[i]) continue;
    remap[i] = static_cast<int>(out.bags.size());
    out.bags.push_back(bags[i]);
  }
  for (auto [a, b] : edges) out.tree_edges.emplace_back(remap[a], remap[b]);
  return out;
}

int clique_bag(const TreeDecomposition& td, std::span<const int> clique) {
  std::vector<int> wanted(clique.begin(), clique.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    std::vector<int> bag = td.bags[i];
    std::sort(bag.begin(), bag.end());
    if (std::includes(bag.begin(), bag.end(), wanted.begin(), wanted.end())) {
      return static_cast<int>(i);
    }
  }
  throw PreconditionError("clique_bag: no bag contains the vertex set");
}

int clique_bag(const Graph& g, const TreeDecomposition& td, std::span<const int> clique) {
  for (std::size_t i = 0; i < clique.size(); ++i) {
    for (std::size_t j = i + 1; j < clique.size(); ++j) {
      if (clique[i] != clique[j] && !g.has_edge(clique[i], clique[j])) {
        throw PreconditionError("clique_bag: vertices " + std::to_string(clique[i]) + " and " +
                                std::to_string(clique[j]) + " are not adjacent");
      }
    }
  }
  return clique_bag(td, clique);
}

std::string to_pace_gr(const Graph& g) {
  std::ostringstream out;
  const auto edges = g.edges();
  out << "p tw " << g.vertex_count() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

std::string to_pace_td(const TreeDecomposition& td, int vertex_count) {
  std::ostringstream out;
  out << "s td " << td.bags.size() << ' ' << td.width() + 1 << ' ' << vertex_count << '\n';
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i + 1;
    for (int v : td.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : td.tree_edges) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

nlohmann::json to_json(const TreeDecomposition& td) {
  nlohmann::json j;
  j["width"] = td.width();
  j["bags"] = td.bags;
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : td.tree_edges) edges.push_back({a, b});
  j["tree_edges"] = std::move(edges);
  return j;
}

}  // namespace parikh

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parikh/grammar.hpp"

namespace parikh {

class Rng;

enum class NodeKind : std::uint8_t { kVariable, kTerminal, kBottom };

// A derivation tree. Internal nodes are variables expanded by a production;
// leaves are terminals. A variable leaf with no production is a hole, which
// makes the tree a context (used by the surgery operations). The one-node
// tree bottom() stands for the finished subtree and yields the empty word.
class ParseTree {
 public:
  ParseTree() : ParseTree(bottom()) {}

  static ParseTree bottom() { return ParseTree(NodeKind::kBottom, -1, -1, {}); }
  static ParseTree terminal(TermId t) { return ParseTree(NodeKind::kTerminal, t, -1, {}); }
  static ParseTree hole(VarId v) { return ParseTree(NodeKind::kVariable, v, -1, {}); }
  static ParseTree node(VarId v, int production, std::vector<ParseTree> children) {
    return ParseTree(NodeKind::kVariable, v, production, std::move(children));
  }
  // Builds the node for production `production`, filling its variable
  // positions with `variable_children` in order and its terminal positions
  // with terminal leaves.
  static ParseTree expand(const Grammar& g, int production,
                          std::vector<ParseTree> variable_children);

  NodeKind kind() const { return kind_; }
  bool is_bottom() const { return kind_ == NodeKind::kBottom; }
  bool is_terminal() const { return kind_ == NodeKind::kTerminal; }
  bool is_variable() const { return kind_ == NodeKind::kVariable; }
  bool is_hole() const { return is_variable() && production_ < 0; }
  // Variable or terminal id; -1 for bottom.
  int label() const { return label_; }
  int production() const { return production_; }

  const std::vector<ParseTree>& children() const { return children_; }
  std::vector<ParseTree>& children() { return children_; }

  friend bool operator==(const ParseTree& a, const ParseTree& b);
  friend bool operator<(const ParseTree& a, const ParseTree& b);

 private:
  ParseTree(NodeKind kind, int label, int production, std::vector<ParseTree> children)
      : kind_(kind), label_(label), production_(production), children_(std::move(children)) {}

  NodeKind kind_;
  int label_;
  int production_;
  std::vector<ParseTree> children_;
};

// Path of child indices from the root.
using TreePath = std::vector<std::size_t>;

const ParseTree& subtree_at(const ParseTree& t, const TreePath& path);
ParseTree& subtree_at(ParseTree& t, const TreePath& path);

// Throws PreconditionError when t is a context.
Word yield_word(const ParseTree& t);
ParikhVector yield_parikh(const ParseTree& t);
int height(const ParseTree& t);
std::size_t node_count(const ParseTree& t);
bool is_context(const ParseTree& t);

bool is_occurrence_free(const ParseTree& t, VarId a);
// True iff every root-to-leaf path carries at most one node labelled a.
bool is_recurrence_free(const ParseTree& t, VarId a);
// Variables labelling some node of t.
std::vector<VarId> variables_in(const ParseTree& t);

// Terminal children of the root, concatenated.
Word root_word(const ParseTree& t);
// Immediate subtrees whose roots are variables, in order.
std::vector<ParseTree> variable_children(const ParseTree& t);
bool children_all_terminal(const ParseTree& t);

// Empty string when t is consistent with g, otherwise a description of the
// first offending node. Holes are accepted only when allow_holes is set.
std::string check_tree(const Grammar& g, const ParseTree& t, bool allow_holes = false);

// "(A3 (A2 (A1 a) (A1 a)) (A2 (A1 a) (A1 a)))"; bottom is "_bot_", an
// epsilon node is "(A)" and a hole is "A?".
std::string to_sexpr(const Grammar& g, const ParseTree& t);
ParseTree parse_sexpr(const Grammar& g, std::string_view text);

// One step of the recurrence-moving surgery. Writes from = t.t'.t'' where t'
// and t'' are rooted at a (leftmost witnessing path; t' the first a on it,
// t'' the next a below), replaces t' by t'' in `from`, and splices the
// context t' into `into` at its shallowest-then-leftmost a-node. Returns
// false, changing nothing, when `from` is a-recurrence free. Throws
// PreconditionError when `into` is a-occurrence free.
bool move_recurrence(ParseTree& from, ParseTree& into, VarId a);

// Repeats move_recurrence until t1 is a-recurrence free. Requires t1 not
// a-recurrence free and t2 not a-occurrence free.
std::pair<ParseTree, ParseTree> reduce_recurrence(ParseTree t1, ParseTree t2, VarId a);

// Minimum node count of a full tree rooted at each variable; nullopt when
// none exists.
std::vector<std::optional<std::size_t>> min_tree_size(const Grammar& g);

// Random full parse tree rooted at `root` with at most max_nodes nodes.
// Throws PreconditionError when no such tree exists.
ParseTree sample_tree(const Grammar& g, VarId root, std::size_t max_nodes, Rng& rng);

}  // namespace parikh

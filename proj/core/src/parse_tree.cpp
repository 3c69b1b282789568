#include "parikh/parse_tree.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "parikh/error.hpp"
#include "parikh/random.hpp"

namespace parikh {

bool operator==(const ParseTree& a, const ParseTree& b) {
  return a.kind_ == b.kind_ && a.label_ == b.label_ && a.production_ == b.production_ &&
         a.children_ == b.children_;
}

bool operator<(const ParseTree& a, const ParseTree& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.label_ != b.label_) return a.label_ < b.label_;
  if (a.production_ != b.production_) return a.production_ < b.production_;
  return std::lexicographical_compare(a.children_.begin(), a.children_.end(),
                                      b.children_.begin(), b.children_.end());
}

ParseTree ParseTree::expand(const Grammar& g, int production,
                            std::vector<ParseTree> variable_children) {
  const Production& p = g.productions().at(production);
  std::vector<ParseTree> children;
  children.reserve(p.rhs.size());
  std::size_t next = 0;
  for (const Symbol& s : p.rhs) {
    if (s.is_terminal()) {
      children.push_back(terminal(s.id));
    } else {
      if (next >= variable_children.size()) {
        throw PreconditionError("ParseTree::expand: too few variable children");
      }
      children.push_back(std::move(variable_children[next++]));
    }
  }
  if (next != variable_children.size()) {
    throw PreconditionError("ParseTree::expand: too many variable children");
  }
  return node(p.lhs, production, std::move(children));
}

const ParseTree& subtree_at(const ParseTree& t, const TreePath& path) {
  const ParseTree* cur = &t;
  for (std::size_t i : path) cur = &cur->children().at(i);
  return *cur;
}

ParseTree& subtree_at(ParseTree& t, const TreePath& path) {
  ParseTree* cur = &t;
  for (std::size_t i : path) cur = &cur->children().at(i);
  return *cur;
}

namespace {

void collect_yield(const ParseTree& t, Word& out) {
  if (t.is_terminal()) {
    out.push_back(t.label());
    return;
  }
  if (t.is_hole()) throw PreconditionError("yield of a context (tree with a hole)");
  for (const ParseTree& c : t.children()) collect_yield(c, out);
}

bool recurrence_free_below(const ParseTree& t, VarId a, bool seen) {
  bool here = t.is_variable() && t.label() == a;
  if (here && seen) return false;
  for (const ParseTree& c : t.children()) {
    if (!recurrence_free_below(c, a, seen || here)) return false;
  }
  return true;
}

// Preorder-first a-node having an a-labelled ancestor, together with that
// (unique, by minimality) ancestor.
bool find_recurrence(const ParseTree& t, VarId a, TreePath& path,
                     std::optional<TreePath>& ancestor, TreePath& outer, TreePath& inner) {
  const bool here = t.is_variable() && t.label() == a;
  if (here && ancestor) {
    outer = *ancestor;
    inner = path;
    return true;
  }
  const bool set_here = here && !ancestor;
  if (set_here) ancestor = path;
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    path.push_back(i);
    bool found = find_recurrence(t.children()[i], a, path, ancestor, outer, inner);
    path.pop_back();
    if (found) return true;
  }
  if (set_here) ancestor.reset();
  return false;
}

std::optional<TreePath> shallowest_occurrence(const ParseTree& t, VarId a) {
  std::deque<std::pair<const ParseTree*, TreePath>> queue{{&t, {}}};
  while (!queue.empty()) {
    auto [node, path] = std::move(queue.front());
    queue.pop_front();
    if (node->is_variable() && node->label() == a) return path;
    for (std::size_t i = 0; i < node->children().size(); ++i) {
      TreePath next = path;
      next.push_back(i);
      queue.emplace_back(&node->children()[i], std::move(next));
    }
  }
  return std::nullopt;
}

void fill_hole(ParseTree& context, const TreePath& hole, ParseTree filler) {
  subtree_at(context, hole) = std::move(filler);
}

void write_sexpr(const Grammar& g, const ParseTree& t, std::string& out) {
  switch (t.kind()) {
    case NodeKind::kBottom:
      out += "_bot_";
      return;
    case NodeKind::kTerminal:
      out += g.terminal_name(t.label());
      return;
    case NodeKind::kVariable:
      if (t.is_hole()) {
        out += g.variable_name(t.label()) + "?";
        return;
      }
      out += "(" + g.variable_name(t.label());
      for (const ParseTree& c : t.children()) {
        out += ' ';
        write_sexpr(g, c, out);
      }
      out += ")";
      return;
  }
}

class SexprReader {
 public:
  SexprReader(const Grammar& g, std::string_view text) : g_(g), text_(text) {}

  ParseTree read_all() {
    ParseTree t = read();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw PreconditionError("tree syntax error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string atom() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected a symbol");
    return std::string(text_.substr(start, pos_ - start));
  }

  ParseTree read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] != '(') {
      std::string a = atom();
      if (a == "_bot_") return ParseTree::bottom();
      if (a.size() > 1 && a.back() == '?') {
        auto v = g_.find_variable(a.substr(0, a.size() - 1));
        if (!v) fail("unknown variable in hole '" + a + "'");
        return ParseTree::hole(*v);
      }
      if (auto t = g_.find_terminal(a)) return ParseTree::terminal(*t);
      fail("'" + a + "' is not a terminal (variables must be written as (A ...))");
    }
    ++pos_;
    std::string head = atom();
    auto v = g_.find_variable(head);
    if (!v) fail("'" + head + "' is not a variable");
    std::vector<ParseTree> children;
    for (;;) {
      skip();
      if (pos_ >= text_.size()) fail("missing ')'");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      children.push_back(read());
    }
    for (int pi : g_.productions_of(*v)) {
      const Production& p = g_.productions()[pi];
      if (p.rhs.size() != children.size()) continue;
      bool match = true;
      for (std::size_t i = 0; i < p.rhs.size() && match; ++i) {
        const ParseTree& c = children[i];
        match = p.rhs[i].is_variable() ? (c.is_variable() && c.label() == p.rhs[i].id)
                                       : (c.is_terminal() && c.label() == p.rhs[i].id);
      }
      if (match) return ParseTree::node(*v, pi, std::move(children));
    }
    fail("no production of '" + head + "' matches the children");
  }

  const Grammar& g_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Word yield_word(const ParseTree& t) {
  Word out;
  collect_yield(t, out);
  return out;
}

ParikhVector yield_parikh(const ParseTree& t) { return ParikhVector::of(yield_word(t)); }

int height(const ParseTree& t) {
  int h = 0;
  for (const ParseTree& c : t.children()) h = std::max(h, 1 + height(c));
  return h;
}

std::size_t node_count(const ParseTree& t) {
  std::size_t n = 1;
  for (const ParseTree& c : t.children()) n += node_count(c);
  return n;
}

bool is_context(const ParseTree& t) {
  if (t.is_hole()) return true;
  return std::any_of(t.children().begin(), t.children().end(),
                     [](const ParseTree& c) { return is_context(c); });
}

bool is_occurrence_free(const ParseTree& t, VarId a) {
  if (t.is_variable() && t.label() == a) return false;
  return std::all_of(t.children().begin(), t.children().end(),
                     [a](const ParseTree& c) { return is_occurrence_free(c, a); });
}

bool is_recurrence_free(const ParseTree& t, VarId a) { return recurrence_free_below(t, a, false); }

std::vector<VarId> variables_in(const ParseTree& t) {
  std::set<VarId> seen;
  std::vector<const ParseTree*> stack{&t};
  while (!stack.empty()) {
    const ParseTree* n = stack.back();
    stack.pop_back();
    if (n->is_variable()) seen.insert(n->label());
    for (const ParseTree& c : n->children()) stack.push_back(&c);
  }
  return {seen.begin(), seen.end()};
}

Word root_word(const ParseTree& t) {
  Word w;
  for (const ParseTree& c : t.children()) {
    if (c.is_terminal()) w.push_back(c.label());
  }
  return w;
}

std::vector<ParseTree> variable_children(const ParseTree& t) {
  std::vector<ParseTree> out;
  for (const ParseTree& c : t.children()) {
    if (c.is_variable()) out.push_back(c);
  }
  return out;
}

bool children_all_terminal(const ParseTree& t) {
  return std::all_of(t.children().begin(), t.children().end(),
                     [](const ParseTree& c) { return c.is_terminal(); });
}

std::string check_tree(const Grammar& g, const ParseTree& t, bool allow_holes) {
  if (t.is_bottom()) return {};
  std::vector<std::pair<const ParseTree*, bool>> stack{{&t, true}};
  while (!stack.empty()) {
    auto [n, is_root] = stack.back();
    stack.pop_back();
    switch (n->kind()) {
      case NodeKind::kBottom:
        if (!is_root) return "bottom appears below the root";
        break;
      case NodeKind::kTerminal:
        if (n->label() < 0 || n->label() >= g.terminal_count()) return "unknown terminal id";
        if (!n->children().empty()) return "terminal node with children";
        if (is_root) return "tree rooted at a terminal";
        break;
      case NodeKind::kVariable: {
        if (n->label() < 0 || n->label() >= g.variable_count()) return "unknown variable id";
        if (n->is_hole()) {
          if (!allow_holes) return "hole " + g.variable_name(n->label()) + "? in a full tree";
          if (!n->children().empty()) return "hole with children";
          break;
        }
        if (n->production() >= static_cast<int>(g.productions().size())) {
          return "unknown production index";
        }
        const Production& p = g.productions()[n->production()];
        if (p.lhs != n->label()) {
          return "node " + g.variable_name(n->label()) + " uses a production of " +
                 g.variable_name(p.lhs);
        }
        if (p.rhs.size() != n->children().size()) {
          return "node " + g.variable_name(n->label()) + " has the wrong number of children";
        }
        for (std::size_t i = 0; i < p.rhs.size(); ++i) {
          const ParseTree& c = n->children()[i];
          bool ok = p.rhs[i].is_variable() ? (c.is_variable() && c.label() == p.rhs[i].id)
                                           : (c.is_terminal() && c.label() == p.rhs[i].id);
          if (!ok) {
            return "children of " + g.variable_name(n->label()) +
                   " do not spell the production rhs";
          }
          stack.emplace_back(&c, false);
        }
        break;
      }
    }
  }
  return {};
}

std::string to_sexpr(const Grammar& g, const ParseTree& t) {
  std::string out;
  write_sexpr(g, t, out);
  return out;
}

ParseTree parse_sexpr(const Grammar& g, std::string_view text) {
  return SexprReader(g, text).read_all();
}

bool move_recurrence(ParseTree& from, ParseTree& into, VarId a) {
  TreePath path;
  std::optional<TreePath> ancestor;
  TreePath outer, inner;
  if (!find_recurrence(from, a, path, ancestor, outer, inner)) return false;
  auto target = shallowest_occurrence(into, a);
  if (!target) throw PreconditionError("move_recurrence: target tree is occurrence free");

  // Split t' = context . t'' and put t'' where t' was.
  ParseTree context = subtree_at(from, outer);
  const TreePath rel(inner.begin() + static_cast<std::ptrdiff_t>(outer.size()), inner.end());
  ParseTree lower = subtree_at(context, rel);
  fill_hole(context, rel, ParseTree::hole(a));
  subtree_at(from, outer) = std::move(lower);

  // Hang the target's a-subtree below the context and splice it in.
  ParseTree& slot = subtree_at(into, *target);
  fill_hole(context, rel, std::move(slot));
  slot = std::move(context);
  return true;
}

std::pair<ParseTree, ParseTree> reduce_recurrence(ParseTree t1, ParseTree t2, VarId a) {
  if (is_recurrence_free(t1, a)) {
    throw PreconditionError("reduce_recurrence: first tree is already recurrence free");
  }
  if (is_occurrence_free(t2, a)) {
    throw PreconditionError("reduce_recurrence: second tree is occurrence free");
  }
  while (move_recurrence(t1, t2, a)) {
  }
  return {std::move(t1), std::move(t2)};
}

std::vector<std::optional<std::size_t>> min_tree_size(const Grammar& g) {
  std::vector<std::optional<std::size_t>> best(g.variable_count());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions()) {
      std::size_t cost = 1 + static_cast<std::size_t>(p.terminal_count());
      bool finite = true;
      for (VarId v : p.variables()) {
        if (!best[v]) {
          finite = false;
          break;
        }
        cost += *best[v];
      }
      if (finite && (!best[p.lhs] || cost < *best[p.lhs])) {
        best[p.lhs] = cost;
        changed = true;
      }
    }
  }
  return best;
}

namespace {

ParseTree sample_below(const Grammar& g, VarId root, std::size_t budget,
                       const std::vector<std::optional<std::size_t>>& min_size, Rng& rng) {
  auto cost = [&](const Production& p) -> std::optional<std::size_t> {
    std::size_t c = 1 + static_cast<std::size_t>(p.terminal_count());
    for (VarId v : p.variables()) {
      if (!min_size[v]) return std::nullopt;
      c += *min_size[v];
    }
    return c;
  };
  std::vector<int> candidates;
  for (int pi : g.productions_of(root)) {
    auto c = cost(g.productions()[pi]);
    if (c && *c <= budget) candidates.push_back(pi);
  }
  if (candidates.empty()) {
    throw PreconditionError("sample_tree: no tree of " + g.variable_name(root) +
                            " fits the node budget");
  }
  const int pi = candidates[rng.below(candidates.size())];
  const Production& p = g.productions()[pi];
  const std::vector<VarId> vars = p.variables();
  std::size_t extra = budget - *cost(p);

  std::vector<std::size_t> order(vars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::size_t> allot(vars.size());
  for (std::size_t i : order) {
    std::size_t share = rng.below(extra + 1);
    allot[i] = *min_size[vars[i]] + share;
    extra -= share;
  }
  std::vector<ParseTree> children;
  children.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    children.push_back(sample_below(g, vars[i], allot[i], min_size, rng));
  }
  return ParseTree::expand(g, pi, std::move(children));
}

}  // namespace

ParseTree sample_tree(const Grammar& g, VarId root, std::size_t max_nodes, Rng& rng) {
  const auto min_size = min_tree_size(g);
  if (!min_size[root] || *min_size[root] > max_nodes) {
    throw PreconditionError("sample_tree: no tree of " + g.variable_name(root) + " within " +
                            std::to_string(max_nodes) + " nodes");
  }
  std::size_t budget = *min_size[root] + rng.below(max_nodes - *min_size[root] + 1);
  return sample_below(g, root, budget, min_size, rng);
}

}  // namespace parikh

#include "parikh/traces.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include <nlohmann/json.hpp>

#include "parikh/error.hpp"
#include "parikh/random.hpp"

namespace parikh {

namespace {

// Trees of val at levels lo..hi (1-based, inclusive), with their level.
template <typename Fn>
bool any_tree(const Valuation& val, std::size_t lo, std::size_t hi, Fn&& pred) {
  hi = std::min(hi, val.size());
  for (std::size_t l = std::max<std::size_t>(lo, 1); l <= hi; ++l) {
    for (const auto& [t, count] : val.levels[l - 1]) {
      if (pred(t, l)) return true;
    }
  }
  return false;
}

bool all_occurrence_free(const Valuation& val, std::size_t lo, std::size_t hi, VarId a) {
  return !any_tree(val, lo, hi, [a](const ParseTree& t, std::size_t) { return !is_occurrence_free(t, a); });
}

TreeMultiset to_multiset(const std::vector<ParseTree>& trees) {
  TreeMultiset out;
  for (const ParseTree& t : trees) add_tree(out, t);
  return out;
}

std::vector<VarId> sorted_roots(const std::vector<ParseTree>& trees) {
  std::vector<VarId> out;
  for (const ParseTree& t : trees) out.push_back(t.label());
  std::sort(out.begin(), out.end());
  return out;
}

// Index of the tree to descend into. Prefers the lowest-index a-occurrence
// free tree; when there is none, pushes every a-recurrence of tree 0 into
// tree 1 and picks tree 0.
std::size_t choose(std::vector<ParseTree>& trees, std::optional<VarId> a) {
  if (trees.size() < 2 || !a) return 0;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (is_occurrence_free(trees[i], *a)) return i;
  }
  if (!is_recurrence_free(trees[0], *a)) {
    auto [t0, t1] = reduce_recurrence(std::move(trees[0]), std::move(trees[1]), *a);
    trees[0] = std::move(t0);
    trees[1] = std::move(t1);
  }
  return 0;
}

struct Witness {
  std::size_t level1 = 0;
  ParseTree t1;
  ParseTree t2;
  VarId a = -1;
};

// A pair violating property 3 against the last level `length`: t1 at a level
// <= i+1 containing R_i.Current, t2 at level `length` with a recurrence of it,
// for some i < length - 1.
std::optional<Witness> find_witness(const Valuation& val, const ReminderSequence& rs,
                                    std::size_t length) {
  for (std::size_t i = 1; i + 1 < length; ++i) {
    const VarId a = rs[i - 1].current;
    if (a == kBottomVar) continue;
    const ParseTree* t2 = nullptr;
    for (const auto& [t, count] : val.levels[length - 1]) {
      if (!is_recurrence_free(t, a)) {
        t2 = &t;
        break;
      }
    }
    if (t2 == nullptr) continue;
    for (std::size_t l = 1; l <= i + 1; ++l) {
      for (const auto& [t, count] : val.levels[l - 1]) {
        if (!is_occurrence_free(t, a)) return Witness{l, t, *t2, a};
      }
    }
  }
  return std::nullopt;
}

void compact_prefix(Valuation& val, const ReminderSequence& rs, std::size_t length) {
  if (length <= 2) return;
  for (;;) {
    while (auto w = find_witness(val, rs, length)) {
      remove_tree(val.levels[w->level1 - 1], w->t1);
      remove_tree(val.levels[length - 1], w->t2);
      if (!move_recurrence(w->t2, w->t1, w->a)) {
        throw InvariantError("compaction witness without a recurrence");
      }
      add_tree(val.levels[w->level1 - 1], w->t1);
      add_tree(val.levels[length - 1], w->t2);
    }
    compact_prefix(val, rs, length - 1);
    if (!find_witness(val, rs, length)) return;
  }
}

ParikhVector symbols_parikh(const std::vector<Symbol>& form) {
  ParikhVector v;
  for (const Symbol& s : form) {
    if (s.is_terminal()) v.add(s.id);
  }
  return v;
}

std::vector<VarId> symbols_variables(const std::vector<Symbol>& form) {
  std::vector<VarId> out;
  for (const Symbol& s : form) {
    if (s.is_variable()) out.push_back(s.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void add_tree(TreeMultiset& level, const ParseTree& t, int count) {
  if (count > 0) level[t] += count;
}

void remove_tree(TreeMultiset& level, const ParseTree& t) {
  auto it = level.find(t);
  if (it == level.end()) throw PreconditionError("tree not present at level");
  if (--it->second == 0) level.erase(it);
}

std::vector<ParseTree> expand(const TreeMultiset& level) {
  std::vector<ParseTree> out;
  for (const auto& [t, count] : level) out.insert(out.end(), static_cast<std::size_t>(count), t);
  return out;
}

long long info_f(const ParseTree& t) {
  if (t.is_bottom()) return 1;
  long long sum = 0;
  bool any = false;
  for (const ParseTree& c : t.children()) {
    if (c.is_variable()) {
      any = true;
      sum += info_f(c);
    }
  }
  return any ? 1 + sum : 2;
}

long long info_f(const Valuation& val) {
  long long sum = 0;
  for (const TreeMultiset& level : val.levels) {
    for (const auto& [t, count] : level) sum += info_f(t) * count;
  }
  return sum;
}

ParikhVector valuation_parikh(const Valuation& val) {
  ParikhVector sum;
  for (const TreeMultiset& level : val.levels) {
    for (const auto& [t, count] : level) {
      const ParikhVector y = yield_parikh(t);
      for (int i = 0; i < count; ++i) sum += y;
    }
  }
  return sum;
}

std::string check_valuation(const Valuation& val, const ReminderSequence& rs) {
  if (val.size() != rs.size()) {
    return "valuation has " + std::to_string(val.size()) + " levels for a sequence of length " +
           std::to_string(rs.size());
  }
  for (std::size_t i = 0; i < val.size(); ++i) {
    if (sorted_roots(expand(val.levels[i])) != rs[i].followup) {
      return "roots at level " + std::to_string(i + 1) + " differ from the followup";
    }
    for (const auto& [t, count] : val.levels[i]) {
      if (count <= 0) return "nonpositive multiplicity at level " + std::to_string(i + 1);
      if (!t.is_variable() || t.is_hole() || is_context(t)) {
        return "level " + std::to_string(i + 1) + " holds a tree that is not a full variable tree";
      }
    }
  }
  return "";
}

std::set<VarId> vars_below(const Valuation& val, std::size_t i) {
  std::set<VarId> out;
  any_tree(val, 1, i, [&out](const ParseTree& t, std::size_t) {
    for (VarId v : variables_in(t)) out.insert(v);
    return false;
  });
  return out;
}

std::set<VarId> vars_above(const Valuation& val, std::size_t i) {
  std::set<VarId> out;
  any_tree(val, i, val.size(), [&out](const ParseTree& t, std::size_t) {
    for (VarId v : variables_in(t)) out.insert(v);
    return false;
  });
  return out;
}

std::optional<CompactnessViolation> first_violation(const Valuation& val, const ReminderSequence& rs,
                                                    bool include_third) {
  const std::size_t n = std::min(val.size(), rs.size());
  auto first_level = [&](std::size_t lo, auto pred) -> std::size_t {
    std::size_t found = 0;
    any_tree(val, lo, n, [&](const ParseTree& t, std::size_t l) {
      if (pred(t)) found = l;
      return found != 0;
    });
    return found;
  };

  for (std::size_t k = 2; k <= n; ++k) {
    const VarId a = rs[k - 1].current;
    if (a == kBottomVar || rs[k - 1].followup.empty()) continue;
    bool repeated = false;
    for (std::size_t j = 1; j < k; ++j) repeated = repeated || rs[j - 1].current == a;
    if (!repeated) continue;
    const std::size_t l = first_level(k + 1, [a](const ParseTree& t) { return !is_occurrence_free(t, a); });
    if (l != 0) {
      return CompactnessViolation{1, l, k, a,
                                  "level " + std::to_string(l) + " is not occurrence free for the Current repeated at " +
                                      std::to_string(k)};
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    const VarId a = rs[i - 1].current;
    if (a == kBottomVar) continue;
    const bool low_free = all_occurrence_free(val, 1, i + 1, a);
    if (low_free) {
      const std::size_t l = first_level(i + 2, [a](const ParseTree& t) { return !is_occurrence_free(t, a); });
      if (l != 0) {
        return CompactnessViolation{2, l, i, a,
                                    "level " + std::to_string(l) + " mentions Current of pair " + std::to_string(i) +
                                        " although levels <= " + std::to_string(i + 1) + " do not"};
      }
    } else if (include_third) {
      const std::size_t l = first_level(i + 2, [a](const ParseTree& t) { return !is_recurrence_free(t, a); });
      if (l != 0) {
        return CompactnessViolation{3, l, i, a,
                                    "level " + std::to_string(l) + " has a recurrence of Current of pair " +
                                        std::to_string(i)};
      }
    }
  }
  return std::nullopt;
}

Valuation compactify(Valuation val, const ReminderSequence& rs) {
  if (val.size() != rs.size()) throw PreconditionError("valuation length differs from sequence length");
  if (auto v = first_violation(val, rs, false)) {
    throw PreconditionError("compactify requires properties 1 and 2: " + v->message);
  }
  compact_prefix(val, rs, val.size());
  return val;
}

Valuation restrict(const Valuation& val, std::size_t i) {
  if (i < 1 || i > val.size()) throw PreconditionError("restriction index out of range");
  return {std::vector<TreeMultiset>(val.levels.begin(), val.levels.begin() + static_cast<std::ptrdiff_t>(i))};
}

ReminderSequence restrict(const ReminderSequence& rs, std::size_t i) {
  if (i < 1 || i > rs.size()) throw PreconditionError("restriction index out of range");
  return rs.prefix(i);
}

long long config_size(const Configuration& c) { return info_f(c.val) + info_f(c.tree); }

ParikhVector conserved_parikh(const Configuration& c) {
  return valuation_parikh(c.val) + parikh(c.word) + yield_parikh(c.tree);
}

std::string check_configuration(const Configuration& c) {
  const ReminderSequence& rs = c.rs;
  if (rs.empty()) return "empty reminder sequence";
  if (std::string e = check_valuation(c.val, rs); !e.empty()) return e;
  if (rs.back().is_bottom() ? !c.tree.is_bottom()
                            : !c.tree.is_variable() || c.tree.label() != rs.back().current) {
    return "tree root differs from the last Current";
  }
  if (auto v = first_violation(c.val, rs)) return "valuation not compact: " + v->message;

  const std::size_t n = rs.size();
  for (std::size_t k = 2; k <= n; ++k) {
    const VarId a = rs[k - 1].current;
    if (a == kBottomVar || rs[k - 1].followup.empty()) continue;
    bool repeated = false;
    for (std::size_t j = 1; j < k; ++j) repeated = repeated || rs[j - 1].current == a;
    if (!repeated) continue;
    for (const ParseTree& sub : c.tree.children()) {
      if (!is_occurrence_free(sub, a)) return "property I: an immediate subtree mentions a repeated Current";
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    const VarId a = rs[i - 1].current;
    if (rs[i].followup.empty()) continue;
    if (all_occurrence_free(c.val, 1, i + 1, a)) {
      if (!is_occurrence_free(c.tree, a)) {
        return "property II fails at pair " + std::to_string(i);
      }
    } else if (!is_recurrence_free(c.tree, a)) {
      return "property III fails at pair " + std::to_string(i);
    }
  }
  return "";
}

Configuration initial_configuration(const Grammar& g, const ParseTree& t) {
  if (!t.is_variable() || t.label() != g.axiom()) {
    throw PreconditionError("tree must be rooted at the axiom");
  }
  if (std::string e = check_tree(g, t); !e.empty()) throw PreconditionError(e);
  return {ReminderSequence::initial(g.axiom()), {}, Valuation::empty(1), t};
}

StepResult step(const Configuration& c, const Grammar& g) {
  if (config_size(c) <= 1) throw PreconditionError("configuration of size 1 has no successor");
  const ReminderSequence& rs = c.rs;
  const std::size_t n = rs.size();
  const ReminderPair& last = rs.back();
  StepResult out;

  if (c.tree.is_bottom()) {
    if (n < 2 || rs[n - 2].followup.empty()) {
      throw PreconditionError("bottom tree without a pending followup");
    }
    const ReminderSequence head = rs.prefix(n - 2);
    std::optional<VarId> relevant;
    if (!head.empty()) relevant = head.back().current;
    std::vector<ParseTree> trees = expand(c.val.levels[n - 2]);
    const std::size_t pick = choose(trees, relevant);
    ParseTree chosen = std::move(trees[pick]);
    trees.erase(trees.begin() + static_cast<std::ptrdiff_t>(pick));

    ReminderSequence next_rs = head;
    next_rs.pairs.push_back({chosen.label(), sorted_roots(trees)});
    Valuation val = restrict(c.val, n - 1);
    val.levels.back() = to_multiset(trees);
    out.next = {next_rs, c.word, compactify(std::move(val), next_rs), std::move(chosen)};
    out.rule = 5;
    out.case_number = 3;
    return out;
  }

  if (!c.tree.is_variable() || c.tree.is_hole() || c.tree.label() != last.current ||
      c.tree.production() >= static_cast<int>(g.productions().size())) {
    throw PreconditionError("tree must be a full tree rooted at the last Current");
  }
  const ReminderSequence head = rs.prefix(n - 1);
  std::optional<VarId> head_end;
  if (!head.empty()) head_end = head.back().current;
  std::vector<ParseTree> children = variable_children(c.tree);
  out.label = root_word(c.tree);
  out.production = c.tree.production();

  auto finish = [&](ReminderSequence next_rs, Valuation val, ParseTree chosen) {
    Word word = c.word;
    word.insert(word.end(), out.label.begin(), out.label.end());
    Valuation compact = compactify(std::move(val), next_rs);
    out.next = {std::move(next_rs), std::move(word), std::move(compact), std::move(chosen)};
  };

  if (last.followup.empty()) {
    if (children.empty()) {
      ReminderSequence next_rs = head;
      next_rs.pairs.push_back({kBottomVar, {}});
      out.rule = 3;
      out.case_number = 1;
      Word word = c.word;
      word.insert(word.end(), out.label.begin(), out.label.end());
      out.next = {std::move(next_rs), std::move(word), c.val, ParseTree::bottom()};
      return out;
    }
    const std::size_t pick = choose(children, head_end);
    ParseTree chosen = std::move(children[pick]);
    children.erase(children.begin() + static_cast<std::ptrdiff_t>(pick));
    ReminderSequence next_rs = head;
    next_rs.pairs.push_back({chosen.label(), sorted_roots(children)});
    Valuation val = c.val;
    val.levels.back() = to_multiset(children);
    out.rule = 1;
    out.case_number = 2;
    finish(std::move(next_rs), std::move(val), std::move(chosen));
    return out;
  }

  if (children.empty()) {
    std::vector<ParseTree> trees = expand(c.val.levels[n - 1]);
    const std::size_t pick = choose(trees, head_end);
    ParseTree chosen = std::move(trees[pick]);
    trees.erase(trees.begin() + static_cast<std::ptrdiff_t>(pick));
    ReminderSequence next_rs = head;
    next_rs.pairs.push_back({chosen.label(), sorted_roots(trees)});
    Valuation val = c.val;
    val.levels.back() = to_multiset(trees);
    out.rule = 4;
    out.case_number = 4;
    finish(std::move(next_rs), std::move(val), std::move(chosen));
    return out;
  }

  const std::size_t pick = choose(children, last.current);
  ParseTree chosen = std::move(children[pick]);
  children.erase(children.begin() + static_cast<std::ptrdiff_t>(pick));
  ReminderSequence next_rs = rs;
  next_rs.pairs.push_back({chosen.label(), sorted_roots(children)});
  Valuation val = c.val;
  val.levels.push_back(to_multiset(children));
  out.rule = 2;
  out.case_number = 5;
  finish(std::move(next_rs), std::move(val), std::move(chosen));
  return out;
}

CompletenessTrace completeness_trace(const Grammar& g, const ParseTree& t, bool check) {
  Configuration c = initial_configuration(g, t);
  CompletenessTrace trace;
  const ParikhVector target = yield_parikh(t);
  auto fail = [&](std::size_t k, const std::string& what) {
    throw InvariantError("trace step " + std::to_string(k) + " (" + to_string(g, c.rs) + "): " + what);
  };
  if (check) {
    if (std::string e = check_configuration(c); !e.empty()) fail(0, e);
  }
  long long size = config_size(c);
  while (size > 1) {
    StepResult r = step(c, g);
    const long long next_size = config_size(r.next);
    RunStep move{c.rs, r.label, r.rule, r.production, r.next.rs};
    if (check) {
      const std::vector<Successor> legal = successors(c.rs, g);
      const Successor s{r.label, r.rule, r.production, r.next.rs};
      if (!std::binary_search(legal.begin(), legal.end(), s)) fail(trace.run.size() + 1, "move is not a transition");
      if (next_size >= size) fail(trace.run.size() + 1, "size did not decrease");
      if (conserved_parikh(r.next) != target) fail(trace.run.size() + 1, "Parikh image not conserved");
      if (std::string e = check_configuration(r.next); !e.empty()) fail(trace.run.size() + 1, e);
    }
    TraceRecord rec;
    rec.step = static_cast<int>(trace.run.size()) + 1;
    rec.case_number = r.case_number;
    rec.move = move;
    rec.f_before = size;
    rec.f_after = next_size;
    rec.word_parikh = parikh(r.next.word);
    rec.conserved = conserved_parikh(r.next);
    trace.records.push_back(std::move(rec));
    trace.run.push_back(std::move(move));
    c = std::move(r.next);
    size = next_size;
  }
  if (c.rs != ReminderSequence::final_state()) {
    throw InvariantError("trace stopped at " + to_string(g, c.rs) + " instead of the final state");
  }
  trace.word = c.word;
  if (check && parikh(trace.word) != target) throw InvariantError("accepted word has the wrong Parikh image");
  return trace;
}

nlohmann::json to_json(const Grammar& g, const TraceRecord& r) {
  auto vec = [&g](const ParikhVector& v) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [t, count] : v.entries()) j[g.terminal_name(t)] = count;
    return j;
  };
  return {{"step", r.step},
          {"case", r.case_number},
          {"rule", r.move.rule},
          {"production", r.move.production},
          {"label", word_to_string(g, r.move.label)},
          {"src", to_string(g, r.move.src)},
          {"dst", to_string(g, r.move.dst)},
          {"f_before", r.f_before},
          {"f_after", r.f_after},
          {"word_parikh", vec(r.word_parikh)},
          {"conserved", vec(r.conserved)}};
}

std::vector<RunStep> run_steps(const Nfa& a, const std::vector<int>& transitions) {
  std::vector<RunStep> out;
  for (int ti : transitions) {
    const Transition& t = a.transitions.at(ti);
    if (t.src >= static_cast<int>(a.states.size()) || t.dst >= static_cast<int>(a.states.size())) {
      throw PreconditionError("run passes through letter-expansion states");
    }
    out.push_back({a.states[t.src], t.label, t.rule, t.production, a.states[t.dst]});
  }
  return out;
}

std::vector<int> locate_run(const Nfa& a, const std::vector<RunStep>& run) {
  std::vector<int> out;
  const auto outgoing = a.outgoing();
  for (std::size_t k = 0; k < run.size(); ++k) {
    const auto src = a.find_state(run[k].src);
    int found = -1;
    if (src) {
      for (int ti : outgoing[*src]) {
        const Transition& t = a.transitions[ti];
        if (t.label == run[k].label && t.rule == run[k].rule && t.production == run[k].production &&
            t.dst < static_cast<int>(a.states.size()) && a.states[t.dst] == run[k].dst) {
          found = ti;
          break;
        }
      }
    }
    if (found < 0) throw PreconditionError("step " + std::to_string(k + 1) + " is not a transition");
    out.push_back(found);
  }
  return out;
}

SoundnessResult soundness_reconstruct(const Grammar& g, const std::vector<RunStep>& run) {
  SoundnessResult out;
  std::vector<Symbol> form{Symbol::variable(g.axiom())};
  ReminderSequence at = ReminderSequence::initial(g.axiom());
  ParikhVector read;
  for (std::size_t k = 0; k < run.size(); ++k) {
    const RunStep& s = run[k];
    const std::string where = "step " + std::to_string(k + 1);
    if (s.src != at) throw PreconditionError(where + " does not start where the previous one ended");
    const std::vector<Successor> legal = successors(s.src, g);
    if (!std::binary_search(legal.begin(), legal.end(), Successor{s.label, s.rule, s.production, s.dst})) {
      throw PreconditionError(where + " is not a transition");
    }
    if (s.rule != 5) {
      const VarId a = s.src.back().current;
      auto it = std::find(form.begin(), form.end(), Symbol::variable(a));
      if (it == form.end()) throw InvariantError(where + ": active variable missing from the sentential form");
      const std::vector<Symbol>& rhs = g.productions()[s.production].rhs;
      it = form.erase(it);
      form.insert(it, rhs.begin(), rhs.end());
    }
    read += parikh(s.label);
    if (symbols_variables(form) != s.dst.multiset()) {
      throw InvariantError(where + ": variables of the sentential form differ from the sequence multiset");
    }
    if (symbols_parikh(form) != read) {
      throw InvariantError(where + ": terminals of the sentential form differ from the letters read");
    }
    out.forms.push_back(form);
    at = s.dst;
  }
  if (at != ReminderSequence::final_state()) throw PreconditionError("run does not end in the final state");
  for (const Symbol& s : form) out.word.push_back(s.id);
  return out;
}

std::optional<std::vector<int>> random_accepting_run(const Nfa& a, Rng& rng, std::size_t max_steps) {
  if (a.final_state < 0) return std::nullopt;
  const std::size_t n = a.state_count();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<int>> incoming(n);
  for (int i = 0; i < static_cast<int>(a.transitions.size()); ++i) incoming[a.transitions[i].dst].push_back(i);
  std::vector<std::size_t> dist(n, kInf);
  std::deque<int> queue{a.final_state};
  dist[a.final_state] = 0;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int ti : incoming[s]) {
      const int src = a.transitions[ti].src;
      if (dist[src] == kInf) {
        dist[src] = dist[s] + 1;
        queue.push_back(src);
      }
    }
  }
  if (dist[a.initial] == kInf) return std::nullopt;

  const auto outgoing = a.outgoing();
  std::vector<int> run;
  int s = a.initial;
  while (s != a.final_state) {
    std::vector<int> closer;
    std::vector<int> viable;
    for (int ti : outgoing[s]) {
      const std::size_t d = dist[a.transitions[ti].dst];
      if (d == kInf) continue;
      viable.push_back(ti);
      if (d < dist[s]) closer.push_back(ti);
    }
    int ti;
    if (run.size() >= max_steps) {
      ti = closer.front();
    } else if (rng.chance(3, 4)) {
      ti = closer[rng.below(closer.size())];
    } else {
      ti = viable[rng.below(viable.size())];
    }
    run.push_back(ti);
    s = a.transitions[ti].dst;
  }
  return run;
}

}  // namespace parikh

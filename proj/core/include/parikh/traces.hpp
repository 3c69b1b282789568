#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "parikh/automaton.hpp"
#include "parikh/grammar.hpp"
#include "parikh/parse_tree.hpp"

namespace parikh {

class Rng;

// Multiset of trees at one level: tree -> multiplicity (always positive).
using TreeMultiset = std::map<ParseTree, int>;

// Level i (1-based) of a valuation is levels[i - 1].
struct Valuation {
  std::vector<TreeMultiset> levels;

  std::size_t size() const { return levels.size(); }
  static Valuation empty(std::size_t length) { return {std::vector<TreeMultiset>(length)}; }

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

void add_tree(TreeMultiset& level, const ParseTree& t, int count = 1);
// Removes one copy; throws PreconditionError when absent.
void remove_tree(TreeMultiset& level, const ParseTree& t);
// Copies in map order, multiplicities expanded.
std::vector<ParseTree> expand(const TreeMultiset& level);

// f(bottom) = 1; 2 for a variable root without variable children; otherwise
// 1 plus f of the variable-rooted immediate subtrees.
long long info_f(const ParseTree& t);
// Multiplicity-weighted sum over all levels.
long long info_f(const Valuation& val);

ParikhVector valuation_parikh(const Valuation& val);

// Empty when val is a valuation for rs (level count and root multisets match
// the followups).
std::string check_valuation(const Valuation& val, const ReminderSequence& rs);

// Variables labelling trees at levels <= i (below) or >= i (above); 1-based.
std::set<VarId> vars_below(const Valuation& val, std::size_t i);
std::set<VarId> vars_above(const Valuation& val, std::size_t i);

struct CompactnessViolation {
  int property = 0;  // 1, 2 or 3
  std::size_t level = 0;  // offending tree's level, 1-based
  std::size_t index = 0;  // the i (or k for property 1) of the failed clause
  VarId variable = -1;
  std::string message;
};

std::optional<CompactnessViolation> first_violation(const Valuation& val, const ReminderSequence& rs,
                                                    bool include_third = true);
inline bool is_compact(const Valuation& val, const ReminderSequence& rs) {
  return !first_violation(val, rs).has_value();
}

// Compact valuation with the same Parikh image and V[val'↓i] ⊇ V[val↓i].
// Throws PreconditionError when val already violates property 1 or 2.
Valuation compactify(Valuation val, const ReminderSequence& rs);

// Prefix of length i, 1 <= i <= size.
Valuation restrict(const Valuation& val, std::size_t i);
ReminderSequence restrict(const ReminderSequence& rs, std::size_t i);

struct Configuration {
  ReminderSequence rs;
  Word word;
  Valuation val;
  ParseTree tree;
};

// f(val) + f(tree).
long long config_size(const Configuration& c);
// Π(val) + Π(word) + Π(Y(tree)), conserved by step.
ParikhVector conserved_parikh(const Configuration& c);

// Empty when c is well formed (valuation fits, root label matches, val
// compact) and satisfies the three stepping preconditions; otherwise the
// first failure.
std::string check_configuration(const Configuration& c);

Configuration initial_configuration(const Grammar& g, const ParseTree& t);

struct StepResult {
  Configuration next;
  Word label;
  int rule = 0;
  int production = -1;
  int case_number = 0;
};

// One move of the traversal. Requires config_size(c) > 1.
StepResult step(const Configuration& c, const Grammar& g);

// One automaton move in terms of its endpoints.
struct RunStep {
  ReminderSequence src;
  Word label;
  int rule = 0;
  int production = -1;
  ReminderSequence dst;

  friend auto operator<=>(const RunStep&, const RunStep&) = default;
};

struct TraceRecord {
  int step = 0;
  int case_number = 0;
  RunStep move;
  long long f_before = 0;
  long long f_after = 0;
  ParikhVector word_parikh;    // Π of the word read so far, after the step
  ParikhVector conserved;      // Π(val) + Π(w) + Π(Y(t)) after the step
};

struct CompletenessTrace {
  Word word;
  std::vector<RunStep> run;
  std::vector<TraceRecord> records;
};

// Steps from the initial configuration of a full parse tree rooted at the
// axiom until the size reaches 1. With `check`, every step is verified
// (legal move, strict size decrease, Parikh conservation, preconditions
// re-established) and a failure throws InvariantError.
CompletenessTrace completeness_trace(const Grammar& g, const ParseTree& t, bool check = true);

nlohmann::json to_json(const Grammar& g, const TraceRecord& r);

std::vector<RunStep> run_steps(const Nfa& a, const std::vector<int>& transitions);
// Transition indices realising the steps; throws PreconditionError when some
// step is not a transition of a.
std::vector<int> locate_run(const Nfa& a, const std::vector<RunStep>& run);

struct SoundnessResult {
  Word word;
  std::vector<std::vector<Symbol>> forms;  // sentential form after each step
};

// Replays an accepting run from the axiom, rewriting the leftmost occurrence
// of the active variable. Throws PreconditionError for an invalid run and
// InvariantError if the bookkeeping identities ever fail.
SoundnessResult soundness_reconstruct(const Grammar& g, const std::vector<RunStep>& run);

// Random walk from the initial to the final state. Moves toward the final
// state with probability 3/4 (any move that can still reach it otherwise)
// and switches to a shortest path after max_steps. Empty optional when the
// final state is unreachable.
std::optional<std::vector<int>> random_accepting_run(const Nfa& a, Rng& rng,
                                                     std::size_t max_steps = 200);

}  // namespace parikh

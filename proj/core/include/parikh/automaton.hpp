#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "parikh/grammar.hpp"
#include "parikh/reminder_graph.hpp"

namespace parikh {

inline constexpr VarId kBottomVar = -1;

// (Current, Followup). Current is a variable or kBottomVar; Followup is a
// multiset of variables kept as a sorted list so pairs compare structurally.
struct ReminderPair {
  VarId current = kBottomVar;
  std::vector<VarId> followup;

  bool is_bottom() const { return current == kBottomVar; }

  friend auto operator<=>(const ReminderPair&, const ReminderPair&) = default;
};

// A state of the construction: a sequence of reminder pairs.
struct ReminderSequence {
  std::vector<ReminderPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  const ReminderPair& back() const { return pairs.back(); }
  const ReminderPair& operator[](std::size_t i) const { return pairs[i]; }

  // Number of pairs whose Current is v.
  int occurrences(VarId v) const;
  // Variables of the i-th pair (0-based): its Current and Followup.
  std::vector<VarId> variables_at(std::size_t i) const;
  // Sum of all Followups plus the last pair's Current, as a sorted multiset.
  std::vector<VarId> multiset() const;
  // Prefix of length i.
  ReminderSequence prefix(std::size_t i) const;

  static ReminderSequence initial(VarId axiom) { return {{{axiom, {}}}}; }
  static ReminderSequence final_state() { return {{{kBottomVar, {}}}}; }

  friend auto operator<=>(const ReminderSequence&, const ReminderSequence&) = default;
};

struct ReminderSequenceHash {
  std::size_t operator()(const ReminderSequence& rs) const;
};

// Textual form "(A2,[A2])(A1,[])" with "_bot_" for the bottom symbol.
std::string to_string(const Grammar& g, const ReminderSequence& rs);

// One licensed move out of a state. Rules are numbered 1..5; production is
// -1 for rule 5.
struct Successor {
  Word label;
  int rule = 0;
  int production = -1;
  ReminderSequence target;

  friend auto operator<=>(const Successor&, const Successor&) = default;
};

// Every successor of rs under rules 1-5, sorted and without duplicates.
// Targets in which some variable is Current three or more times are dropped.
std::vector<Successor> successors(const ReminderSequence& rs, const Grammar& g);

struct Transition {
  int src = 0;
  Word label;
  int rule = 0;
  int production = -1;
  int dst = 0;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

// Finite automaton over words. States 0..states.size()-1 are reminder
// sequences; letter expansion appends `chain_states` anonymous states after
// them.
struct Nfa {
  std::vector<std::string> variables;
  std::vector<std::string> terminals;
  std::vector<ReminderSequence> states;
  std::size_t chain_states = 0;
  int initial = 0;
  int final_state = -1;  // -1 when the final sequence is unreachable
  std::vector<Transition> transitions;

  std::size_t state_count() const { return states.size() + chain_states; }
  std::optional<int> find_state(const ReminderSequence& rs) const;
  // Transition indices leaving each state.
  std::vector<std::vector<int>> outgoing() const;

  friend bool operator==(const Nfa&, const Nfa&) = default;
};

struct BuildOptions {
  std::size_t state_budget = 1'000'000;
};

// Breadth-first closure of successors from [(S, {})]. States are numbered in
// discovery order, so equal grammars give equal automata. Throws
// BudgetExceeded once more than state_budget states are discovered.
Nfa build(const Grammar& g, const BuildOptions& options = {});

struct AcceptResult {
  bool accepted = false;
  std::vector<int> run;  // transition indices, initial to final
};

AcceptResult accepts(const Nfa& a, const Word& word);

// {Pi(w) : w accepted, |w| <= k}, by search over (state, vector) pairs.
ParikhSet bounded_parikh_nfa(const Nfa& a, int k, std::size_t budget = 20'000'000);

// Splits every label longer than one letter into a chain through fresh
// states.
Nfa expand_letters(const Nfa& a);

struct InvariantViolation {
  int state = -1;
  std::string claim;
  std::string message;
};

struct InvariantReport {
  std::size_t states_checked = 0;
  std::size_t max_length = 0;
  int d = 0;
  std::vector<InvariantViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Structural claims checked on one sequence; empty when all hold.
std::vector<InvariantViolation> check_sequence(const ReminderSequence& rs, const Grammar& g,
                                               const ReminderGraph& rg, const Relation& reach,
                                               int d);

// check_sequence over every reminder-sequence state of a.
InvariantReport check_state_invariants(const Nfa& a, const Grammar& g, const ReminderGraph& rg,
                                       int d);

struct SizeReport {
  int n = 0;
  int m = 0;
  int d = 0;
  int e = 0;
  int p_count = 0;
  std::size_t word_states = 0;
  std::size_t letter_states = 0;
  std::size_t word_transitions = 0;
  std::size_t letter_transitions = 0;
  long double reference = 0;  // n * d^(2d(m+1))
  bool word_exceeds_reference = false;
  bool letter_exceeds_reference = false;
  std::size_t max_length = 0;
  // Longest state exceeds d pairs (the tighter length reading); informational.
  bool length_exceeds_d = false;
};

SizeReport size_report(const Nfa& a, const Grammar& g, int d);

nlohmann::json nfa_to_json(const Nfa& a);
Nfa nfa_from_json(const nlohmann::json& j);
std::string nfa_to_dot(const Nfa& a);
nlohmann::json size_report_to_json(const SizeReport& r);

}  // namespace parikh

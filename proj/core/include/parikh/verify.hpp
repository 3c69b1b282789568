#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "parikh/automaton.hpp"
#include "parikh/generators.hpp"
#include "parikh/grammar.hpp"

namespace parikh {

enum class Verdict { kEqual, kUnequal, kInconclusive };

std::string to_string(Verdict v);

struct VerifyBudget {
  std::size_t grammar_vectors = 2'000'000;
  std::size_t automaton_visits = 20'000'000;
  std::size_t states = 1'000'000;
};

struct EquivalenceReport {
  Verdict verdict = Verdict::kInconclusive;
  int k = 0;
  ParikhSet grammar_side;
  ParikhSet automaton_side;
  std::vector<ParikhVector> only_grammar;
  std::vector<ParikhVector> only_automaton;
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::string note;  // budget message when inconclusive
};

// Compares {Π(w) : w ∈ L(G), |w| <= k} with the same set for the automaton
// (built from g unless one is supplied). A budget overrun on either side
// gives an inconclusive verdict.
EquivalenceReport verify_parikh_equivalence(const Grammar& g, int k, const Nfa* nfa = nullptr,
                                            const VerifyBudget& budget = {});

nlohmann::json to_json(const std::vector<std::string>& terminals, const EquivalenceReport& r);

struct StressOptions {
  int trials = 100;
  int k = 6;
  RandomGrammarSpec spec;  // spec.seed is the base seed
  int trees_per_grammar = 2;
  std::size_t max_tree_nodes = 40;
  int runs_per_grammar = 2;
  int jobs = 1;
  bool shrink = true;
  VerifyBudget budget;
};

// Empty when g passes every check: bounded equivalence, the state invariant
// suite, width 1 for right-linear specs, and trace round trips in both
// directions. Inconclusive equivalence is reported through `inconclusive`.
std::string check_grammar(const Grammar& g, const StressOptions& options, std::uint64_t seed,
                          bool* inconclusive = nullptr);

struct StressFailure {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string grammar;
  std::string message;
  std::string shrunk_grammar;
  std::string shrunk_message;
};

struct StressReport {
  int trials = 0;
  int passed = 0;
  int failed = 0;
  int inconclusive = 0;
  std::optional<StressFailure> first_failure;
  double seconds = 0;

  bool ok() const { return failed == 0; }
};

// Seed of trial i, derived from the base seed.
std::uint64_t trial_seed(std::uint64_t base, int trial);

StressReport stress(const StressOptions& options);

// Greedy reduction of a failing grammar: drop alternatives, then shorten
// right-hand sides, then drop variables, keeping each change only while
// `fails` still holds.
template <typename Pred>
Grammar shrink_grammar(Grammar g, Pred&& fails);

nlohmann::json to_json(const StressReport& r);

namespace detail {
std::vector<Grammar> shrink_candidates(const Grammar& g);
}

template <typename Pred>
Grammar shrink_grammar(Grammar g, Pred&& fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (Grammar& candidate : detail::shrink_candidates(g)) {
      if (fails(candidate)) {
        g = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return g;
}

}  // namespace parikh

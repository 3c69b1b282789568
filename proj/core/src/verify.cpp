#include "parikh/verify.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <iterator>

#include <nlohmann/json.hpp>

#include "parikh/error.hpp"
#include "parikh/parse_tree.hpp"
#include "parikh/random.hpp"
#include "parikh/reminder_graph.hpp"
#include "parikh/traces.hpp"

namespace parikh {

namespace {

nlohmann::json vector_json(const std::vector<std::string>& terminals, const ParikhVector& v) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [t, count] : v.entries()) j[terminals.at(t)] = count;
  return j;
}

template <typename Range>
nlohmann::json vectors_json(const std::vector<std::string>& terminals, const Range& vs) {
  nlohmann::json j = nlohmann::json::array();
  for (const ParikhVector& v : vs) j.push_back(vector_json(terminals, v));
  return j;
}

struct TrialOutcome {
  bool generated = true;
  bool inconclusive = false;
  std::string grammar;
  std::string failure;
};

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kEqual:
      return "equal";
    case Verdict::kUnequal:
      return "unequal";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

EquivalenceReport verify_parikh_equivalence(const Grammar& g, int k, const Nfa* nfa,
                                            const VerifyBudget& budget) {
  if (k < 0) throw PreconditionError("bound k must be nonnegative");
  EquivalenceReport r;
  r.k = k;
  try {
    r.grammar_side = bounded_parikh_language(g, k, budget.grammar_vectors);
    Nfa built;
    if (nfa == nullptr) {
      built = build(g, {budget.states});
      nfa = &built;
    }
    r.states = nfa->state_count();
    r.transitions = nfa->transitions.size();
    r.automaton_side = bounded_parikh_nfa(*nfa, k, budget.automaton_visits);
  } catch (const BudgetExceeded& e) {
    r.verdict = Verdict::kInconclusive;
    r.note = e.what();
    return r;
  }
  std::set_difference(r.grammar_side.begin(), r.grammar_side.end(), r.automaton_side.begin(),
                      r.automaton_side.end(), std::back_inserter(r.only_grammar));
  std::set_difference(r.automaton_side.begin(), r.automaton_side.end(), r.grammar_side.begin(),
                      r.grammar_side.end(), std::back_inserter(r.only_automaton));
  r.verdict = r.only_grammar.empty() && r.only_automaton.empty() ? Verdict::kEqual : Verdict::kUnequal;
  return r;
}

nlohmann::json to_json(const std::vector<std::string>& terminals, const EquivalenceReport& r) {
  nlohmann::json j = {{"verdict", to_string(r.verdict)},
                      {"k", r.k},
                      {"grammar_side", vectors_json(terminals, r.grammar_side)},
                      {"automaton_side", vectors_json(terminals, r.automaton_side)},
                      {"only_grammar", vectors_json(terminals, r.only_grammar)},
                      {"only_automaton", vectors_json(terminals, r.only_automaton)},
                      {"states", r.states},
                      {"transitions", r.transitions}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string check_grammar(const Grammar& g, const StressOptions& options, std::uint64_t seed,
                          bool* inconclusive) {
  if (inconclusive != nullptr) *inconclusive = false;
  try {
    Rng rng(seed);
    const Nfa nfa = build(g, {options.budget.states});
    const EquivalenceReport eq = verify_parikh_equivalence(g, options.k, &nfa, options.budget);
    if (eq.verdict == Verdict::kInconclusive && inconclusive != nullptr) *inconclusive = true;
    if (eq.verdict == Verdict::kUnequal) {
      const ParikhVector& w = eq.only_grammar.empty() ? eq.only_automaton.front() : eq.only_grammar.front();
      return std::string("bounded Parikh sets differ at ") + parikh_to_string(g.terminals(), w) +
             (eq.only_grammar.empty() ? " (automaton only)" : " (grammar only)");
    }

    const ReminderGraph rg = build_reminder_graph(g);
    int d;
    try {
      d = regularity_width(rg, WidthMode::kExact).d;
    } catch (const BudgetExceeded&) {
      d = regularity_width(rg, WidthMode::kHeuristic).d;
    }
    const InvariantReport inv = check_state_invariants(nfa, g, rg, d);
    if (!inv.ok()) return "state invariant " + inv.violations.front().claim + ": " + inv.violations.front().message;

    if (options.spec.right_linear) {
      if (rg.graph.edge_count() != 0 || d != 1) return "right-linear grammar with width " + std::to_string(d);
      for (const ReminderSequence& rs : nfa.states) {
        if (rs.size() != 1) return "right-linear automaton state " + to_string(g, rs) + " has several pairs";
      }
      if (nfa.states.size() > static_cast<std::size_t>(g.variable_count()) + 1) {
        return "right-linear automaton has " + std::to_string(nfa.states.size()) + " states";
      }
    }

    for (int i = 0; i < options.trees_per_grammar; ++i) {
      ParseTree t;
      try {
        t = sample_tree(g, g.axiom(), options.max_tree_nodes, rng);
      } catch (const PreconditionError&) {
        break;
      }
      const CompletenessTrace trace = completeness_trace(g, t, true);
      locate_run(nfa, trace.run);
      const SoundnessResult back = soundness_reconstruct(g, trace.run);
      if (parikh(back.word) != parikh(trace.word) || parikh(trace.word) != yield_parikh(t)) {
        return "trace round trip changed the Parikh image of " + to_sexpr(g, t);
      }
    }
    for (int i = 0; i < options.runs_per_grammar; ++i) {
      const auto run = random_accepting_run(nfa, rng);
      if (!run) break;
      const std::vector<RunStep> steps = run_steps(nfa, *run);
      ParikhVector read;
      for (const RunStep& s : steps) read += parikh(s.label);
      if (parikh(soundness_reconstruct(g, steps).word) != read) {
        return "reconstructed word differs from the run's Parikh image";
      }
    }
  } catch (const BudgetExceeded& e) {
    if (inconclusive != nullptr) *inconclusive = true;
    return "";
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::uint64_t trial_seed(std::uint64_t base, int trial) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

std::vector<Grammar> shrink_candidates(const Grammar& g) {
  const std::vector<Grammar::NamedProduction> prods = g.named_productions();
  const std::string axiom = g.variable_name(g.axiom());
  std::vector<Grammar> out;
  auto attempt = [&](const std::vector<Grammar::NamedProduction>& candidate) {
    if (candidate.empty()) return;
    try {
      Grammar next = sanitize(Grammar(axiom, candidate));
      if (!(next == g)) out.push_back(std::move(next));
    } catch (const Error&) {
    }
  };

  for (std::size_t p = 0; p < prods.size(); ++p) {
    const auto same_lhs = std::count_if(prods.begin(), prods.end(),
                                        [&](const auto& q) { return q.first == prods[p].first; });
    if (same_lhs < 2) continue;
    auto candidate = prods;
    candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(p));
    attempt(candidate);
  }
  for (std::size_t p = 0; p < prods.size(); ++p) {
    for (std::size_t i = 0; i < prods[p].second.size(); ++i) {
      auto candidate = prods;
      auto& rhs = candidate[p].second;
      rhs.erase(rhs.begin() + static_cast<std::ptrdiff_t>(i));
      attempt(candidate);
    }
  }
  for (const std::string& v : g.variables()) {
    if (v == axiom) continue;
    std::vector<Grammar::NamedProduction> candidate;
    for (const auto& q : prods) {
      if (q.first != v && std::find(q.second.begin(), q.second.end(), v) == q.second.end()) {
        candidate.push_back(q);
      }
    }
    attempt(candidate);
  }
  return out;
}

}  // namespace detail

StressReport stress(const StressOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  StressReport report;
  report.trials = std::max(0, options.trials);
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(report.trials));

  auto run_trial = [&](int i) {
    TrialOutcome& o = outcomes[static_cast<std::size_t>(i)];
    RandomGrammarSpec spec = options.spec;
    spec.seed = trial_seed(options.spec.seed, i);
    try {
      const Grammar g = random_grammar(spec);
      o.grammar = render_grammar(g);
      o.failure = check_grammar(g, options, spec.seed, &o.inconclusive);
    } catch (const Error& e) {
      o.generated = false;
      o.failure = e.what();
    }
  };

  const int jobs = std::clamp(options.jobs, 1, std::max(1, report.trials));
  if (jobs == 1) {
    for (int i = 0; i < report.trials; ++i) run_trial(i);
  } else {
    std::vector<std::future<void>> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (int i = w; i < report.trials; i += jobs) run_trial(i);
      }));
    }
    for (auto& f : workers) f.get();
  }

  for (int i = 0; i < report.trials; ++i) {
    const TrialOutcome& o = outcomes[static_cast<std::size_t>(i)];
    if (!o.failure.empty()) {
      ++report.failed;
      if (!report.first_failure) {
        report.first_failure = StressFailure{i, trial_seed(options.spec.seed, i), o.grammar, o.failure, o.grammar, o.failure};
      }
    } else if (o.inconclusive) {
      ++report.inconclusive;
    } else {
      ++report.passed;
    }
  }

  if (report.first_failure && options.shrink && !report.first_failure->grammar.empty()) {
    StressFailure& f = *report.first_failure;
    const Grammar shrunk = shrink_grammar(parse_grammar(f.grammar), [&](const Grammar& candidate) {
      return !check_grammar(candidate, options, f.seed).empty();
    });
    f.shrunk_grammar = render_grammar(shrunk);
    f.shrunk_message = check_grammar(shrunk, options, f.seed);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json to_json(const StressReport& r) {
  nlohmann::json j = {{"trials", r.trials},
                      {"passed", r.passed},
                      {"failed", r.failed},
                      {"inconclusive", r.inconclusive},
                      {"seconds", r.seconds}};
  if (r.first_failure) {
    const StressFailure& f = *r.first_failure;
    j["first_failure"] = {{"trial", f.trial},
                          {"seed", f.seed},
                          {"grammar", f.grammar},
                          {"message", f.message},
                          {"shrunk_grammar", f.shrunk_grammar},
                          {"shrunk_message", f.shrunk_message}};
  } else {
    j["first_failure"] = nullptr;
  }
  return j;
}

}  // namespace parikh

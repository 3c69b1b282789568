#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "parikh/automaton.hpp"
#include "parikh/error.hpp"
#include "parikh/generators.hpp"
#include "parikh/verify.hpp"
#include "support.hpp"

using namespace parikh;
using testing_support::grammar;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(PARIKH_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Verify, GnIsEqualAtItsOwnLength) {
  for (int n = 2; n <= 5; ++n) {
    const Grammar g = gen_gn(n);
    const int k = 1 << (n - 1);
    const EquivalenceReport r = verify_parikh_equivalence(g, k);
    EXPECT_EQ(r.verdict, Verdict::kEqual) << n;
    ASSERT_EQ(r.grammar_side.size(), 1u);
    EXPECT_EQ(r.grammar_side.begin()->total(), static_cast<std::size_t>(k));
    EXPECT_TRUE(verify_parikh_equivalence(g, k - 1).grammar_side.empty());
  }
}

TEST(Verify, AnBnFixture) {
  const Grammar g = grammar(slurp("anbn.cfg"));
  const Nfa good = nfa_from_json(nlohmann::json::parse(slurp("anbn.json")));
  EXPECT_EQ(good, build(g));
  const EquivalenceReport r = verify_parikh_equivalence(g, 6, &good);
  EXPECT_EQ(r.verdict, Verdict::kEqual);
  EXPECT_EQ(r.grammar_side.size(), 4u);
  EXPECT_TRUE(r.only_grammar.empty());
  EXPECT_TRUE(r.only_automaton.empty());
}

TEST(Verify, CorruptedAutomatonIsUnequal) {
  const Grammar g = grammar(slurp("anbn.cfg"));
  const Nfa broken = nfa_from_json(nlohmann::json::parse(slurp("anbn_broken.json")));
  const EquivalenceReport r = verify_parikh_equivalence(g, 6, &broken);
  EXPECT_EQ(r.verdict, Verdict::kUnequal);
  EXPECT_EQ(r.only_grammar.size(), 3u);
  EXPECT_TRUE(r.only_automaton.empty());
  const nlohmann::json j = to_json(g.terminals(), r);
  EXPECT_EQ(j["verdict"], "unequal");
}

TEST(Verify, DroppingAnyTransitionOfG3IsDetected) {
  const Grammar g = grammar(testing_support::kG3);
  const Nfa a = build(g);
  int detected = 0;
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    Nfa broken = a;
    broken.transitions.erase(broken.transitions.begin() + static_cast<std::ptrdiff_t>(i));
    const EquivalenceReport r = verify_parikh_equivalence(g, 4, &broken);
    EXPECT_TRUE(r.only_automaton.empty());
    if (r.verdict == Verdict::kUnequal) ++detected;
  }
  EXPECT_GE(detected, 1);
  Nfa no_final = a;
  std::erase_if(no_final.transitions, [&](const Transition& t) { return t.dst == a.final_state; });
  EXPECT_EQ(verify_parikh_equivalence(g, 4, &no_final).verdict, Verdict::kUnequal);
}

TEST(Verify, BudgetGivesInconclusive) {
  VerifyBudget tight;
  tight.grammar_vectors = 1;
  tight.automaton_visits = 1;
  const EquivalenceReport r =
      verify_parikh_equivalence(grammar(testing_support::kAnBn), 6, nullptr, tight);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
  EXPECT_FALSE(r.note.empty());
}

TEST(RandomGrammar, DeterministicPerSpec) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const RandomGrammarSpec spec = testing_support::small_spec(seed, 6);
    EXPECT_EQ(render_grammar(random_grammar(spec)), render_grammar(random_grammar(spec)));
    EXPECT_EQ(random_spec_from_json(to_json(spec)).seed, spec.seed);
  }
}

TEST(RandomGrammar, UnarySpec) {
  RandomGrammarSpec spec;
  spec.n = 1;
  spec.terminals = 1;
  spec.max_rhs = 2;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    spec.seed = seed;
    const Grammar g = random_grammar(spec);
    EXPECT_EQ(g.variable_count(), 1);
    EXPECT_LE(g.terminals().size(), 1u);
    EXPECT_EQ(verify_parikh_equivalence(g, 6).verdict, Verdict::kEqual) << render_grammar(g);
  }
  spec.n = 0;
  EXPECT_THROW(random_grammar(spec), PreconditionError);
}

TEST(RandomGrammar, RightLinearShape) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomGrammarSpec spec = testing_support::small_spec(seed, 5);
    spec.right_linear = true;
    const Grammar g = random_grammar(spec);
    for (const Production& p : g.productions()) {
      const auto vars = p.variables();
      ASSERT_LE(vars.size(), 1u);
      if (!vars.empty()) {
        EXPECT_TRUE(p.rhs.back().is_variable());
      }
    }
  }
}

TEST(Stress, ZeroTrials) {
  StressOptions o;
  o.trials = 0;
  const StressReport r = stress(o);
  EXPECT_EQ(r.trials, 0);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.first_failure.has_value());
}

TEST(Stress, RandomGrammarsPass) {
  StressOptions o;
  o.trials = 40;
  o.spec.seed = 7;
  const StressReport r = stress(o);
  EXPECT_TRUE(r.ok()) << (r.first_failure ? r.first_failure->message + "\n" + r.first_failure->grammar : "");
  EXPECT_EQ(r.passed + r.failed, r.trials);
}

TEST(Stress, RightLinearPass) {
  StressOptions o;
  o.trials = 30;
  o.spec.right_linear = true;
  o.spec.n = 4;
  EXPECT_TRUE(stress(o).ok());
}

TEST(Stress, ParallelMatchesSerial) {
  StressOptions o;
  o.trials = 16;
  o.spec.seed = 3;
  const StressReport serial = stress(o);
  o.jobs = 4;
  const StressReport parallel = stress(o);
  EXPECT_EQ(serial.passed, parallel.passed);
  EXPECT_EQ(serial.failed, parallel.failed);
  EXPECT_NE(trial_seed(3, 0), trial_seed(3, 1));
  EXPECT_EQ(to_json(serial)["trials"], 16);
}

TEST(CheckGrammar, CleanOnFixedGrammars) {
  StressOptions o;
  for (const char* text : {testing_support::kG3, testing_support::kAnBn, "start: S\nS -> S S | a | _eps_\n"}) {
    EXPECT_EQ(check_grammar(grammar(text), o, 1), "") << text;
  }
}

TEST(Shrink, KeepsFailingAndGetsSmaller) {
  const Grammar big = grammar("start: S\nS -> A B | a S b | c\nA -> a A | B | a\nB -> b | S c\n");
  // Stand-in failure: the grammar still derives some word with a c.
  auto fails = [&](const Grammar& g) {
    const auto t = g.find_terminal("c");
    if (!t) return false;
    for (const ParikhVector& v : bounded_parikh_language(g, 4)) {
      if (v.count(*t) > 0) return true;
    }
    return false;
  };
  ASSERT_TRUE(fails(big));
  const Grammar small = shrink_grammar(big, fails);
  EXPECT_TRUE(fails(small));
  EXPECT_LT(small.productions().size(), big.productions().size());
  const std::vector<Grammar> next = detail::shrink_candidates(small);
  EXPECT_TRUE(std::none_of(next.begin(), next.end(), fails));
}

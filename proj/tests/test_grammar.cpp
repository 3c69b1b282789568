#include <gtest/gtest.h>

#include "parikh/error.hpp"
#include "parikh/grammar.hpp"
#include "parikh/random.hpp"
#include "support.hpp"

using namespace parikh;
using testing_support::grammar;
using testing_support::kAnBn;
using testing_support::kG3;

namespace {

ParikhVector vec(const Grammar& g, std::initializer_list<std::pair<const char*, int>> entries) {
  ParikhVector v;
  for (auto [name, count] : entries) v.add(*g.find_terminal(name), count);
  return v;
}

}  // namespace

TEST(ParseGrammar, Minimal) {
  const Grammar g = grammar("start: S\nS -> a");
  EXPECT_EQ(g.variables(), std::vector<std::string>{"S"});
  EXPECT_EQ(g.terminals(), std::vector<std::string>{"a"});
  EXPECT_EQ(g.productions().size(), 1u);
}

TEST(ParseGrammar, G3) {
  const Grammar g = grammar(kG3);
  EXPECT_EQ(g.variable_count(), 3);
  EXPECT_EQ(g.terminal_count(), 1);
  EXPECT_EQ(g.productions().size(), 3u);
  EXPECT_EQ(g.variable_name(g.axiom()), "A3");
}

TEST(ParseGrammar, EmptyRhsIsEpsilon) {
  const Grammar g = grammar("start: S\nS ->");
  ASSERT_EQ(g.productions().size(), 1u);
  EXPECT_TRUE(g.productions()[0].rhs.empty());
  EXPECT_EQ(grammar("start: S\nS -> _eps_"), g);
}

TEST(ParseGrammar, AlternativesCommentsAndDuplicates) {
  const Grammar g = grammar("# header\nstart: S  # axiom\n\nS -> a S b | | a S b\nS -> _eps_\n");
  EXPECT_EQ(g.productions().size(), 2u);
  EXPECT_EQ(g.terminals(), (std::vector<std::string>{"a", "b"}));
}

TEST(ParseGrammar, ClassificationIsPositional) {
  const Grammar g = grammar("start: x\nx -> Y z\nz -> Y\n");
  EXPECT_EQ(g.variables(), (std::vector<std::string>{"x", "z"}));
  EXPECT_EQ(g.terminals(), std::vector<std::string>{"Y"});
}

TEST(ParseGrammar, Errors) {
  EXPECT_THROW(grammar("S -> a"), GrammarSyntaxError);
  EXPECT_THROW(grammar("start: S\nS a"), GrammarSyntaxError);
  EXPECT_THROW(grammar("start: T\nS -> a"), GrammarError);
  EXPECT_THROW(grammar("start: S\n"), GrammarError);
  EXPECT_THROW(grammar(""), GrammarError);
  try {
    grammar("start: S\nS a");
    FAIL();
  } catch (const GrammarSyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(ParseGrammar, RenderRoundTrip) {
  for (const char* text : {kG3, kAnBn, "start: S\nS -> S S | a | _eps_\nT -> b\n"}) {
    const Grammar g = grammar(text);
    EXPECT_EQ(parse_grammar(render_grammar(g)), g) << text;
  }
}

TEST(ParseGrammar, RenderRoundTripRandom) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Grammar g = random_grammar(testing_support::small_spec(seed, 5));
    EXPECT_EQ(parse_grammar(render_grammar(g)), g) << render_grammar(g);
  }
}

TEST(Parikh, Examples) {
  const Grammar g = grammar("start: S\nS -> a b");
  EXPECT_TRUE(ParikhVector::of(Word{}).empty());
  const Word aab = testing_support::word(g, "aab");
  EXPECT_EQ(ParikhVector::of(aab), vec(g, {{"a", 2}, {"b", 1}}));
  EXPECT_EQ(ParikhVector::of(testing_support::word(g, "aa")) + ParikhVector::of(testing_support::word(g, "ab")),
            vec(g, {{"a", 3}, {"b", 1}}));
  EXPECT_EQ(parikh_to_string(g.terminals(), ParikhVector::of(aab)), "{a:2, b:1}");
}

TEST(Parikh, MonoidMorphismOnRandomWords) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    Word u, v;
    for (int i = rng.between(0, 12); i > 0; --i) u.push_back(rng.between(0, 3));
    for (int i = rng.between(0, 12); i > 0; --i) v.push_back(rng.between(0, 3));
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const ParikhVector p = ParikhVector::of(uv);
    EXPECT_EQ(p, ParikhVector::of(u) + ParikhVector::of(v));
    EXPECT_EQ(p.total(), static_cast<long long>(uv.size()));
    for (const auto& [t, count] : p.entries()) EXPECT_GT(count, 0);
  }
}

TEST(Stats, Degree) {
  EXPECT_EQ(stats(grammar(kG3)).m, 1);
  EXPECT_EQ(stats(grammar("start: S\nS -> a S | b T\nT -> c")).m, 0);
  EXPECT_EQ(stats(grammar("start: S\nS -> a b")).m, 0);
  const GrammarStats s = stats(grammar("start: S\nS -> a S b S c | d\n"));
  EXPECT_EQ(s.n, 1);
  EXPECT_EQ(s.m, 1);
  EXPECT_EQ(s.e, 3);
  EXPECT_EQ(s.p_count, 2);
}

TEST(Relations, Accessibility) {
  const Grammar g = grammar(kG3);
  const Relation acc = accessibility(g);
  const VarId a1 = *g.find_variable("A1"), a2 = *g.find_variable("A2"), a3 = *g.find_variable("A3");
  EXPECT_EQ(acc.pairs(), (std::vector<std::pair<VarId, VarId>>{{a3, a2}, {a2, a1}}));
  EXPECT_TRUE(accessibility(grammar("start: S\nS -> a")).pairs().empty());
  EXPECT_EQ(accessibility(grammar("start: S\nS -> S a")).pairs(),
            (std::vector<std::pair<VarId, VarId>>{{0, 0}}));
}

TEST(Relations, Reachability) {
  const Grammar g = grammar(kG3);
  const VarId a1 = *g.find_variable("A1"), a2 = *g.find_variable("A2"), a3 = *g.find_variable("A3");
  const Relation reach = reachability(g);
  EXPECT_EQ(reach.pairs().size(), 3u);
  EXPECT_TRUE(reach.contains(a3, a2));
  EXPECT_TRUE(reach.contains(a3, a1));
  EXPECT_TRUE(reach.contains(a2, a1));
  EXPECT_FALSE(reach.contains(a1, a1));
  EXPECT_TRUE(reachability(grammar("start: S\nS -> S a")).contains(0, 0));
  EXPECT_TRUE(reachability(grammar("start: S\nS -> a\nT -> b")).pairs().empty());
}

TEST(Relations, ReachabilityIsClosureOnRandomGrammars) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const Grammar g = random_grammar(testing_support::small_spec(seed, 5));
    const Relation acc = accessibility(g);
    const Relation reach = reachability(g);
    EXPECT_TRUE(reach.includes(acc));
    EXPECT_EQ(transitive_closure(reach), reach);
    for (auto [a, b] : reach.pairs()) {
      for (auto [c, d] : reach.pairs()) {
        if (b == c) {
          EXPECT_TRUE(reach.contains(a, d));
        }
      }
    }
  }
}

TEST(MinYield, Examples) {
  const Grammar g = grammar(kG3);
  const auto y = min_yield(g);
  EXPECT_EQ(*y[*g.find_variable("A1")], 1);
  EXPECT_EQ(*y[*g.find_variable("A2")], 2);
  EXPECT_EQ(*y[*g.find_variable("A3")], 4);
  EXPECT_FALSE(min_yield(grammar("start: S\nS -> a S"))[0].has_value());
  EXPECT_EQ(*min_yield(grammar("start: S\nS ->"))[0], 0);
}

TEST(MinYield, MatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    RandomGrammarSpec spec = testing_support::small_spec(seed, 5);
    const Grammar g = random_grammar(spec);
    const auto y = min_yield(g);
    const auto expected = oracle::min_yield(g);
    for (int v = 0; v < g.variable_count(); ++v) {
      EXPECT_EQ(y[v].value_or(-1), expected[v]);
    }
  }
}

TEST(Sanitize, RemovesUselessVariables) {
  const Grammar g = grammar("start: S\nS -> a | B\nB -> B b\nC -> c\n");
  const Grammar s = sanitize(g);
  EXPECT_EQ(s.variables(), std::vector<std::string>{"S"});
  EXPECT_EQ(s.productions().size(), 1u);
  EXPECT_THROW(sanitize(grammar("start: S\nS -> a S")), GrammarError);
}

TEST(BoundedLanguage, Examples) {
  const Grammar g3 = grammar(kG3);
  EXPECT_EQ(bounded_parikh_language(g3, 4), (ParikhSet{ParikhVector::of(Word{0, 0, 0, 0})}));
  EXPECT_TRUE(bounded_parikh_language(g3, 3).empty());

  const Grammar anbn = grammar(kAnBn);
  EXPECT_EQ(bounded_parikh_language(anbn, 4),
            (ParikhSet{ParikhVector{}, vec(anbn, {{"a", 1}, {"b", 1}}), vec(anbn, {{"a", 2}, {"b", 2}})}));
  EXPECT_EQ(bounded_parikh_language(anbn, 0), ParikhSet{ParikhVector{}});
  EXPECT_TRUE(bounded_parikh_language(grammar("start: S\nS -> a"), 0).empty());
  EXPECT_THROW(bounded_parikh_language(anbn, -1), PreconditionError);
}

TEST(BoundedLanguage, BudgetIsReported) {
  const Grammar g = grammar("start: S\nS -> S S | a | b | c\n");
  EXPECT_THROW(bounded_parikh_language(g, 10, 5), BudgetExceeded);
}

TEST(BoundedLanguage, MatchesSententialFormOracle) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Grammar g = random_grammar(testing_support::small_spec(seed, 4));
    for (int k : {0, 3, 5}) {
      EXPECT_EQ(oracle::to_counts(bounded_parikh_language(g, k), g.terminal_count()),
                oracle::bounded_parikh(g, k))
          << render_grammar(g) << "k=" << k;
    }
  }
}

TEST(BoundedLanguage, MonotoneInK) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Grammar g = random_grammar(testing_support::small_spec(seed, 5));
    ParikhSet previous;
    for (int k = 0; k <= 6; ++k) {
      const ParikhSet current = bounded_parikh_language(g, k);
      EXPECT_TRUE(std::includes(current.begin(), current.end(), previous.begin(), previous.end()));
      for (const ParikhVector& v : current) EXPECT_LE(v.total(), k);
      previous = current;
    }
  }
}

TEST(BoundedLanguage, MinYieldIsTight) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Grammar g = random_grammar(testing_support::small_spec(seed, 5));
    const auto y = min_yield(g);
    for (VarId v = 0; v < g.variable_count(); ++v) {
      if (!y[v] || *y[v] > 8) continue;
      const Grammar rooted = with_axiom(g, v);
      const int q = static_cast<int>(*y[v]);
      EXPECT_FALSE(bounded_parikh_language(rooted, q).empty());
      if (q > 0) {
        EXPECT_TRUE(bounded_parikh_language(rooted, q - 1).empty());
      }
    }
  }
}

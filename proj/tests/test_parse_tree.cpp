#include <gtest/gtest.h>

#include "parikh/error.hpp"
#include "parikh/parse_tree.hpp"
#include "parikh/random.hpp"
#include "support.hpp"

using namespace parikh;
using testing_support::grammar;

namespace {

const char* kG3Tree = "(A3 (A2 (A1 a) (A1 a)) (A2 (A1 a) (A1 a)))";
const char* kAnBnTree = "(S a (S a (S) b) b)";

// Random (t1, t2, a) with t1 not a-recurrence free and t2 mentioning a.
struct SurgeryCase {
  Grammar g;
  ParseTree t1;
  ParseTree t2;
  VarId a;
};

std::optional<SurgeryCase> surgery_case(std::uint64_t seed) {
  Rng rng(seed);
  RandomGrammarSpec spec = testing_support::small_spec(seed, 4);
  spec.max_rhs = std::max(spec.max_rhs, 2);
  Grammar g = random_grammar(spec);
  for (int attempt = 0; attempt < 20; ++attempt) {
    ParseTree t1 = sample_tree(g, g.axiom(), 40, rng);
    ParseTree t2 = sample_tree(g, static_cast<VarId>(rng.below(g.variable_count())), 40, rng);
    for (VarId a : variables_in(t1)) {
      if (!is_recurrence_free(t1, a) && !is_occurrence_free(t2, a)) return SurgeryCase{g, t1, t2, a};
    }
  }
  return std::nullopt;
}

}  // namespace

TEST(ParseTree, YieldHeightAndSexpr) {
  const Grammar g = grammar(testing_support::kG3);
  const ParseTree t = parse_sexpr(g, kG3Tree);
  EXPECT_EQ(to_sexpr(g, t), kG3Tree);
  EXPECT_EQ(yield_word(t), testing_support::word(g, "aaaa"));
  EXPECT_EQ(height(t), 3);
  EXPECT_EQ(check_tree(g, t), "");

  const ParseTree leaf = parse_sexpr(g, "(A1 a)");
  EXPECT_EQ(yield_word(leaf), testing_support::word(g, "a"));
  EXPECT_EQ(height(leaf), 1);
  EXPECT_EQ(height(ParseTree::terminal(0)), 0);

  EXPECT_TRUE(yield_word(ParseTree::bottom()).empty());
  EXPECT_EQ(height(ParseTree::bottom()), 0);
}

TEST(ParseTree, ContextsHaveNoYield) {
  const Grammar g = grammar(testing_support::kG3);
  const ParseTree ctx = parse_sexpr(g, "(A2 A1? (A1 a))");
  EXPECT_TRUE(is_context(ctx));
  EXPECT_THROW(yield_word(ctx), PreconditionError);
  EXPECT_NE(check_tree(g, ctx), "");
  EXPECT_EQ(check_tree(g, ctx, true), "");
}

TEST(ParseTree, CheckTreeRejectsWrongChildren) {
  const Grammar g = grammar(testing_support::kG3);
  EXPECT_NE(check_tree(g, ParseTree::node(*g.find_variable("A2"), 1, {ParseTree::terminal(0)})), "");
  EXPECT_THROW(parse_sexpr(g, "(A2 (A1 a))"), Error);
}

TEST(ParseTree, OccurrenceAndRecurrence) {
  const Grammar g3 = grammar(testing_support::kG3);
  const ParseTree t = parse_sexpr(g3, kG3Tree);
  const VarId a1 = *g3.find_variable("A1"), a2 = *g3.find_variable("A2"), a3 = *g3.find_variable("A3");
  EXPECT_TRUE(is_occurrence_free(ParseTree::bottom(), a2));
  EXPECT_FALSE(is_occurrence_free(t, a2));
  EXPECT_TRUE(is_occurrence_free(parse_sexpr(g3, "(A1 a)"), a2));
  EXPECT_TRUE(is_recurrence_free(t, a3));
  EXPECT_TRUE(is_recurrence_free(t, a1));

  const Grammar anbn = grammar(testing_support::kAnBn);
  const ParseTree s = parse_sexpr(anbn, kAnBnTree);
  EXPECT_FALSE(is_recurrence_free(s, 0));
  EXPECT_TRUE(is_recurrence_free(parse_sexpr(anbn, "(S)"), 0));
}

TEST(Surgery, RemovesOneLevel) {
  const Grammar g = grammar(testing_support::kAnBn);
  const ParseTree t1 = parse_sexpr(g, kAnBnTree);
  const ParseTree t2 = parse_sexpr(g, "(S a (S) b)");
  auto [u1, u2] = reduce_recurrence(t1, t2, 0);
  EXPECT_EQ(to_sexpr(g, u1), "(S)");
  EXPECT_EQ(yield_parikh(u1) + yield_parikh(u2), yield_parikh(t1) + yield_parikh(t2));
  EXPECT_EQ(node_count(u1) + node_count(u2), node_count(t1) + node_count(t2));
  EXPECT_TRUE(is_recurrence_free(u1, 0));
  EXPECT_EQ(check_tree(g, u2), "");
}

TEST(Surgery, SingleMoveDropsOneLoop) {
  const Grammar g = grammar("start: S\nS -> a S b | _eps_\n");
  ParseTree t1 = parse_sexpr(g, "(S a (S a (S a (S) b) b) b)");
  ParseTree t2 = parse_sexpr(g, "(S)");
  ASSERT_TRUE(move_recurrence(t1, t2, 0));
  EXPECT_EQ(to_sexpr(g, t1), "(S a (S a (S) b) b)");
  EXPECT_EQ(to_sexpr(g, t2), "(S a (S) b)");
}

TEST(Surgery, Preconditions) {
  const Grammar g = grammar(testing_support::kAnBn);
  const ParseTree free = parse_sexpr(g, "(S)");
  EXPECT_THROW(reduce_recurrence(free, free, 0), PreconditionError);
  const Grammar g3 = grammar(testing_support::kG3);
  EXPECT_THROW(reduce_recurrence(parse_sexpr(g, kAnBnTree), ParseTree::bottom(), 0), PreconditionError);
  ParseTree t = parse_sexpr(g3, kG3Tree);
  ParseTree into = ParseTree::bottom();
  EXPECT_FALSE(move_recurrence(t, into, *g3.find_variable("A1")));
}

TEST(Surgery, RandomisedProperties) {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 300 && seed < 5000; ++seed) {
    auto c = surgery_case(seed);
    if (!c) continue;
    ++checked;
    ParseTree from = c->t1;
    ParseTree into = c->t2;
    std::size_t before = node_count(from);
    const std::size_t total = node_count(from) + node_count(into);
    while (move_recurrence(from, into, c->a)) {
      ASSERT_LT(node_count(from), before);
      before = node_count(from);
      ASSERT_EQ(node_count(from) + node_count(into), total);
    }
    auto [u1, u2] = reduce_recurrence(c->t1, c->t2, c->a);
    EXPECT_EQ(u1, from);
    EXPECT_EQ(u2, into);
    EXPECT_EQ(yield_parikh(u1) + yield_parikh(u2), yield_parikh(c->t1) + yield_parikh(c->t2));
    EXPECT_TRUE(is_recurrence_free(u1, c->a));
    EXPECT_EQ(u1.label(), c->t1.label());
    EXPECT_EQ(u2.label(), c->t2.label());
    EXPECT_EQ(check_tree(c->g, u1), "");
    EXPECT_EQ(check_tree(c->g, u2), "");
  }
  EXPECT_GE(checked, 300);
}

TEST(Sampler, TreesAreValidAndBounded) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Grammar g = random_grammar(testing_support::small_spec(seed, 5));
    Rng rng(seed);
    const ParseTree t = sample_tree(g, g.axiom(), 40, rng);
    EXPECT_EQ(check_tree(g, t), "");
    EXPECT_LE(node_count(t), 40u);
    EXPECT_EQ(t.label(), g.axiom());
    Rng again(seed);
    EXPECT_EQ(sample_tree(g, g.axiom(), 40, again), t);
    EXPECT_EQ(parse_sexpr(g, to_sexpr(g, t)), t);
  }
}

TEST(Sampler, ImpossibleBoundThrows) {
  const Grammar g = grammar(testing_support::kG3);
  Rng rng(1);
  EXPECT_THROW(sample_tree(g, g.axiom(), 5, rng), PreconditionError);
  EXPECT_EQ(*min_tree_size(g)[g.axiom()], 11u);
}

TEST(Sampler, RecurrenceFreeRootImpliesFreeSubtrees) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Grammar g = random_grammar(testing_support::small_spec(seed, 5));
    Rng rng(seed * 31);
    const ParseTree t = sample_tree(g, g.axiom(), 40, rng);
    const VarId a = t.label();
    if (!is_recurrence_free(t, a)) continue;
    for (const ParseTree& c : t.children()) EXPECT_TRUE(is_occurrence_free(c, a));
  }
}

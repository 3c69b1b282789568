#pragma once

#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "parikh/grammar.hpp"

namespace parikh {

// A_n -> A_{n-1} A_{n-1}, ..., A_2 -> A_1 A_1, A_1 -> a with axiom A_n.
// Generates the single word a^(2^(n-1)).
Grammar gen_gn(int n);

// Program-point grammar: points C1..Cr chained by Ci -> a C(i+1), Cr -> b,
// plus call productions Ci -> P C(i+1) where both P and C(i+1) are ports.
// `ports` of the points are chosen as ports; the seed picks the ports and
// the calls. Every reminder-graph edge then touches a port.
Grammar gen_ports(int points, int ports, std::uint64_t seed);

struct RandomGrammarSpec {
  int n = 3;                // variables, axiom S included
  int max_rhs = 3;          // symbols per right-hand side
  int max_alternatives = 2; // productions per variable
  int terminals = 2;
  bool allow_eps = true;
  bool right_linear = false;  // rhs = terminals, then at most one variable
  std::uint64_t seed = 1;
};

RandomGrammarSpec random_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RandomGrammarSpec& spec);

// Sanitized random grammar with axiom S, deterministic per spec. Throws
// PreconditionError for a nonpositive spec or when no productive grammar
// turns up within a bounded number of attempts.
Grammar random_grammar(const RandomGrammarSpec& spec);

}  // namespace parikh

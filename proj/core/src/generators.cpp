#include "parikh/generators.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parikh/error.hpp"
#include "parikh/random.hpp"

namespace parikh {

namespace {

constexpr int kRandomAttempts = 200;

std::string terminal_name(int i) { return std::string(1, static_cast<char>('a' + i % 26)) + (i >= 26 ? std::to_string(i / 26) : ""); }

std::string variable_name(int i) { return i == 0 ? "S" : "V" + std::to_string(i); }

std::vector<std::string> random_rhs(const RandomGrammarSpec& spec, Rng& rng) {
  const int lo = spec.allow_eps ? 0 : 1;
  const int len = rng.between(lo, spec.max_rhs);
  std::vector<std::string> rhs;
  if (spec.right_linear) {
    const bool tail = len > 0 && rng.chance(1, 2);
    for (int i = 0; i < len - (tail ? 1 : 0); ++i) rhs.push_back(terminal_name(rng.between(0, spec.terminals - 1)));
    if (tail) rhs.push_back(variable_name(rng.between(0, spec.n - 1)));
    return rhs;
  }
  for (int i = 0; i < len; ++i) {
    if (rng.chance(2, 5)) {
      rhs.push_back(variable_name(rng.between(0, spec.n - 1)));
    } else {
      rhs.push_back(terminal_name(rng.between(0, spec.terminals - 1)));
    }
  }
  return rhs;
}

}  // namespace

Grammar gen_gn(int n) {
  if (n < 1) throw PreconditionError("G_n needs n >= 1");
  std::vector<Grammar::NamedProduction> prods;
  for (int j = n; j >= 2; --j) {
    const std::string child = "A" + std::to_string(j - 1);
    prods.push_back({"A" + std::to_string(j), {child, child}});
  }
  prods.push_back({"A1", {"a"}});
  return Grammar("A" + std::to_string(n), prods);
}

Grammar gen_ports(int points, int ports, std::uint64_t seed) {
  if (points < 1 || ports < 1 || ports > points) {
    throw PreconditionError("ports grammar needs 1 <= ports <= points");
  }
  Rng rng(seed);
  auto point = [](int i) { return "C" + std::to_string(i); };
  std::vector<int> ids(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) ids[i] = i + 1;
  rng.shuffle(ids);
  std::vector<int> port_ids(ids.begin(), ids.begin() + ports);
  std::sort(port_ids.begin(), port_ids.end());
  auto is_port = [&](int i) { return std::binary_search(port_ids.begin(), port_ids.end(), i); };

  std::vector<Grammar::NamedProduction> prods;
  for (int i = 1; i < points; ++i) prods.push_back({point(i), {"a", point(i + 1)}});
  prods.push_back({point(points), {"b"}});
  std::vector<Grammar::NamedProduction> calls;
  for (int i = 1; i < points; ++i) {
    if (!is_port(i + 1)) continue;
    const int callee = port_ids[rng.below(port_ids.size())];
    calls.push_back({point(i), {point(callee), point(i + 1)}});
  }
  // Keep a random nonempty subset so the seed also varies the call structure.
  std::vector<Grammar::NamedProduction> kept;
  for (const auto& c : calls) {
    if (rng.chance(2, 3)) kept.push_back(c);
  }
  if (kept.empty() && !calls.empty()) kept.push_back(calls[rng.below(calls.size())]);
  prods.insert(prods.end(), kept.begin(), kept.end());
  return Grammar(point(1), prods);
}

RandomGrammarSpec random_spec_from_json(const nlohmann::json& j) {
  RandomGrammarSpec s;
  try {
    s.n = j.value("n", s.n);
    s.max_rhs = j.value("max_rhs", s.max_rhs);
    s.max_alternatives = j.value("max_alternatives", s.max_alternatives);
    s.terminals = j.value("terminals", s.terminals);
    s.allow_eps = j.value("allow_eps", s.allow_eps);
    s.right_linear = j.value("right_linear", s.right_linear);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed grammar spec: ") + e.what());
  }
  return s;
}

nlohmann::json to_json(const RandomGrammarSpec& s) {
  return {{"n", s.n},
          {"max_rhs", s.max_rhs},
          {"max_alternatives", s.max_alternatives},
          {"terminals", s.terminals},
          {"allow_eps", s.allow_eps},
          {"right_linear", s.right_linear},
          {"seed", s.seed}};
}

Grammar random_grammar(const RandomGrammarSpec& spec) {
  if (spec.n < 1 || spec.max_rhs < 1 || spec.max_alternatives < 1 || spec.terminals < 1) {
    throw PreconditionError("random grammar spec must be positive");
  }
  Rng rng(spec.seed);
  for (int attempt = 0; attempt < kRandomAttempts; ++attempt) {
    std::vector<Grammar::NamedProduction> prods;
    for (int v = 0; v < spec.n; ++v) {
      const int alternatives = rng.between(1, spec.max_alternatives);
      for (int k = 0; k < alternatives; ++k) prods.push_back({variable_name(v), random_rhs(spec, rng)});
    }
    try {
      return sanitize(Grammar("S", prods));
    } catch (const GrammarError&) {
      continue;
    }
  }
  throw PreconditionError("no productive grammar after " + std::to_string(kRandomAttempts) + " attempts");
}

}  // namespace parikh

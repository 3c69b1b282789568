#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace parikh::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Bad invocation or unreadable input; mapped to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  bool sanitize = true;
  std::size_t state_budget = 1'000'000;
};

// What a command produced. `text` is printed as-is without --json;
// `results` goes into the envelope with it.
struct Outcome {
  int exit_code = kExitOk;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::string text;
};

struct AnalyzeArgs {
  std::string grammar = "-";
  bool heuristic = false;
};
struct RemgraphArgs {
  std::string grammar = "-";
  bool dot = false;
  bool gr = false;
};
struct BuildArgs {
  std::string grammar = "-";
  std::string out;
  std::string dot;
  bool letters = false;
};
struct AcceptsArgs {
  std::string nfa;
  std::string word;
};
struct ParikhSetArgs {
  std::string input = "-";
  int k = 0;
};
struct VerifyArgs {
  std::string grammar = "-";
  int k = 6;
  std::string nfa;
};
struct TraceArgs {
  std::string grammar = "-";
  std::optional<std::uint64_t> seed;
  std::string tree;
  std::size_t max_nodes = 40;
  std::size_t max_steps = 200;
};
struct InvariantsArgs {
  std::string grammar = "-";
  bool heuristic = false;
};
struct StressArgs {
  int trials = 100;
  std::string spec;
  int k = 6;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  bool no_shrink = false;
};
struct GenArgs {
  int n = 3;
  int points = 4;
  int ports = 1;
  std::string spec;
  std::optional<std::uint64_t> seed;
};

Outcome run_analyze(const Options& o, const AnalyzeArgs& a);
Outcome run_remgraph(const Options& o, const RemgraphArgs& a);
Outcome run_build(const Options& o, const BuildArgs& a);
Outcome run_accepts(const Options& o, const AcceptsArgs& a);
Outcome run_parikh_set(const Options& o, const ParikhSetArgs& a);
Outcome run_verify(const Options& o, const VerifyArgs& a);
Outcome run_trace_complete(const Options& o, const TraceArgs& a);
Outcome run_trace_sound(const Options& o, const TraceArgs& a);
Outcome run_invariants(const Options& o, const InvariantsArgs& a);
Outcome run_stress(const Options& o, const StressArgs& a);
Outcome run_gen_gn(const Options& o, const GenArgs& a);
Outcome run_gen_ports(const Options& o, const GenArgs& a);
Outcome run_gen_random(const Options& o, const GenArgs& a);

}  // namespace parikh::cli

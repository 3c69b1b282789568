// parikh: grammar analysis and Parikh-equivalent automaton construction.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "parikh/error.hpp"

using namespace parikh::cli;

namespace {

std::size_t state_budget_from_env() {
  const char* value = std::getenv("PARIKH_STATE_BUDGET");
  if (value == nullptr || *value == '\0') return Options{}.state_budget;
  try {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(value, &used);
    if (used != std::string(value).size() || n == 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw UsageError(std::string("PARIKH_STATE_BUDGET must be a positive integer, got '") + value + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularity width, Parikh-equivalent automata and proof-driven checks for context-free grammars"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Options options;
  bool no_sanitize = false;
  app.add_flag("--json", options.json, "Emit a JSON envelope {command, inputs, results, timings}");
  app.add_flag("--no-sanitize", no_sanitize, "Keep unreachable and unproductive variables");

  std::string command;
  std::function<Outcome()> action;
  auto bind = [&](CLI::App* sub, std::string name, std::function<Outcome()> fn) {
    sub->callback([&command, &action, name = std::move(name), fn = std::move(fn)] {
      command = name;
      action = fn;
    });
  };

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Structural metrics, regularity width and size report");
  analyze_cmd->add_option("grammar", analyze.grammar, "Grammar file ('-' for stdin)");
  auto* exact_flag = analyze_cmd->add_flag("--exact", "Exact treewidth (default)");
  analyze_cmd->add_flag("--heuristic", analyze.heuristic, "Min-fill upper bound instead of exact treewidth")
      ->excludes(exact_flag);
  bind(analyze_cmd, "analyze", [&] { return run_analyze(options, analyze); });

  RemgraphArgs remgraph;
  auto* remgraph_cmd = app.add_subcommand("remgraph", "Export the reminder graph");
  remgraph_cmd->add_option("grammar", remgraph.grammar, "Grammar file ('-' for stdin)");
  auto* dot_flag = remgraph_cmd->add_flag("--dot", remgraph.dot, "Graphviz output");
  remgraph_cmd->add_flag("--gr", remgraph.gr, "PACE .gr output (1-based ids in grammar order)")->excludes(dot_flag);
  bind(remgraph_cmd, "remgraph", [&] { return run_remgraph(options, remgraph); });

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Construct the reminder-sequence automaton");
  build_cmd->add_option("grammar", build.grammar, "Grammar file ('-' for stdin)");
  build_cmd->add_option("--out,-o", build.out, "Write automaton JSON here instead of stdout");
  build_cmd->add_option("--dot", build.dot, "Also write a Graphviz rendering here");
  build_cmd->add_flag("--letters", build.letters, "Split word labels into single letters");
  bind(build_cmd, "build", [&] { return run_build(options, build); });

  AcceptsArgs accepts;
  auto* accepts_cmd = app.add_subcommand("accepts", "Membership test with a witness run (exit 1 if rejected)");
  accepts_cmd->add_option("nfa", accepts.nfa, "Automaton JSON file")->required();
  accepts_cmd->add_option("word", accepts.word, "Word: space-separated terminals, or letters of one token");
  bind(accepts_cmd, "accepts", [&] { return run_accepts(options, accepts); });

  ParikhSetArgs parikh_set;
  auto* parikh_cmd = app.add_subcommand("parikh-set", "Bounded Parikh image of a grammar or automaton");
  parikh_cmd->add_option("input", parikh_set.input, "Grammar or automaton JSON file ('-' for stdin)");
  parikh_cmd->add_option("-k", parikh_set.k, "Maximum word length")->required();
  bind(parikh_cmd, "parikh-set", [&] { return run_parikh_set(options, parikh_set); });

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Compare bounded Parikh images (exit 1 unless equal)");
  verify_cmd->add_option("grammar", verify.grammar, "Grammar file ('-' for stdin)");
  verify_cmd->add_option("-k", verify.k, "Maximum word length")->capture_default_str();
  verify_cmd->add_option("--nfa", verify.nfa, "Check this automaton JSON instead of building one");
  bind(verify_cmd, "verify", [&] { return run_verify(options, verify); });

  auto* trace_cmd = app.add_subcommand("trace", "Executable completeness and soundness traces");
  trace_cmd->require_subcommand(1);
  TraceArgs trace_complete;
  auto* complete_cmd = trace_cmd->add_subcommand("complete", "Drive a parse tree to an accepting run");
  complete_cmd->add_option("grammar", trace_complete.grammar, "Grammar file ('-' for stdin)");
  auto* seed_opt = complete_cmd->add_option("--seed", trace_complete.seed, "Seed for the sampled parse tree");
  complete_cmd->add_option("--tree", trace_complete.tree, "Parse tree file (s-expression)")->excludes(seed_opt);
  complete_cmd->add_option("--max-nodes", trace_complete.max_nodes, "Size cap for sampled trees")
      ->capture_default_str();
  bind(complete_cmd, "trace complete", [&] { return run_trace_complete(options, trace_complete); });

  TraceArgs trace_sound;
  auto* sound_cmd = trace_cmd->add_subcommand("sound", "Reconstruct a derivation from a random accepting run");
  sound_cmd->add_option("grammar", trace_sound.grammar, "Grammar file ('-' for stdin)");
  sound_cmd->add_option("--seed", trace_sound.seed, "Seed for the random walk");
  sound_cmd->add_option("--max-steps", trace_sound.max_steps, "Walk length before heading straight to the end")
      ->capture_default_str();
  bind(sound_cmd, "trace sound", [&] { return run_trace_sound(options, trace_sound); });

  InvariantsArgs invariants;
  auto* inv_cmd = app.add_subcommand("invariants", "Check the state invariants (exit 1 on violation)");
  inv_cmd->add_option("grammar", invariants.grammar, "Grammar file ('-' for stdin)");
  inv_cmd->add_flag("--heuristic", invariants.heuristic, "Use the min-fill width bound");
  bind(inv_cmd, "invariants", [&] { return run_invariants(options, invariants); });

  StressArgs stress;
  auto* stress_cmd = app.add_subcommand("stress", "Random grammars through every check (exit 1 on failure)");
  stress_cmd->add_option("--trials", stress.trials, "Number of grammars")->capture_default_str();
  stress_cmd->add_option("--spec", stress.spec, "Generator spec: JSON file or inline JSON");
  stress_cmd->add_option("-k", stress.k, "Bound for the Parikh comparison")->capture_default_str();
  stress_cmd->add_option("--jobs,-j", stress.jobs, "Worker threads")->capture_default_str();
  stress_cmd->add_option("--seed", stress.seed, "Base seed (overrides the spec)");
  stress_cmd->add_flag("--no-shrink", stress.no_shrink, "Report the first failure without shrinking it");
  bind(stress_cmd, "stress", [&] { return run_stress(options, stress); });

  auto* gen_cmd = app.add_subcommand("gen", "Emit example grammars");
  gen_cmd->require_subcommand(1);
  GenArgs gen;
  auto* gn_cmd = gen_cmd->add_subcommand("gn", "A_j -> A_(j-1) A_(j-1), A_1 -> a");
  gn_cmd->add_option("n", gen.n, "Family index")->required()->check(CLI::Range(1, 62));
  bind(gn_cmd, "gen gn", [&] { return run_gen_gn(options, gen); });
  auto* ports_cmd = gen_cmd->add_subcommand("ports", "Program points with subroutine-call ports");
  ports_cmd->add_option("points", gen.points, "Program points")->required()->check(CLI::PositiveNumber);
  ports_cmd->add_option("ports", gen.ports, "Ports")->required()->check(CLI::PositiveNumber);
  ports_cmd->add_option("--seed", gen.seed, "Seed");
  bind(ports_cmd, "gen ports", [&] { return run_gen_ports(options, gen); });
  auto* random_cmd = gen_cmd->add_subcommand("random", "Random sanitized grammar");
  random_cmd->add_option("--spec", gen.spec, "Generator spec: JSON file or inline JSON");
  random_cmd->add_option("--seed", gen.seed, "Seed (overrides the spec)");
  bind(random_cmd, "gen random", [&] { return run_gen_random(options, gen); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  options.sanitize = !no_sanitize;

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    options.state_budget = state_budget_from_env();
    outcome = action();
  } catch (const UsageError& e) {
    std::cerr << "parikh: " << e.what() << "\n";
    return kExitUsage;
  } catch (const parikh::PreconditionError& e) {
    std::cerr << "parikh: " << e.what() << "\n";
    return kExitUsage;
  } catch (const parikh::Error& e) {
    std::cerr << "parikh: " << e.what() << "\n";
    return kExitFailure;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (options.json) {
    const nlohmann::json envelope = {{"command", command},
                                     {"inputs", outcome.inputs},
                                     {"results", outcome.results},
                                     {"exit_code", outcome.exit_code},
                                     {"timings", {{"total_ms", ms}}}};
    std::cout << envelope.dump(2) << "\n";
  } else {
    std::cout << outcome.text;
  }
  return outcome.exit_code;
}

#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "parikh/automaton.hpp"
#include "parikh/error.hpp"
#include "parikh/generators.hpp"
#include "parikh/grammar.hpp"
#include "parikh/parse_tree.hpp"
#include "parikh/random.hpp"
#include "parikh/reminder_graph.hpp"
#include "parikh/traces.hpp"
#include "parikh/verify.hpp"

namespace parikh::cli {

namespace {

using nlohmann::json;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
}

Grammar grammar_from_text(const Options& o, const std::string& text) {
  Grammar g = [&] {
    try {
      return parse_grammar(text);
    } catch (const GrammarSyntaxError& e) {
      throw UsageError(std::string("grammar syntax: ") + e.what());
    }
  }();
  return o.sanitize ? sanitize(g) : g;
}

Grammar load_grammar(const Options& o, const std::string& path) { return grammar_from_text(o, read_input(path)); }

bool looks_like_json(const std::string& text) {
  auto it = std::find_if_not(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
  return it != text.end() && *it == '{';
}

Nfa load_nfa(const std::string& path) {
  const std::string text = read_input(path);
  try {
    return nfa_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw UsageError("'" + path + "' is not automaton JSON: " + e.what());
  } catch (const Error& e) {
    throw UsageError("'" + path + "': " + e.what());
  }
}

std::uint64_t require_seed(const Options& o, const std::optional<std::uint64_t>& seed) {
  if (!seed && o.json) throw UsageError("--seed is required with --json for randomized commands");
  return seed.value_or(1);
}

json vector_json(const std::vector<std::string>& terminals, const ParikhVector& v) {
  json j = json::object();
  for (const auto& [t, count] : v.entries()) j[terminals.at(t)] = count;
  return j;
}

std::string reference_text(long double x) {
  std::ostringstream out;
  if (x < 1e18L) {
    out << std::fixed << std::setprecision(0) << x;
  } else {
    out << std::scientific << std::setprecision(3) << static_cast<double>(x);
  }
  return out.str();
}

// Splits a word given on the command line: whitespace-separated names, or a
// single token read letter by letter when it is not itself a terminal.
Word parse_word(const std::vector<std::string>& terminals, const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens{std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
  auto find = [&](const std::string& name) -> std::optional<TermId> {
    auto it = std::find(terminals.begin(), terminals.end(), name);
    if (it == terminals.end()) return std::nullopt;
    return static_cast<TermId>(it - terminals.begin());
  };
  if (tokens.size() == 1 && !find(tokens[0])) {
    std::vector<std::string> letters;
    for (char c : tokens[0]) letters.emplace_back(1, c);
    tokens = letters;
  }
  Word w;
  for (const std::string& t : tokens) {
    auto id = find(t);
    if (!id) throw UsageError("'" + t + "' is not a terminal of the automaton");
    w.push_back(*id);
  }
  return w;
}

std::string label_text(const std::vector<std::string>& terminals, const Word& w) {
  if (w.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += ' ';
    out += terminals[w[i]];
  }
  return out;
}

RegularityWidth width_of(const ReminderGraph& rg, bool heuristic) {
  if (heuristic) return regularity_width(rg, WidthMode::kHeuristic);
  try {
    return regularity_width(rg, WidthMode::kExact);
  } catch (const BudgetExceeded&) {
    return regularity_width(rg, WidthMode::kHeuristic);
  }
}

std::string form_text(const Grammar& g, const std::vector<Symbol>& form) {
  std::string out;
  for (const Symbol& s : form) {
    if (!out.empty()) out += ' ';
    out += g.name(s);
  }
  return out.empty() ? "ε" : out;
}

}  // namespace

Outcome run_analyze(const Options& o, const AnalyzeArgs& a) {
  const Grammar g = load_grammar(o, a.grammar);
  const GrammarStats st = stats(g);
  const ReminderGraph rg = build_reminder_graph(g);
  const RegularityWidth w = width_of(rg, a.heuristic);

  Outcome out;
  out.inputs = {{"grammar", a.grammar}, {"mode", a.heuristic ? "heuristic" : "exact"}};
  out.results = {{"n", st.n},
                 {"m", st.m},
                 {"e", st.e},
                 {"productions", st.p_count},
                 {"reminder_edges", rg.graph.edge_count()},
                 {"d", w.d},
                 {"d_exact", w.exact}};
  std::ostringstream text;
  text << "variables (n): " << st.n << "\n"
       << "degree (m): " << st.m << "\n"
       << "max terminals per rhs (e): " << st.e << "\n"
       << "productions (|P|): " << st.p_count << "\n"
       << "reminder graph edges: " << rg.graph.edge_count() << "\n"
       << "regularity width (d): " << w.d << (w.exact ? " (exact)" : " (upper bound)") << "\n";
  try {
    const Nfa nfa = build(g, {o.state_budget});
    const SizeReport r = size_report(nfa, g, w.d);
    out.results["size"] = size_report_to_json(r);
    text << "size reference n*d^(2d(m+1)): " << reference_text(r.reference) << "\n"
         << "automaton states (word level): " << r.word_states << "\n"
         << "automaton states (letter level): " << r.letter_states << "\n"
         << "transitions (word / letter level): " << r.word_transitions << " / " << r.letter_transitions << "\n"
         << "longest reminder sequence: " << r.max_length << "\n";
    if (r.word_exceeds_reference || r.letter_exceeds_reference) {
      text << "flag: observed state count exceeds the reference (reported, not a failure)\n";
    }
  } catch (const BudgetExceeded& e) {
    const long double reference = static_cast<long double>(st.n) *
                                  std::pow(static_cast<long double>(w.d), 2.0L * w.d * (st.m + 1));
    out.results["size"] = {{"reference", static_cast<double>(reference)}, {"error", e.what()}};
    text << "size reference n*d^(2d(m+1)): " << reference_text(reference) << "\n"
         << "automaton: " << e.what() << "\n";
  }
  out.text = text.str();
  return out;
}

Outcome run_remgraph(const Options& o, const RemgraphArgs& a) {
  const Grammar g = load_grammar(o, a.grammar);
  const ReminderGraph rg = build_reminder_graph(g);
  Outcome out;
  out.inputs = {{"grammar", a.grammar}, {"format", a.gr ? "gr" : a.dot ? "dot" : "edges"}};
  json edges = json::array();
  std::ostringstream listing;
  for (auto [u, v] : rg.graph.edges()) {
    const EdgeWitness& wit = rg.witnesses.at({u, v});
    const bool sibling = wit.kind == EdgeWitness::Kind::kSibling;
    edges.push_back({{"u", g.variable_name(u)},
                     {"v", g.variable_name(v)},
                     {"kind", sibling ? "sibling" : "descendant"},
                     {"production", wit.production}});
    listing << g.variable_name(u) << " -- " << g.variable_name(v) << "  (" << (sibling ? "sibling" : "descendant")
            << ", production " << wit.production << ")\n";
  }
  out.results = {{"vertices", g.variables()}, {"edges", edges}};
  if (a.gr) {
    out.results["gr"] = to_pace_gr(rg.graph);
    out.results["ids"] = pace_id_map(g);
    out.text = to_pace_gr(rg.graph);
  } else if (a.dot) {
    out.results["dot"] = to_dot(g, rg);
    out.text = to_dot(g, rg);
  } else {
    out.text = listing.str();
  }
  return out;
}

Outcome run_build(const Options& o, const BuildArgs& a) {
  const Grammar g = load_grammar(o, a.grammar);
  Nfa nfa = build(g, {o.state_budget});
  if (a.letters) nfa = expand_letters(nfa);
  const json j = nfa_to_json(nfa);
  Outcome out;
  out.inputs = {{"grammar", a.grammar}, {"letters", a.letters}, {"out", a.out}, {"dot", a.dot}};
  out.results = {{"states", nfa.state_count()},
                 {"transitions", nfa.transitions.size()},
                 {"final_reachable", nfa.final_state >= 0}};
  if (!a.dot.empty()) write_output(a.dot, nfa_to_dot(nfa));
  if (!a.out.empty()) {
    write_output(a.out, j.dump(2) + "\n");
    out.text = "wrote " + a.out + ": " + std::to_string(nfa.state_count()) + " states, " +
               std::to_string(nfa.transitions.size()) + " transitions\n";
  } else {
    out.results["automaton"] = j;
    out.text = j.dump(2) + "\n";
  }
  return out;
}

Outcome run_accepts(const Options&, const AcceptsArgs& a) {
  const Nfa nfa = load_nfa(a.nfa);
  const Word w = parse_word(nfa.terminals, a.word);
  const AcceptResult r = accepts(nfa, w);
  Outcome out;
  out.inputs = {{"nfa", a.nfa}, {"word", a.word}};
  json run = json::array();
  std::ostringstream text;
  text << (r.accepted ? "accepted" : "rejected") << "\n";
  for (int ti : r.run) {
    const Transition& t = nfa.transitions[ti];
    run.push_back({{"transition", ti}, {"src", t.src}, {"dst", t.dst}, {"rule", t.rule},
                   {"label", label_text(nfa.terminals, t.label)}});
    text << "  " << t.src << " -> " << t.dst << "  rule " << t.rule << "  " << label_text(nfa.terminals, t.label)
         << "\n";
  }
  out.results = {{"accepted", r.accepted}, {"run", run}};
  out.text = text.str();
  out.exit_code = r.accepted ? kExitOk : kExitFailure;
  return out;
}

Outcome run_parikh_set(const Options& o, const ParikhSetArgs& a) {
  if (a.k < 0) throw UsageError("-k must be nonnegative");
  const std::string text = read_input(a.input);
  ParikhSet set;
  std::vector<std::string> terminals;
  std::string source;
  if (looks_like_json(text)) {
    Nfa nfa;
    try {
      nfa = nfa_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw UsageError(std::string("malformed automaton JSON: ") + e.what());
    }
    terminals = nfa.terminals;
    set = bounded_parikh_nfa(nfa, a.k);
    source = "automaton";
  } else {
    const Grammar g = grammar_from_text(o, text);
    terminals = g.terminals();
    set = bounded_parikh_language(g, a.k);
    source = "grammar";
  }
  Outcome out;
  out.inputs = {{"input", a.input}, {"k", a.k}, {"source", source}};
  json vs = json::array();
  std::string listing;
  for (const ParikhVector& v : set) {
    vs.push_back(vector_json(terminals, v));
    listing += parikh_to_string(terminals, v) + "\n";
  }
  out.results = {{"count", set.size()}, {"vectors", vs}};
  out.text = listing;
  return out;
}

Outcome run_verify(const Options& o, const VerifyArgs& a) {
  if (a.k < 0) throw UsageError("-k must be nonnegative");
  const Grammar g = load_grammar(o, a.grammar);
  std::optional<Nfa> nfa;
  if (!a.nfa.empty()) nfa = load_nfa(a.nfa);
  VerifyBudget budget;
  budget.states = o.state_budget;
  EquivalenceReport r;
  if (nfa) {
    // Terminal ids of a loaded automaton follow its own name list.
    if (nfa->terminals != g.terminals()) {
      Nfa remapped = *nfa;
      remapped.terminals = g.terminals();
      std::vector<TermId> map;
      for (const std::string& name : nfa->terminals) {
        auto id = g.find_terminal(name);
        if (!id) throw UsageError("automaton terminal '" + name + "' is not a terminal of the grammar");
        map.push_back(*id);
      }
      for (Transition& t : remapped.transitions) {
        for (TermId& x : t.label) x = map[x];
      }
      nfa = std::move(remapped);
    }
    r = verify_parikh_equivalence(g, a.k, &*nfa, budget);
  } else {
    r = verify_parikh_equivalence(g, a.k, nullptr, budget);
  }
  Outcome out;
  out.inputs = {{"grammar", a.grammar}, {"k", a.k}, {"nfa", a.nfa}};
  out.results = to_json(g.terminals(), r);
  std::ostringstream text;
  text << "verdict: " << to_string(r.verdict) << " (k = " << a.k << ")\n";
  auto list = [&](const char* title, const auto& vs) {
    text << title << " (" << vs.size() << "):";
    for (const ParikhVector& v : vs) text << " " << parikh_to_string(g.terminals(), v);
    text << "\n";
  };
  list("grammar side", r.grammar_side);
  list("automaton side", r.automaton_side);
  if (!r.only_grammar.empty()) list("only in grammar", r.only_grammar);
  if (!r.only_automaton.empty()) list("only in automaton", r.only_automaton);
  if (!r.note.empty()) text << "note: " << r.note << "\n";
  out.text = text.str();
  out.exit_code = r.verdict == Verdict::kEqual ? kExitOk : kExitFailure;
  return out;
}

Outcome run_trace_complete(const Options& o, const TraceArgs& a) {
  const Grammar g = load_grammar(o, a.grammar);
  ParseTree t;
  Outcome out;
  if (!a.tree.empty()) {
    try {
      t = parse_sexpr(g, read_input(a.tree));
    } catch (const Error& e) {
      throw UsageError(std::string("tree: ") + e.what());
    }
    out.inputs = {{"grammar", a.grammar}, {"tree", a.tree}};
  } else {
    const std::uint64_t seed = require_seed(o, a.seed);
    Rng rng(seed);
    t = sample_tree(g, g.axiom(), a.max_nodes, rng);
    out.inputs = {{"grammar", a.grammar}, {"seed", seed}, {"max_nodes", a.max_nodes}};
  }
  const CompletenessTrace trace = completeness_trace(g, t, true);
  json records = json::array();
  std::string text;
  for (const TraceRecord& r : trace.records) {
    records.push_back(to_json(g, r));
    text += records.back().dump() + "\n";
  }
  const json summary = {{"tree", to_sexpr(g, t)},
                        {"yield_parikh", vector_json(g.terminals(), yield_parikh(t))},
                        {"word", word_to_string(g, trace.word)},
                        {"word_parikh", vector_json(g.terminals(), parikh(trace.word))},
                        {"steps", trace.run.size()}};
  out.results = {{"records", records}, {"summary", summary}};
  out.text = text + json{{"summary", summary}}.dump() + "\n";
  return out;
}

Outcome run_trace_sound(const Options& o, const TraceArgs& a) {
  const Grammar g = load_grammar(o, a.grammar);
  const std::uint64_t seed = require_seed(o, a.seed);
  const Nfa nfa = build(g, {o.state_budget});
  Rng rng(seed);
  const auto run = random_accepting_run(nfa, rng, a.max_steps);
  if (!run) throw Error("the automaton accepts nothing");
  const std::vector<RunStep> steps = run_steps(nfa, *run);
  const SoundnessResult r = soundness_reconstruct(g, steps);
  Outcome out;
  out.inputs = {{"grammar", a.grammar}, {"seed", seed}, {"max_steps", a.max_steps}};
  json records = json::array();
  std::string text;
  Word read;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    read.insert(read.end(), steps[i].label.begin(), steps[i].label.end());
    records.push_back({{"step", i + 1},
                       {"rule", steps[i].rule},
                       {"production", steps[i].production},
                       {"label", word_to_string(g, steps[i].label)},
                       {"src", to_string(g, steps[i].src)},
                       {"dst", to_string(g, steps[i].dst)},
                       {"form", form_text(g, r.forms[i])}});
    text += records.back().dump() + "\n";
  }
  const json summary = {{"run_word", word_to_string(g, read)},
                        {"run_parikh", vector_json(g.terminals(), parikh(read))},
                        {"derived_word", word_to_string(g, r.word)},
                        {"derived_parikh", vector_json(g.terminals(), parikh(r.word))},
                        {"steps", steps.size()}};
  out.results = {{"records", records}, {"summary", summary}};
  out.text = text + json{{"summary", summary}}.dump() + "\n";
  return out;
}

Outcome run_invariants(const Options& o, const InvariantsArgs& a) {
  const Grammar g = load_grammar(o, a.grammar);
  const ReminderGraph rg = build_reminder_graph(g);
  const RegularityWidth w = width_of(rg, a.heuristic);
  const Nfa nfa = build(g, {o.state_budget});
  const InvariantReport r = check_state_invariants(nfa, g, rg, w.d);
  Outcome out;
  out.inputs = {{"grammar", a.grammar}, {"mode", a.heuristic ? "heuristic" : "exact"}};
  json violations = json::array();
  std::ostringstream text;
  text << "states checked: " << r.states_checked << "\n"
       << "regularity width (d): " << w.d << (w.exact ? " (exact)" : " (upper bound)") << "\n"
       << "longest reminder sequence: " << r.max_length << " (bound 2d+1 = " << 2 * w.d + 1 << ")\n";
  if (static_cast<int>(r.max_length) > w.d) {
    text << "note: longest sequence exceeds d; the asserted bound is 2d+1\n";
  }
  for (const InvariantViolation& v : r.violations) {
    violations.push_back({{"state", v.state}, {"claim", v.claim}, {"message", v.message}});
    text << "violation [" << v.claim << "] state " << v.state << ": " << v.message << "\n";
  }
  text << (r.ok() ? "all invariants hold\n" : std::to_string(r.violations.size()) + " violation(s)\n");
  out.results = {{"states_checked", r.states_checked},
                 {"d", w.d},
                 {"d_exact", w.exact},
                 {"max_length", r.max_length},
                 {"max_length_exceeds_d", static_cast<int>(r.max_length) > w.d},
                 {"violations", violations}};
  out.text = text.str();
  out.exit_code = r.ok() ? kExitOk : kExitFailure;
  return out;
}

Outcome run_stress(const Options& o, const StressArgs& a) {
  if (a.trials < 0 || a.k < 0 || a.jobs < 1) throw UsageError("--trials, -k and --jobs must be nonnegative");
  StressOptions opts;
  if (!a.spec.empty()) {
    const std::string text = looks_like_json(a.spec) ? a.spec : read_input(a.spec);
    try {
      opts.spec = random_spec_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw UsageError(std::string("--spec: ") + e.what());
    } catch (const PreconditionError& e) {
      throw UsageError(std::string("--spec: ") + e.what());
    }
  }
  if (a.seed) {
    opts.spec.seed = *a.seed;
  } else if (o.json) {
    require_seed(o, a.seed);
  }
  opts.trials = a.trials;
  opts.k = a.k;
  opts.jobs = a.jobs;
  opts.shrink = !a.no_shrink;
  opts.budget.states = o.state_budget;
  const StressReport r = stress(opts);
  Outcome out;
  out.inputs = {{"trials", a.trials}, {"k", a.k}, {"jobs", a.jobs}, {"spec", to_json(opts.spec)}};
  out.results = to_json(r);
  std::ostringstream text;
  text << "trials: " << r.trials << "  passed: " << r.passed << "  failed: " << r.failed
       << "  inconclusive: " << r.inconclusive << "\n";
  if (r.first_failure) {
    const StressFailure& f = *r.first_failure;
    text << "first failure: trial " << f.trial << " (seed " << f.seed << ")\n"
         << f.message << "\n--- grammar ---\n"
         << f.grammar << "--- shrunk ---\n"
         << f.shrunk_grammar << f.shrunk_message << "\n";
  }
  out.text = text.str();
  out.exit_code = r.ok() ? kExitOk : kExitFailure;
  return out;
}

Outcome run_gen_gn(const Options&, const GenArgs& a) {
  const Grammar g = gen_gn(a.n);
  Outcome out;
  out.inputs = {{"family", "gn"}, {"n", a.n}};
  out.results = {{"grammar", render_grammar(g)}};
  out.text = render_grammar(g);
  return out;
}

Outcome run_gen_ports(const Options& o, const GenArgs& a) {
  const std::uint64_t seed = require_seed(o, a.seed);
  const Grammar g = gen_ports(a.points, a.ports, seed);
  Outcome out;
  out.inputs = {{"family", "ports"}, {"points", a.points}, {"ports", a.ports}, {"seed", seed}};
  out.results = {{"grammar", render_grammar(g)}};
  out.text = render_grammar(g);
  return out;
}

Outcome run_gen_random(const Options& o, const GenArgs& a) {
  RandomGrammarSpec spec;
  if (!a.spec.empty()) {
    const std::string text = looks_like_json(a.spec) ? a.spec : read_input(a.spec);
    try {
      spec = random_spec_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw UsageError(std::string("--spec: ") + e.what());
    }
  }
  if (a.seed) {
    spec.seed = *a.seed;
  } else if (o.json) {
    require_seed(o, a.seed);
  }
  const Grammar g = random_grammar(spec);
  Outcome out;
  out.inputs = {{"family", "random"}, {"spec", to_json(spec)}};
  out.results = {{"grammar", render_grammar(g)}};
  out.text = render_grammar(g);
  return out;
}

}  // namespace parikh::cli

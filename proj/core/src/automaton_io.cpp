#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "parikh/automaton.hpp"
#include "parikh/error.hpp"

namespace parikh {

namespace {

using nlohmann::json;

int index_of(const std::vector<std::string>& names, const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(std::string("unknown ") + what + " '" + name + "'");
  return static_cast<int>(it - names.begin());
}

std::string state_label(const Nfa& a, int s) {
  if (s >= static_cast<int>(a.states.size())) return "";
  std::string out;
  for (const ReminderPair& p : a.states[s].pairs) {
    out += '(';
    out += p.is_bottom() ? std::string("⊥") : a.variables[p.current];
    out += ",[";
    for (std::size_t i = 0; i < p.followup.size(); ++i) {
      if (i > 0) out += ',';
      out += a.variables[p.followup[i]];
    }
    out += "])";
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

json nfa_to_json(const Nfa& a) {
  json states = json::array();
  for (const ReminderSequence& rs : a.states) {
    json pairs = json::array();
    for (const ReminderPair& p : rs.pairs) {
      json followup = json::object();
      for (VarId v : p.followup) {
        const std::string& name = a.variables[v];
        followup[name] = followup.value(name, 0) + 1;
      }
      pairs.push_back({{"current", p.is_bottom() ? json(nullptr) : json(a.variables[p.current])},
                       {"followup", followup}});
    }
    states.push_back(pairs);
  }
  json transitions = json::array();
  for (const Transition& t : a.transitions) {
    json label = json::array();
    for (TermId x : t.label) label.push_back(a.terminals[x]);
    transitions.push_back({{"src", t.src},
                           {"label", label},
                           {"rule", t.rule},
                           {"production_index", t.production < 0 ? json(nullptr) : json(t.production)},
                           {"dst", t.dst}});
  }
  return {{"variables", a.variables},
          {"terminals", a.terminals},
          {"initial", a.initial},
          {"final", a.final_state < 0 ? json(nullptr) : json(a.final_state)},
          {"chain_states", a.chain_states},
          {"states", states},
          {"transitions", transitions}};
}

Nfa nfa_from_json(const json& j) {
  try {
    Nfa a;
    a.variables = j.at("variables").get<std::vector<std::string>>();
    a.terminals = j.at("terminals").get<std::vector<std::string>>();
    a.initial = j.at("initial").get<int>();
    a.final_state = j.at("final").is_null() ? -1 : j.at("final").get<int>();
    a.chain_states = j.value("chain_states", std::size_t{0});
    for (const json& state : j.at("states")) {
      ReminderSequence rs;
      for (const json& pair : state) {
        ReminderPair p;
        const json& current = pair.at("current");
        p.current = current.is_null() ? kBottomVar
                                      : index_of(a.variables, current.get<std::string>(), "variable");
        for (const auto& [name, count] : pair.at("followup").items()) {
          const int c = count.get<int>();
          if (c < 0) throw Error("negative followup count for '" + name + "'");
          p.followup.insert(p.followup.end(), static_cast<std::size_t>(c),
                            index_of(a.variables, name, "variable"));
        }
        std::sort(p.followup.begin(), p.followup.end());
        rs.pairs.push_back(std::move(p));
      }
      a.states.push_back(std::move(rs));
    }
    const int n = static_cast<int>(a.state_count());
    auto check_state = [n](int s, const char* what) {
      if (s < 0 || s >= n) throw Error(std::string(what) + " state " + std::to_string(s) + " out of range");
    };
    check_state(a.initial, "initial");
    if (a.final_state >= 0) check_state(a.final_state, "final");
    for (const json& tj : j.at("transitions")) {
      Transition t;
      t.src = tj.at("src").get<int>();
      t.dst = tj.at("dst").get<int>();
      check_state(t.src, "source");
      check_state(t.dst, "target");
      t.rule = tj.at("rule").get<int>();
      if (t.rule < 1 || t.rule > 5) throw Error("rule tag " + std::to_string(t.rule) + " out of range");
      t.production = tj.at("production_index").is_null() ? -1 : tj.at("production_index").get<int>();
      for (const json& x : tj.at("label")) {
        t.label.push_back(index_of(a.terminals, x.get<std::string>(), "terminal"));
      }
      a.transitions.push_back(std::move(t));
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed automaton JSON: ") + e.what());
  }
}

std::string nfa_to_dot(const Nfa& a) {
  std::ostringstream out;
  out << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
  out << "  start [shape=point];\n  start -> s" << a.initial << ";\n";
  for (int s = 0; s < static_cast<int>(a.state_count()); ++s) {
    out << "  s" << s << " [label=\"" << escape(state_label(a, s)) << "\"";
    if (s == a.final_state) out << ", shape=doublecircle";
    if (s == a.initial) out << ", style=bold";
    if (s >= static_cast<int>(a.states.size())) out << ", shape=point";
    out << "];\n";
  }
  for (const Transition& t : a.transitions) {
    std::string label;
    for (TermId x : t.label) label += a.terminals[x];
    if (label.empty()) label = "ε";
    out << "  s" << t.src << " -> s" << t.dst << " [label=\"" << escape(label) << " (" << t.rule
        << ")\"];\n";
  }
  out << "}\n";
  return out.str();
}

json size_report_to_json(const SizeReport& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"d", r.d},
          {"e", r.e},
          {"productions", r.p_count},
          {"word_states", r.word_states},
          {"word_transitions", r.word_transitions},
          {"letter_states", r.letter_states},
          {"letter_transitions", r.letter_transitions},
          {"reference", static_cast<double>(r.reference)},
          {"word_exceeds_reference", r.word_exceeds_reference},
          {"letter_exceeds_reference", r.letter_exceeds_reference},
          {"max_length", r.max_length},
          {"max_length_exceeds_d", r.length_exceeds_d}};
}

}  // namespace parikh

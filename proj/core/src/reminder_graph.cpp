#include "parikh/reminder_graph.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace parikh {

namespace {

std::pair<VarId, VarId> ordered(VarId a, VarId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

ReminderGraph build_reminder_graph(const Grammar& g) {
  const Relation reach = reachability(g);
  ReminderGraph rg{Graph(g.variable_count()), {}};
  auto add = [&](VarId a, VarId b, const EdgeWitness& w) {
    if (a == b) return;
    if (rg.graph.add_edge(a, b)) rg.witnesses.emplace(ordered(a, b), w);
  };

  for (int pi = 0; pi < static_cast<int>(g.productions().size()); ++pi) {
    const std::vector<VarId> vars = g.productions()[pi].variables();
    const int r = static_cast<int>(vars.size());
    if (r < 2) continue;
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        if (i != j) {
          add(vars[i], vars[j], {EdgeWitness::Kind::kSibling, pi, i, j, -1});
        }
        for (VarId via = 0; via < g.variable_count(); ++via) {
          if (via != vars[j] && reach.contains(vars[i], via)) {
            add(via, vars[j], {EdgeWitness::Kind::kDescendant, pi, i, j, via});
          }
        }
      }
    }
  }
  return rg;
}

bool replay_witness(const Grammar& g, const Relation& reach, std::pair<VarId, VarId> edge,
                    const EdgeWitness& w) {
  if (w.production < 0 || w.production >= static_cast<int>(g.productions().size())) return false;
  const std::vector<VarId> vars = g.productions()[w.production].variables();
  const int r = static_cast<int>(vars.size());
  if (r < 2 || w.i < 0 || w.j < 0 || w.i >= r || w.j >= r) return false;
  std::pair<VarId, VarId> derived;
  if (w.kind == EdgeWitness::Kind::kSibling) {
    if (w.i == w.j) return false;
    derived = ordered(vars[w.i], vars[w.j]);
  } else {
    if (w.via == vars[w.j] || !reach.contains(vars[w.i], w.via)) return false;
    derived = ordered(w.via, vars[w.j]);
  }
  return derived.first != derived.second && derived == ordered(edge.first, edge.second);
}

RegularityWidth regularity_width(const ReminderGraph& rg, WidthMode mode,
                                 const ExactBudget& budget) {
  TreewidthResult tw = mode == WidthMode::kExact ? exact_treewidth(rg.graph, budget)
                                                 : heuristic_treewidth(rg.graph);
  RegularityWidth out;
  out.d = tw.decomposition.width() + 1;
  out.witness = std::move(tw.decomposition);
  out.exact = mode == WidthMode::kExact;
  return out;
}

RegularityWidth regularity_width(const Grammar& g, WidthMode mode, const ExactBudget& budget) {
  return regularity_width(build_reminder_graph(g), mode, budget);
}

std::string to_dot(const Grammar& g, const ReminderGraph& rg) {
  std::ostringstream out;
  out << "graph reminder {\n";
  for (VarId v = 0; v < g.variable_count(); ++v) {
    out << "  v" << v << " [label=\"" << dot_escape(g.variable_name(v)) << "\"];\n";
  }
  for (auto [u, v] : rg.graph.edges()) out << "  v" << u << " -- v" << v << ";\n";
  out << "}\n";
  return out.str();
}

nlohmann::json pace_id_map(const Grammar& g) {
  nlohmann::json j = nlohmann::json::object();
  for (VarId v = 0; v < g.variable_count(); ++v) j[std::to_string(v + 1)] = g.variable_name(v);
  return j;
}

}  // namespace parikh

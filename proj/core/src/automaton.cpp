#include "parikh/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "parikh/error.hpp"

namespace parikh {

namespace {

// a minus one occurrence of v; a is sorted.
std::vector<VarId> remove_one(const std::vector<VarId>& a, VarId v) {
  std::vector<VarId> out = a;
  out.erase(std::find(out.begin(), out.end(), v));
  return out;
}

bool within_cap(const ReminderSequence& rs) {
  std::map<VarId, int> counts;
  for (const ReminderPair& p : rs.pairs) {
    if (!p.is_bottom() && ++counts[p.current] > 2) return false;
  }
  return true;
}

bool is_submultiset(const std::vector<VarId>& small, std::vector<VarId> big) {
  std::sort(big.begin(), big.end());
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

int ReminderSequence::occurrences(VarId v) const {
  return static_cast<int>(
      std::count_if(pairs.begin(), pairs.end(), [v](const ReminderPair& p) { return p.current == v; }));
}

std::vector<VarId> ReminderSequence::variables_at(std::size_t i) const {
  std::vector<VarId> out = pairs.at(i).followup;
  if (!pairs[i].is_bottom()) out.push_back(pairs[i].current);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<VarId> ReminderSequence::multiset() const {
  std::vector<VarId> out;
  for (const ReminderPair& p : pairs) out.insert(out.end(), p.followup.begin(), p.followup.end());
  if (!pairs.empty() && !pairs.back().is_bottom()) out.push_back(pairs.back().current);
  std::sort(out.begin(), out.end());
  return out;
}

ReminderSequence ReminderSequence::prefix(std::size_t i) const {
  return {std::vector<ReminderPair>(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(i))};
}

std::size_t ReminderSequenceHash::operator()(const ReminderSequence& rs) const {
  std::size_t h = 1469598103934665603ULL;
  auto mix = [&h](std::size_t x) { h = (h ^ x) * 1099511628211ULL; };
  for (const ReminderPair& p : rs.pairs) {
    mix(static_cast<std::size_t>(p.current + 2));
    for (VarId v : p.followup) mix(static_cast<std::size_t>(v + 1) << 16);
    mix(0x9e3779b9);
  }
  return h;
}

std::string to_string(const Grammar& g, const ReminderSequence& rs) {
  std::string out;
  for (const ReminderPair& p : rs.pairs) {
    out += '(';
    out += p.is_bottom() ? std::string("_bot_") : g.variable_name(p.current);
    out += ",[";
    for (std::size_t i = 0; i < p.followup.size(); ++i) {
      if (i > 0) out += ',';
      out += g.variable_name(p.followup[i]);
    }
    out += "])";
  }
  return out;
}

std::vector<Successor> successors(const ReminderSequence& rs, const Grammar& g) {
  if (rs.empty()) throw PreconditionError("successors of the empty reminder sequence");
  std::vector<Successor> out;
  const ReminderPair& last = rs.back();
  const ReminderSequence head = rs.prefix(rs.size() - 1);

  auto emit = [&](Word label, int rule, int production, ReminderSequence target) {
    if (within_cap(target)) out.push_back({std::move(label), rule, production, std::move(target)});
  };

  if (!last.is_bottom()) {
    for (int pi : g.productions_of(last.current)) {
      const Production& p = g.productions()[pi];
      const Word w = p.terminal_word();
      std::vector<VarId> all = p.variables();
      std::sort(all.begin(), all.end());
      if (all.empty()) {
        if (last.followup.empty()) {
          ReminderSequence t = head;
          t.pairs.push_back({kBottomVar, {}});
          emit(w, 3, pi, std::move(t));
        } else {
          for (VarId a : std::set<VarId>(last.followup.begin(), last.followup.end())) {
            ReminderSequence t = head;
            t.pairs.push_back({a, remove_one(last.followup, a)});
            emit(w, 4, pi, std::move(t));
          }
        }
        continue;
      }
      for (VarId aj : std::set<VarId>(all.begin(), all.end())) {
        ReminderSequence t = last.followup.empty() ? head : rs;
        t.pairs.push_back({aj, remove_one(all, aj)});
        emit(w, last.followup.empty() ? 1 : 2, pi, std::move(t));
      }
    }
  } else if (rs.size() >= 2) {
    const ReminderPair& prev = rs[rs.size() - 2];
    for (VarId a : std::set<VarId>(prev.followup.begin(), prev.followup.end())) {
      ReminderSequence t = rs.prefix(rs.size() - 2);
      t.pairs.push_back({a, remove_one(prev.followup, a)});
      emit({}, 5, -1, std::move(t));
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<int> Nfa::find_state(const ReminderSequence& rs) const {
  auto it = std::find(states.begin(), states.end(), rs);
  if (it == states.end()) return std::nullopt;
  return static_cast<int>(it - states.begin());
}

std::vector<std::vector<int>> Nfa::outgoing() const {
  std::vector<std::vector<int>> out(state_count());
  for (int i = 0; i < static_cast<int>(transitions.size()); ++i) {
    out.at(transitions[i].src).push_back(i);
  }
  return out;
}

Nfa build(const Grammar& g, const BuildOptions& options) {
  Nfa a;
  a.variables = g.variables();
  a.terminals = g.terminals();
  std::unordered_map<ReminderSequence, int, ReminderSequenceHash> index;
  auto intern = [&](const ReminderSequence& rs) {
    auto [it, inserted] = index.emplace(rs, static_cast<int>(a.states.size()));
    if (inserted) {
      if (a.states.size() >= options.state_budget) {
        throw BudgetExceeded("automaton construction stopped after " +
                                 std::to_string(a.states.size()) + " states and " +
                                 std::to_string(a.transitions.size()) + " transitions",
                             options.state_budget);
      }
      a.states.push_back(rs);
    }
    return it->second;
  };

  a.initial = intern(ReminderSequence::initial(g.axiom()));
  for (std::size_t next = 0; next < a.states.size(); ++next) {
    const ReminderSequence current = a.states[next];
    for (Successor& s : successors(current, g)) {
      const int dst = intern(s.target);
      a.transitions.push_back({static_cast<int>(next), std::move(s.label), s.rule, s.production, dst});
    }
  }
  auto fin = index.find(ReminderSequence::final_state());
  a.final_state = fin == index.end() ? -1 : fin->second;
  return a;
}

AcceptResult accepts(const Nfa& a, const Word& word) {
  AcceptResult result;
  if (a.final_state < 0) return result;
  const auto out = a.outgoing();
  const std::size_t positions = word.size() + 1;
  auto key = [&](int state, std::size_t pos) { return static_cast<std::size_t>(state) * positions + pos; };
  // Transition that first reached each (state, position); -2 for the start.
  std::vector<int> via(a.state_count() * positions, -1);
  std::deque<std::pair<int, std::size_t>> queue;
  via[key(a.initial, 0)] = -2;
  queue.emplace_back(a.initial, 0);
  while (!queue.empty()) {
    auto [state, pos] = queue.front();
    queue.pop_front();
    if (state == a.final_state && pos == word.size()) {
      result.accepted = true;
      while (via[key(state, pos)] != -2) {
        const int ti = via[key(state, pos)];
        result.run.push_back(ti);
        state = a.transitions[ti].src;
        pos -= a.transitions[ti].label.size();
      }
      std::reverse(result.run.begin(), result.run.end());
      return result;
    }
    for (int ti : out[state]) {
      const Transition& t = a.transitions[ti];
      if (pos + t.label.size() > word.size()) continue;
      if (!std::equal(t.label.begin(), t.label.end(), word.begin() + static_cast<std::ptrdiff_t>(pos))) {
        continue;
      }
      const std::size_t np = pos + t.label.size();
      if (via[key(t.dst, np)] != -1) continue;
      via[key(t.dst, np)] = ti;
      queue.emplace_back(t.dst, np);
    }
  }
  return result;
}

ParikhSet bounded_parikh_nfa(const Nfa& a, int k, std::size_t budget) {
  if (k < 0) throw PreconditionError("bound k must be nonnegative");
  ParikhSet result;
  if (a.final_state < 0) return result;
  const auto out = a.outgoing();
  std::vector<ParikhVector> label_vectors;
  label_vectors.reserve(a.transitions.size());
  for (const Transition& t : a.transitions) label_vectors.push_back(parikh(t.label));

  std::vector<std::set<ParikhVector>> seen(a.state_count());
  std::deque<std::pair<int, ParikhVector>> queue;
  std::size_t visited = 1;
  seen[a.initial].insert(ParikhVector{});
  queue.emplace_back(a.initial, ParikhVector{});
  while (!queue.empty()) {
    auto [state, vec] = std::move(queue.front());
    queue.pop_front();
    if (state == a.final_state) result.insert(vec);
    for (int ti : out[state]) {
      if (vec.total() + label_vectors[ti].total() > k) continue;
      ParikhVector next = vec + label_vectors[ti];
      const int dst = a.transitions[ti].dst;
      if (!seen[dst].insert(next).second) continue;
      if (++visited > budget) {
        throw BudgetExceeded("bounded Parikh search over the automaton", budget);
      }
      queue.emplace_back(dst, std::move(next));
    }
  }
  return result;
}

Nfa expand_letters(const Nfa& a) {
  Nfa out = a;
  out.transitions.clear();
  int fresh = static_cast<int>(a.state_count());
  for (const Transition& t : a.transitions) {
    if (t.label.size() <= 1) {
      out.transitions.push_back(t);
      continue;
    }
    int src = t.src;
    for (std::size_t i = 0; i < t.label.size(); ++i) {
      const int dst = i + 1 == t.label.size() ? t.dst : fresh++;
      out.transitions.push_back({src, {t.label[i]}, t.rule, t.production, dst});
      src = dst;
    }
  }
  out.chain_states = static_cast<std::size_t>(fresh) - a.states.size();
  return out;
}

std::vector<InvariantViolation> check_sequence(const ReminderSequence& rs, const Grammar& g,
                                               const ReminderGraph& rg, const Relation& reach,
                                               int d) {
  std::vector<InvariantViolation> out;
  auto report = [&](std::string claim, std::string message) {
    out.push_back({-1, std::move(claim), std::move(message)});
  };
  const std::string text = to_string(g, rs);
  const int m = stats(g).m;

  std::set<VarId> all;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (VarId v : rs.variables_at(i)) all.insert(v);
  }
  for (auto u = all.begin(); u != all.end(); ++u) {
    for (auto v = std::next(u); v != all.end(); ++v) {
      if (!rg.graph.has_edge(*u, *v)) {
        report("clique", text + ": " + g.variable_name(*u) + " and " + g.variable_name(*v) +
                             " are not adjacent in the reminder graph");
      }
    }
  }

  for (std::size_t i = 0; i < rs.size(); ++i) {
    const ReminderPair& p = rs[i];
    if (p.is_bottom() && !p.followup.empty()) {
      report("bottom", text + ": bottom pair with nonempty followup");
    }
    if (static_cast<int>(p.followup.size()) > m) {
      report("IV", text + ": pair " + std::to_string(i + 1) + " has followup size " +
                       std::to_string(p.followup.size()) + " > m = " + std::to_string(m));
    }
    if (p.followup.empty() && i + 1 < rs.size()) {
      report("II", text + ": pair " + std::to_string(i + 1) + " has empty followup but is not last");
    }
    if (!p.followup.empty() && !p.is_bottom()) {
      std::vector<VarId> used = p.followup;
      used.push_back(p.current);
      std::sort(used.begin(), used.end());
      const bool covered = std::any_of(g.productions().begin(), g.productions().end(),
                                       [&](const Production& prod) {
                                         return prod.arity() >= 2 && is_submultiset(used, prod.variables());
                                       });
      if (!covered) {
        report("I", text + ": pair " + std::to_string(i + 1) +
                        " is not contained in the right-hand side of any production");
      }
    }
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (p.is_bottom()) break;
      for (VarId v : rs.variables_at(j)) {
        if (!reach.contains(p.current, v)) {
          report("III", text + ": " + g.variable_name(v) + " in pair " + std::to_string(j + 1) +
                            " is not reachable from " + g.variable_name(p.current));
        }
      }
    }
  }

  for (VarId v = 0; v < g.variable_count(); ++v) {
    if (rs.occurrences(v) > 2) {
      report("occurrence", text + ": " + g.variable_name(v) + " is Current " +
                               std::to_string(rs.occurrences(v)) + " times");
    }
  }
  if (static_cast<int>(rs.size()) > 2 * d + 1) {
    report("length", text + ": length " + std::to_string(rs.size()) + " > 2d+1 = " +
                         std::to_string(2 * d + 1));
  }
  return out;
}

InvariantReport check_state_invariants(const Nfa& a, const Grammar& g, const ReminderGraph& rg,
                                       int d) {
  InvariantReport report;
  report.d = d;
  const Relation reach = reachability(g);
  for (int s = 0; s < static_cast<int>(a.states.size()); ++s) {
    ++report.states_checked;
    report.max_length = std::max(report.max_length, a.states[s].size());
    for (InvariantViolation& v : check_sequence(a.states[s], g, rg, reach, d)) {
      v.state = s;
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

SizeReport size_report(const Nfa& a, const Grammar& g, int d) {
  const GrammarStats st = stats(g);
  SizeReport r;
  r.n = st.n;
  r.m = st.m;
  r.d = d;
  r.e = st.e;
  r.p_count = st.p_count;
  const bool expanded =
      std::all_of(a.transitions.begin(), a.transitions.end(), [](const Transition& t) { return t.label.size() <= 1; });
  const Nfa letters = expanded ? a : expand_letters(a);
  r.word_states = a.states.size();
  r.word_transitions = a.transitions.size();
  r.letter_states = letters.state_count();
  r.letter_transitions = letters.transitions.size();
  r.reference = static_cast<long double>(st.n) *
                std::pow(static_cast<long double>(d), static_cast<long double>(2 * d * (st.m + 1)));
  r.word_exceeds_reference = static_cast<long double>(r.word_states) > r.reference;
  r.letter_exceeds_reference = static_cast<long double>(r.letter_states) > r.reference;
  for (const ReminderSequence& rs : a.states) r.max_length = std::max(r.max_length, rs.size());
  r.length_exceeds_d = static_cast<int>(r.max_length) > d;
  return r;
}

}  // namespace parikh

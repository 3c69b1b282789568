#include "parikh/grammar.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "parikh/error.hpp"

namespace parikh {

namespace {

constexpr std::string_view kArrow = "->";
constexpr std::string_view kBar = "|";
constexpr std::string_view kEpsilon = "_eps_";
constexpr std::string_view kStart = "start:";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

bool is_reserved(std::string_view s) { return s == kArrow || s == kBar || s == kEpsilon; }

void check_name(const std::string& name) {
  if (name.empty()) throw GrammarError("empty symbol name");
  for (char c : name) {
    if (is_space(c) || c == '\n' || c == '#') {
      throw GrammarError("symbol name '" + name + "' contains whitespace or '#'");
    }
  }
  if (is_reserved(name)) throw GrammarError("'" + name + "' is reserved and cannot name a symbol");
}

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    tokens.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return tokens;
}

}  // namespace

std::vector<VarId> Production::variables() const {
  std::vector<VarId> out;
  for (const Symbol& s : rhs) {
    if (s.is_variable()) out.push_back(s.id);
  }
  return out;
}

Word Production::terminal_word() const {
  Word out;
  for (const Symbol& s : rhs) {
    if (s.is_terminal()) out.push_back(s.id);
  }
  return out;
}

int Production::arity() const {
  return static_cast<int>(std::count_if(rhs.begin(), rhs.end(),
                                        [](const Symbol& s) { return s.is_variable(); }));
}

int Production::terminal_count() const { return static_cast<int>(rhs.size()) - arity(); }

ParikhVector ParikhVector::of(const Word& word) {
  ParikhVector v;
  for (TermId t : word) v.add(t);
  return v;
}

void ParikhVector::add(TermId t, long long n) {
  if (n == 0) return;
  long long& c = counts_[t];
  c += n;
  total_ += n;
  if (c == 0) counts_.erase(t);
}

long long ParikhVector::count(TermId t) const {
  auto it = counts_.find(t);
  return it == counts_.end() ? 0 : it->second;
}

ParikhVector& ParikhVector::operator+=(const ParikhVector& other) {
  for (const auto& [t, n] : other.counts_) add(t, n);
  return *this;
}

std::vector<std::pair<VarId, VarId>> Relation::pairs() const {
  std::vector<std::pair<VarId, VarId>> out;
  for (VarId a = 0; a < n_; ++a) {
    for (VarId b = 0; b < n_; ++b) {
      if (contains(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

bool Relation::includes(const Relation& other) const {
  if (other.n_ != n_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (other.bits_[i] && !bits_[i]) return false;
  }
  return true;
}

Grammar::Grammar(const std::string& axiom, const std::vector<NamedProduction>& productions) {
  if (productions.empty()) throw GrammarError("grammar has no productions");
  check_name(axiom);

  std::set<std::string> lhs_names;
  for (const auto& [lhs, rhs] : productions) {
    check_name(lhs);
    for (const auto& s : rhs) check_name(s);
    lhs_names.insert(lhs);
  }
  if (!lhs_names.count(axiom)) {
    throw GrammarError("axiom '" + axiom + "' is not the left-hand side of any production");
  }

  std::unordered_map<std::string, Symbol> index;
  auto see = [&](const std::string& name) {
    if (index.count(name)) return;
    if (lhs_names.count(name)) {
      index[name] = Symbol::variable(static_cast<int>(variables_.size()));
      variables_.push_back(name);
    } else {
      index[name] = Symbol::terminal(static_cast<int>(terminals_.size()));
      terminals_.push_back(name);
    }
  };
  see(axiom);
  for (const auto& [lhs, rhs] : productions) {
    see(lhs);
    for (const auto& s : rhs) see(s);
  }

  axiom_ = index.at(axiom).id;
  std::set<Production> seen;
  by_lhs_.resize(variables_.size());
  for (const auto& [lhs, rhs] : productions) {
    Production p;
    p.lhs = index.at(lhs).id;
    for (const auto& s : rhs) p.rhs.push_back(index.at(s));
    if (!seen.insert(p).second) continue;
    by_lhs_[p.lhs].push_back(static_cast<int>(productions_.size()));
    productions_.push_back(std::move(p));
  }
}

const std::string& Grammar::name(Symbol s) const {
  return s.is_variable() ? variables_.at(s.id) : terminals_.at(s.id);
}

std::optional<VarId> Grammar::find_variable(std::string_view name) const {
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) return std::nullopt;
  return static_cast<VarId>(it - variables_.begin());
}

std::optional<TermId> Grammar::find_terminal(std::string_view name) const {
  auto it = std::find(terminals_.begin(), terminals_.end(), name);
  if (it == terminals_.end()) return std::nullopt;
  return static_cast<TermId>(it - terminals_.begin());
}

std::vector<Grammar::NamedProduction> Grammar::named_productions() const {
  std::vector<NamedProduction> out;
  for (const Production& p : productions_) {
    std::vector<std::string> rhs;
    for (const Symbol& s : p.rhs) rhs.push_back(name(s));
    out.emplace_back(variables_[p.lhs], std::move(rhs));
  }
  return out;
}

Grammar parse_grammar(std::string_view text) {
  std::optional<std::string> axiom;
  std::vector<Grammar::NamedProduction> productions;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }

    if (!axiom) {
      const Token& first = tokens.front();
      if (first.text.substr(0, kStart.size()) != kStart) {
        throw GrammarSyntaxError("expected 'start: <symbol>' directive", line_no, first.column);
      }
      std::string_view glued = first.text.substr(kStart.size());
      if (!glued.empty()) {
        if (tokens.size() != 1) {
          throw GrammarSyntaxError("unexpected token after axiom", line_no, tokens[1].column);
        }
        axiom = std::string(glued);
      } else {
        if (tokens.size() < 2) {
          throw GrammarSyntaxError("missing axiom symbol", line_no,
                                   first.column + static_cast<int>(first.text.size()));
        }
        if (tokens.size() > 2) {
          throw GrammarSyntaxError("unexpected token after axiom", line_no, tokens[2].column);
        }
        axiom = std::string(tokens[1].text);
      }
      if (is_reserved(*axiom)) {
        throw GrammarSyntaxError("reserved token used as axiom", line_no, tokens.back().column);
      }
      if (end == text.size()) break;
      continue;
    }

    if (tokens.front().text.substr(0, kStart.size()) == kStart) {
      throw GrammarSyntaxError("duplicate start directive", line_no, tokens.front().column);
    }
    if (is_reserved(tokens.front().text)) {
      throw GrammarSyntaxError("expected a left-hand-side symbol", line_no, tokens.front().column);
    }
    if (tokens.size() < 2 || tokens[1].text != kArrow) {
      int col = tokens.size() < 2 ? tokens[0].column + static_cast<int>(tokens[0].text.size())
                                  : tokens[1].column;
      throw GrammarSyntaxError("expected '->'", line_no, col);
    }
    std::string lhs(tokens[0].text);
    std::vector<std::string> rhs;
    bool saw_eps = false;
    auto flush = [&](int column) {
      if (saw_eps && !rhs.empty()) {
        throw GrammarSyntaxError("'_eps_' must stand alone in an alternative", line_no, column);
      }
      productions.emplace_back(lhs, rhs);
      rhs.clear();
      saw_eps = false;
    };
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const Token& tok = tokens[i];
      if (tok.text == kBar) {
        flush(tok.column);
      } else if (tok.text == kArrow) {
        throw GrammarSyntaxError("unexpected '->'", line_no, tok.column);
      } else if (tok.text == kEpsilon) {
        if (saw_eps || !rhs.empty()) {
          throw GrammarSyntaxError("'_eps_' must stand alone in an alternative", line_no,
                                   tok.column);
        }
        saw_eps = true;
      } else {
        if (saw_eps) {
          throw GrammarSyntaxError("'_eps_' must stand alone in an alternative", line_no,
                                   tok.column);
        }
        rhs.emplace_back(tok.text);
      }
    }
    flush(static_cast<int>(line.size()) + 1);
    if (end == text.size()) break;
  }

  if (!axiom) throw GrammarError("missing 'start:' directive");
  return Grammar(*axiom, productions);
}

std::string render_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "start: " << g.variable_name(g.axiom()) << '\n';
  for (const Production& p : g.productions()) {
    out << g.variable_name(p.lhs) << " ->";
    if (p.rhs.empty()) out << " _eps_";
    for (const Symbol& s : p.rhs) out << ' ' << g.name(s);
    out << '\n';
  }
  return out.str();
}

std::string word_to_string(const Grammar& g, const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += g.terminal_name(w[i]);
  }
  return out;
}

std::string parikh_to_string(const std::vector<std::string>& terminals, const ParikhVector& v) {
  std::string out = "{";
  bool first = true;
  for (const auto& [t, n] : v.entries()) {
    if (!first) out += ", ";
    first = false;
    out += terminals.at(t) + ":" + std::to_string(n);
  }
  return out + "}";
}

GrammarStats stats(const Grammar& g) {
  GrammarStats s;
  s.n = g.variable_count();
  s.p_count = static_cast<int>(g.productions().size());
  int max_r = 0;
  for (const Production& p : g.productions()) {
    max_r = std::max(max_r, p.arity());
    s.e = std::max(s.e, p.terminal_count());
  }
  s.m = std::max(0, max_r - 1);
  return s;
}

Relation accessibility(const Grammar& g) {
  Relation r(g.variable_count());
  for (const Production& p : g.productions()) {
    for (VarId v : p.variables()) r.insert(p.lhs, v);
  }
  return r;
}

Relation transitive_closure(const Relation& r) {
  Relation c = r;
  const int n = r.size();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!c.contains(i, k)) continue;
      for (int j = 0; j < n; ++j) {
        if (c.contains(k, j)) c.insert(i, j);
      }
    }
  }
  return c;
}

Relation reachability(const Grammar& g) { return transitive_closure(accessibility(g)); }

std::vector<std::optional<long long>> min_yield(const Grammar& g) {
  std::vector<std::optional<long long>> best(g.variable_count());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions()) {
      long long cost = p.terminal_count();
      bool finite = true;
      for (VarId v : p.variables()) {
        if (!best[v]) {
          finite = false;
          break;
        }
        cost += *best[v];
      }
      if (finite && (!best[p.lhs] || cost < *best[p.lhs])) {
        best[p.lhs] = cost;
        changed = true;
      }
    }
  }
  return best;
}

Grammar sanitize(const Grammar& g) {
  const auto yield = min_yield(g);
  if (!yield[g.axiom()]) {
    throw GrammarError("axiom '" + g.variable_name(g.axiom()) + "' derives no terminal word");
  }
  auto usable = [&](const Production& p) {
    if (!yield[p.lhs]) return false;
    for (VarId v : p.variables()) {
      if (!yield[v]) return false;
    }
    return true;
  };

  std::vector<char> reached(g.variable_count(), 0);
  std::deque<VarId> queue{g.axiom()};
  reached[g.axiom()] = 1;
  while (!queue.empty()) {
    VarId v = queue.front();
    queue.pop_front();
    for (int pi : g.productions_of(v)) {
      const Production& p = g.productions()[pi];
      if (!usable(p)) continue;
      for (VarId w : p.variables()) {
        if (!reached[w]) {
          reached[w] = 1;
          queue.push_back(w);
        }
      }
    }
  }

  std::vector<Grammar::NamedProduction> kept;
  const auto named = g.named_productions();
  for (std::size_t i = 0; i < named.size(); ++i) {
    const Production& p = g.productions()[i];
    if (reached[p.lhs] && usable(p)) kept.push_back(named[i]);
  }
  return Grammar(g.variable_name(g.axiom()), kept);
}

Grammar with_axiom(const Grammar& g, VarId axiom) {
  return Grammar(g.variable_name(axiom), g.named_productions());
}

ParikhSet bounded_parikh_language(const Grammar& g, int k, std::size_t budget) {
  if (k < 0) throw PreconditionError("bounded_parikh_language: k must be non-negative");
  const int n = g.variable_count();
  std::vector<ParikhSet> sets(n);

  // Sum-set of the variable sets along a production, truncated at total k.
  auto expand = [&](const Production& p) {
    ParikhSet acc{ParikhVector::of(p.terminal_word())};
    if (acc.begin()->total() > k) return ParikhSet{};
    for (VarId v : p.variables()) {
      ParikhSet next;
      for (const ParikhVector& a : acc) {
        for (const ParikhVector& b : sets[v]) {
          if (a.total() + b.total() > k) continue;
          next.insert(a + b);
        }
      }
      acc = std::move(next);
      if (acc.empty()) break;
    }
    return acc;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Production& p : g.productions()) {
      const ParikhSet produced = expand(p);
      for (const ParikhVector& v : produced) {
        if (sets[p.lhs].insert(v).second) {
          changed = true;
          if (sets[p.lhs].size() > budget) {
            throw BudgetExceeded("bounded_parikh_language: per-variable set too large", budget);
          }
        }
      }
    }
  }
  return sets[g.axiom()];
}

}  // namespace parikh

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parikh {

using VarId = int;
using TermId = int;

// A word over the terminal alphabet of some grammar.
using Word = std::vector<TermId>;

enum class SymbolKind : std::uint8_t { kVariable, kTerminal };

struct Symbol {
  SymbolKind kind = SymbolKind::kTerminal;
  int id = 0;

  static Symbol variable(VarId v) { return {SymbolKind::kVariable, v}; }
  static Symbol terminal(TermId t) { return {SymbolKind::kTerminal, t}; }

  bool is_variable() const { return kind == SymbolKind::kVariable; }
  bool is_terminal() const { return kind == SymbolKind::kTerminal; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// lhs -> rhs. The rhs reads w_0 A_1 w_1 ... A_r w_r once split at variables.
struct Production {
  VarId lhs = 0;
  std::vector<Symbol> rhs;

  // A_1 ... A_r in rhs order.
  std::vector<VarId> variables() const;
  // Concatenation w_0 w_1 ... w_r.
  Word terminal_word() const;
  // r, the number of variable occurrences in rhs.
  int arity() const;
  int terminal_count() const;

  friend auto operator<=>(const Production&, const Production&) = default;
};

// Terminal -> occurrence count, stored without zero entries.
class ParikhVector {
 public:
  ParikhVector() = default;

  static ParikhVector of(const Word& word);

  void add(TermId t, long long n = 1);
  long long count(TermId t) const;
  long long total() const { return total_; }
  bool empty() const { return counts_.empty(); }
  const std::map<TermId, long long>& entries() const { return counts_; }

  ParikhVector& operator+=(const ParikhVector& other);
  friend ParikhVector operator+(ParikhVector a, const ParikhVector& b) { return a += b; }
  friend bool operator==(const ParikhVector& a, const ParikhVector& b) {
    return a.counts_ == b.counts_;
  }
  friend auto operator<=>(const ParikhVector& a, const ParikhVector& b) {
    return a.counts_ <=> b.counts_;
  }

 private:
  std::map<TermId, long long> counts_;
  long long total_ = 0;
};

inline ParikhVector parikh(const Word& word) { return ParikhVector::of(word); }

using ParikhSet = std::set<ParikhVector>;

struct GrammarStats {
  int n = 0;        // variables
  int m = 0;        // degree, clamped at 0
  int e = 0;        // max terminal occurrences in a rhs
  int p_count = 0;  // productions
};

// Binary relation on variables 0..n-1.
class Relation {
 public:
  explicit Relation(int n = 0) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  bool contains(VarId a, VarId b) const { return bits_[index(a, b)] != 0; }
  void insert(VarId a, VarId b) { bits_[index(a, b)] = 1; }
  std::vector<std::pair<VarId, VarId>> pairs() const;
  bool includes(const Relation& other) const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t index(VarId a, VarId b) const { return static_cast<std::size_t>(a) * n_ + b; }

  int n_;
  std::vector<char> bits_;
};

// A context-free grammar G = (V, Sigma, P, S).
//
// Symbols are classified positionally: a name is a variable iff it is the
// left-hand side of some production. Both symbol lists are kept in
// first-appearance order (axiom first, then productions in order) and
// duplicate productions are merged, so two grammars built from the same
// production list compare equal.
class Grammar {
 public:
  using NamedProduction = std::pair<std::string, std::vector<std::string>>;

  Grammar(const std::string& axiom, const std::vector<NamedProduction>& productions);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<std::string>& terminals() const { return terminals_; }
  const std::vector<Production>& productions() const { return productions_; }
  VarId axiom() const { return axiom_; }
  int variable_count() const { return static_cast<int>(variables_.size()); }
  int terminal_count() const { return static_cast<int>(terminals_.size()); }

  const std::string& name(Symbol s) const;
  const std::string& variable_name(VarId v) const { return variables_.at(v); }
  const std::string& terminal_name(TermId t) const { return terminals_.at(t); }
  std::optional<VarId> find_variable(std::string_view name) const;
  std::optional<TermId> find_terminal(std::string_view name) const;

  // Production indices with the given left-hand side, in grammar order.
  const std::vector<int>& productions_of(VarId v) const { return by_lhs_.at(v); }

  std::vector<NamedProduction> named_productions() const;

  friend bool operator==(const Grammar& a, const Grammar& b) {
    return a.variables_ == b.variables_ && a.terminals_ == b.terminals_ &&
           a.productions_ == b.productions_ && a.axiom_ == b.axiom_;
  }

 private:
  std::vector<std::string> variables_;
  std::vector<std::string> terminals_;
  std::vector<Production> productions_;
  std::vector<std::vector<int>> by_lhs_;
  VarId axiom_ = 0;
};

// Text format: '#' comments, a first line "start: <symbol>", then lines
// "<symbol> -> <symbol>* ( | <symbol>* )*". An empty alternative or the token
// _eps_ denotes the empty word.
Grammar parse_grammar(std::string_view text);
std::string render_grammar(const Grammar& g);

std::string word_to_string(const Grammar& g, const Word& w);
std::string parikh_to_string(const std::vector<std::string>& terminals, const ParikhVector& v);

GrammarStats stats(const Grammar& g);

// A -> A' iff A' occurs in the rhs of some production of A.
Relation accessibility(const Grammar& g);
Relation transitive_closure(const Relation& r);
// Transitive (not reflexive) closure of accessibility.
Relation reachability(const Grammar& g);

// Minimum yield length per variable; nullopt for unproductive variables.
std::vector<std::optional<long long>> min_yield(const Grammar& g);

// Drops variables that are unreachable from the axiom or unproductive,
// along with every production mentioning them. Throws GrammarError when the
// axiom itself is unproductive (the language is empty).
Grammar sanitize(const Grammar& g);

// Same productions, different axiom.
Grammar with_axiom(const Grammar& g, VarId axiom);

// {Pi(w) : w in L(G), |w| <= k}. Computed as the least fixpoint of the
// per-variable sets of bounded Parikh vectors; unproductive variables simply
// contribute nothing. Throws BudgetExceeded when a per-variable set grows
// beyond `budget` vectors.
ParikhSet bounded_parikh_language(const Grammar& g, int k, std::size_t budget = 2'000'000);

}  // namespace parikh

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "moaif/common.hpp"

namespace moaif::ltlf {

/// A set of atomic propositions; bit i of a Symbol refers to alphabet[i].
using Alphabet = std::vector<std::string>;
using Symbol = std::uint64_t;
using Trace = std::vector<Symbol>;

enum class Op { True, Atom, Not, And, Or, Next, Until, Eventually, Globally };

constexpr int arity(Op op) {
  switch (op) {
    case Op::True:
    case Op::Atom: return 0;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Globally: return 1;
    default: return 2;
  }
}

/// Immutable LTLf syntax tree. Copies share structure.
class Formula {
 public:
  struct Node {
    Op op;
    std::string atom;  // only for Op::Atom
    int atom_index = -1;
    std::shared_ptr<const Node> lhs, rhs;
  };

  Formula() : Formula(truth()) {}

  static Formula truth() { return Formula(std::make_shared<Node>(Node{Op::True, {}, -1, {}, {}})); }
  static Formula atom(std::string name, int index) {
    return Formula(std::make_shared<Node>(Node{Op::Atom, std::move(name), index, {}, {}}));
  }
  static Formula unary(Op op, const Formula& f) {
    return Formula(std::make_shared<Node>(Node{op, {}, -1, f.node_, {}}));
  }
  static Formula binary(Op op, const Formula& l, const Formula& r) {
    return Formula(std::make_shared<Node>(Node{op, {}, -1, l.node_, r.node_}));
  }

  Op op() const { return node_->op; }
  const std::string& atom_name() const { return node_->atom; }
  int atom_index() const { return node_->atom_index; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  const Node* node() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b || a->op != b->op) return false;
    if (a->op == Op::Atom) return a->atom == b->atom && a->atom_index == b->atom_index;
    return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Parsing and printing

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const Alphabet& ap) : text_(text), ap_(ap) {}

  Formula parse() {
    Formula f = implication();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string_view peek_ident() {
    skip_ws();
    std::size_t end = pos_;
    if (end < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
      while (end < text_.size() && ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (eat("->")) {
      Formula rhs = implication();
      return Formula::binary(Op::Or, Formula::unary(Op::Not, lhs), rhs);
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    for (;;) {
      skip_ws();
      if (eat("||") || eat("|")) f = Formula::binary(Op::Or, f, conjunction());
      else return f;
    }
  }

  Formula conjunction() {
    Formula f = until();
    for (;;) {
      if (eat("&&") || eat("&")) f = Formula::binary(Op::And, f, until());
      else return f;
    }
  }

  Formula until() {
    Formula lhs = unary();
    if (peek_ident() == "U") {
      pos_ += 1;
      return Formula::binary(Op::Until, lhs, until());
    }
    return lhs;
  }

  Formula unary() {
    if (eat("!") || eat("~")) return Formula::unary(Op::Not, unary());
    std::string_view id = peek_ident();
    if (id == "X" || id == "F" || id == "G") {
      pos_ += 1;
      Op op = id == "X" ? Op::Next : id == "F" ? Op::Eventually : Op::Globally;
      return Formula::unary(op, unary());
    }
    return primary();
  }

  Formula primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of formula", pos_);
    if (eat("(")) {
      Formula f = implication();
      if (!eat(")")) throw ParseError("expected ')'", pos_);
      return f;
    }
    std::size_t start = pos_;
    std::string_view id = peek_ident();
    if (id.empty()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    pos_ += id.size();
    if (id == "true") return Formula::truth();
    if (id == "false") return Formula::unary(Op::Not, Formula::truth());
    if (id == "U") throw ParseError("unexpected 'U'", start);
    auto it = std::find(ap_.begin(), ap_.end(), id);
    if (it == ap_.end()) throw ParseError("unknown atom '" + std::string(id) + "'", start);
    return Formula::atom(std::string(id), static_cast<int>(it - ap_.begin()));
  }

  std::string_view text_;
  const Alphabet& ap_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` over the proposition set `ap`.
///
/// Operators: ! & | -> X U F G, constants true/false, parentheses. Binding
/// from loosest to tightest: ->, |, &, U, then the unary operators. `->` and
/// `U` associate to the right. Implication is desugared to !a | b and false
/// to !true, so the resulting tree only uses the core node kinds.
inline Formula parse(std::string_view text, const Alphabet& ap) {
  return detail::Parser(text, ap).parse();
}

/// Canonical fully-bracketed form; parse(print(f), ap) == f.
inline std::string print(const Formula& f) {
  switch (f.op()) {
    case Op::True: return "true";
    case Op::Atom: return f.atom_name();
    case Op::Not: return "!(" + print(f.lhs()) + ")";
    case Op::Next: return "X(" + print(f.lhs()) + ")";
    case Op::Eventually: return "F(" + print(f.lhs()) + ")";
    case Op::Globally: return "G(" + print(f.lhs()) + ")";
    case Op::And: return "(" + print(f.lhs()) + " & " + print(f.rhs()) + ")";
    case Op::Or: return "(" + print(f.lhs()) + " | " + print(f.rhs()) + ")";
    case Op::Until: return "(" + print(f.lhs()) + " U " + print(f.rhs()) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Finite-trace semantics

namespace detail {

inline std::vector<char> eval_all(const Formula& f, std::span<const Symbol> w) {
  const std::size_t n = w.size();
  std::vector<char> v(n, 0);
  switch (f.op()) {
    case Op::True: std::fill(v.begin(), v.end(), 1); break;
    case Op::Atom:
      for (std::size_t i = 0; i < n; ++i) v[i] = (w[i] >> f.atom_index()) & 1u;
      break;
    case Op::Not: {
      auto a = eval_all(f.lhs(), w);
      for (std::size_t i = 0; i < n; ++i) v[i] = !a[i];
      break;
    }
    case Op::And:
    case Op::Or: {
      auto a = eval_all(f.lhs(), w);
      auto b = eval_all(f.rhs(), w);
      for (std::size_t i = 0; i < n; ++i) v[i] = f.op() == Op::And ? (a[i] && b[i]) : (a[i] || b[i]);
      break;
    }
    case Op::Next: {
      auto a = eval_all(f.lhs(), w);
      for (std::size_t i = 0; i + 1 < n; ++i) v[i] = a[i + 1];
      break;
    }
    case Op::Until: {
      auto a = eval_all(f.lhs(), w);
      auto b = eval_all(f.rhs(), w);
      for (std::size_t i = n; i-- > 0;) v[i] = b[i] || (a[i] && i + 1 < n && v[i + 1]);
      break;
    }
    case Op::Eventually: {
      auto a = eval_all(f.lhs(), w);
      for (std::size_t i = n; i-- > 0;) v[i] = a[i] || (i + 1 < n && v[i + 1]);
      break;
    }
    case Op::Globally: {
      auto a = eval_all(f.lhs(), w);
      for (std::size_t i = n; i-- > 0;) v[i] = a[i] && (i + 1 == n || v[i + 1]);
      break;
    }
  }
  return v;
}

}  // namespace detail

/// Standard LTLf satisfaction of `f` by the whole (non-empty) trace.
inline bool holds(const Formula& f, std::span<const Symbol> trace) {
  if (trace.empty()) throw Error("holds: LTLf traces must be non-empty");
  return detail::eval_all(f, trace)[0] != 0;
}

// ---------------------------------------------------------------------------
// DFA

struct Dfa {
  Alphabet ap;
  int num_states = 0;
  int init = 0;
  std::vector<int> delta;  // delta[state * num_symbols() + symbol]
  std::vector<char> accepting;

  std::size_t num_symbols() const { return std::size_t{1} << ap.size(); }
  int step(int state, Symbol sym) const { return delta[static_cast<std::size_t>(state) * num_symbols() + sym]; }
  bool is_accepting(int state) const { return accepting[static_cast<std::size_t>(state)] != 0; }

  int run(std::span<const Symbol> trace) const {
    int q = init;
    for (Symbol s : trace) q = step(q, s);
    return q;
  }

  bool accepts(std::span<const Symbol> trace) const { return is_accepting(run(trace)); }

  void validate() const {
    if (ap.size() > 20) throw Error("dfa: alphabet too large");
    if (num_states <= 0) throw Error("dfa: no states");
    if (init < 0 || init >= num_states) throw Error("dfa: initial state out of range");
    if (delta.size() != static_cast<std::size_t>(num_states) * num_symbols())
      throw Error("dfa: transition table is not total");
    if (accepting.size() != static_cast<std::size_t>(num_states)) throw Error("dfa: accepting table size mismatch");
    for (int t : delta)
      if (t < 0 || t >= num_states) throw Error("dfa: transition target out of range");
  }
};

/// True iff the trace is in the first-satisfaction language: the run accepts
/// at the final symbol and at no strict non-empty prefix.
inline bool first_satisfaction_language(const Dfa& dfa, std::span<const Symbol> trace) {
  if (trace.empty()) return false;
  int q = dfa.init;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    q = dfa.step(q, trace[k]);
    if (dfa.is_accepting(q) && k + 1 < trace.size()) return false;
  }
  return dfa.is_accepting(q);
}

struct TranslateOptions {
  std::size_t max_states = 100000;
  bool minimize = true;
};

namespace detail {

// Negation normal form over the extended operator set used for progression.
enum class NOp { True, False, Lit, NegLit, And, Or, Next, WeakNext, Until, Release };

struct NNode {
  NOp op;
  int a = -1, b = -1;
  int atom = -1;
};

class NnfStore {
 public:
  int make(NOp op, int a = -1, int b = -1, int atom = -1) {
    // Light simplification keeps the closure small.
    if (op == NOp::And) {
      if (is(a, NOp::False) || is(b, NOp::False)) return make(NOp::False);
      if (is(a, NOp::True)) return b;
      if (is(b, NOp::True) || a == b) return a;
    } else if (op == NOp::Or) {
      if (is(a, NOp::True) || is(b, NOp::True)) return make(NOp::True);
      if (is(a, NOp::False)) return b;
      if (is(b, NOp::False) || a == b) return a;
    }
    auto key = std::make_tuple(static_cast<int>(op), a, b, atom);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({op, a, b, atom});
    index_.emplace(key, id);
    return id;
  }

  const NNode& operator[](int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  bool is(int id, NOp op) const { return nodes_[static_cast<std::size_t>(id)].op == op; }

  int from(const Formula& f, bool neg) {
    switch (f.op()) {
      case Op::True: return make(neg ? NOp::False : NOp::True);
      case Op::Atom: return make(neg ? NOp::NegLit : NOp::Lit, -1, -1, f.atom_index());
      case Op::Not: return from(f.lhs(), !neg);
      case Op::And: return make(neg ? NOp::Or : NOp::And, from(f.lhs(), neg), from(f.rhs(), neg));
      case Op::Or: return make(neg ? NOp::And : NOp::Or, from(f.lhs(), neg), from(f.rhs(), neg));
      case Op::Next: return make(neg ? NOp::WeakNext : NOp::Next, from(f.lhs(), neg));
      case Op::Until: return make(neg ? NOp::Release : NOp::Until, from(f.lhs(), neg), from(f.rhs(), neg));
      case Op::Eventually:
        return neg ? make(NOp::Release, make(NOp::False), from(f.lhs(), true))
                   : make(NOp::Until, make(NOp::True), from(f.lhs(), false));
      case Op::Globally:
        return neg ? make(NOp::Until, make(NOp::True), from(f.lhs(), true))
                   : make(NOp::Release, make(NOp::False), from(f.lhs(), false));
    }
    return make(NOp::False);
  }

 private:
  std::vector<NNode> nodes_;
  std::map<std::tuple<int, int, int, int>, int> index_;
};

// An obligation for the next position: formula id with a strong/weak flag,
// encoded as id * 2 + weak. A clause is a sorted conjunction of obligations;
// a Dnf is a sorted antichain of clauses. {} is false, {{}} is true.
using Clause = std::vector<int>;
using Dnf = std::vector<Clause>;

inline int strong_obl(int id) { return id * 2; }
inline int weak_obl(int id) { return id * 2 + 1; }

inline void normalize_clause(Clause& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  // X(psi) implies WX(psi).
  Clause out;
  out.reserve(c.size());
  for (int o : c)
    if (!((o & 1) && std::binary_search(c.begin(), c.end(), o - 1))) out.push_back(o);
  c.swap(out);
}

inline void normalize_dnf(Dnf& d) {
  for (auto& c : d) normalize_clause(c);
  std::sort(d.begin(), d.end(), [](const Clause& x, const Clause& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  d.erase(std::unique(d.begin(), d.end()), d.end());
  Dnf kept;
  for (auto& c : d) {
    bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const Clause& k) {
      return std::includes(c.begin(), c.end(), k.begin(), k.end());
    });
    if (!subsumed) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  d.swap(kept);
}

inline Dnf dnf_or(Dnf a, const Dnf& b) {
  a.insert(a.end(), b.begin(), b.end());
  normalize_dnf(a);
  return a;
}

inline Dnf dnf_and(const Dnf& a, const Dnf& b) {
  Dnf out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) {
      Clause c = x;
      c.insert(c.end(), y.begin(), y.end());
      out.push_back(std::move(c));
    }
  normalize_dnf(out);
  return out;
}

class Progressor {
 public:
  explicit Progressor(NnfStore& store) : store_(store) {}

  // Obligations for the rest of the trace after reading `sym` at a position
  // where formula `id` must hold.
  const Dnf& progress(int id, Symbol sym) {
    auto key = std::make_pair(id, sym);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Dnf d = compute(id, sym);
    return memo_.emplace(key, std::move(d)).first->second;
  }

 private:
  Dnf compute(int id, Symbol sym) {
    const NNode n = store_[id];
    const Dnf t{{}};
    const Dnf f{};
    switch (n.op) {
      case NOp::True: return t;
      case NOp::False: return f;
      case NOp::Lit: return ((sym >> n.atom) & 1u) ? t : f;
      case NOp::NegLit: return ((sym >> n.atom) & 1u) ? f : t;
      case NOp::And: return dnf_and(progress(n.a, sym), progress(n.b, sym));
      case NOp::Or: return dnf_or(progress(n.a, sym), progress(n.b, sym));
      case NOp::Next:
        if (store_.is(n.a, NOp::False)) return f;
        return Dnf{{strong_obl(n.a)}};
      case NOp::WeakNext:
        if (store_.is(n.a, NOp::True)) return t;
        return Dnf{{weak_obl(n.a)}};
      case NOp::Until:
        return dnf_or(progress(n.b, sym), dnf_and(progress(n.a, sym), Dnf{{strong_obl(id)}}));
      case NOp::Release:
        return dnf_and(progress(n.b, sym), dnf_or(progress(n.a, sym), Dnf{{weak_obl(id)}}));
    }
    return f;
  }

  NnfStore& store_;
  std::map<std::pair<int, Symbol>, Dnf> memo_;
};

/// Moore partition refinement followed by BFS renumbering from the initial
/// state (so equal languages give identical tables).
inline Dfa minimize(const Dfa& in) {
  const std::size_t ns = in.num_symbols();
  const int n = in.num_states;
  std::vector<int> block(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) block[static_cast<std::size_t>(s)] = in.is_accepting(s) ? 1 : 0;
  int num_blocks = 0;
  for (;;) {
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      std::vector<int> sig;
      sig.reserve(ns + 1);
      sig.push_back(block[static_cast<std::size_t>(s)]);
      for (std::size_t a = 0; a < ns; ++a) sig.push_back(block[static_cast<std::size_t>(in.step(s, a))]);
      auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
      next[static_cast<std::size_t>(s)] = it->second;
    }
    int count = static_cast<int>(sig_ids.size());
    block.swap(next);
    if (count == num_blocks) break;
    num_blocks = count;
  }
  // Renumber blocks in BFS order.
  std::vector<int> order(static_cast<std::size_t>(num_blocks), -1);
  std::vector<int> rep(static_cast<std::size_t>(num_blocks), -1);
  for (int s = 0; s < n; ++s)
    if (rep[static_cast<std::size_t>(block[static_cast<std::size_t>(s)])] < 0)
      rep[static_cast<std::size_t>(block[static_cast<std::size_t>(s)])] = s;
  std::vector<int> queue{block[static_cast<std::size_t>(in.init)]};
  order[static_cast<std::size_t>(queue[0])] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int s = rep[static_cast<std::size_t>(queue[h])];
    for (std::size_t a = 0; a < ns; ++a) {
      int b = block[static_cast<std::size_t>(in.step(s, a))];
      if (order[static_cast<std::size_t>(b)] < 0) {
        order[static_cast<std::size_t>(b)] = static_cast<int>(queue.size());
        queue.push_back(b);
      }
    }
  }
  Dfa out;
  out.ap = in.ap;
  out.num_states = static_cast<int>(queue.size());
  out.init = 0;
  out.delta.resize(static_cast<std::size_t>(out.num_states) * ns);
  out.accepting.resize(static_cast<std::size_t>(out.num_states));
  for (int i = 0; i < out.num_states; ++i) {
    int s = rep[static_cast<std::size_t>(queue[static_cast<std::size_t>(i)])];
    out.accepting[static_cast<std::size_t>(i)] = in.accepting[static_cast<std::size_t>(s)];
    for (std::size_t a = 0; a < ns; ++a)
      out.delta[static_cast<std::size_t>(i) * ns + a] =
          order[static_cast<std::size_t>(block[static_cast<std::size_t>(in.step(s, a))])];
  }
  return out;
}

}  // namespace detail

/// Translates `f` (parsed over `ap`) into a minimal DFA over 2^ap that
/// accepts exactly the non-empty traces satisfying `f`.
///
/// Each DFA state is a set of clauses of next-step obligations obtained by
/// formula progression; clauses play the role of NFA states, so the
/// exploration below is the subset construction over that NFA.
inline Dfa to_dfa(const Formula& f, const Alphabet& ap, const TranslateOptions& opts = {}) {
  using namespace detail;
  if (ap.size() > 16) throw Error("to_dfa: at most 16 propositions are supported");
  NnfStore store;
  Progressor prog(store);
  const int root = store.from(f, false);
  const std::size_t ns = std::size_t{1} << ap.size();

  std::map<Dnf, int> ids;
  std::vector<Dnf> states;
  auto intern = [&](Dnf d) {
    auto it = ids.find(d);
    if (it != ids.end()) return it->second;
    if (states.size() >= opts.max_states)
      throw Error("to_dfa: state budget of " + std::to_string(opts.max_states) + " exceeded");
    int id = static_cast<int>(states.size());
    ids.emplace(d, id);
    states.push_back(std::move(d));
    return id;
  };

  Dfa raw;
  raw.ap = ap;
  intern(Dnf{{strong_obl(root)}});
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (Symbol a = 0; a < ns; ++a) {
      Dnf next;
      for (const Clause& c : states[s]) {
        Dnf conj{{}};
        for (int o : c) {
          conj = dnf_and(conj, prog.progress(o >> 1, a));
          if (conj.empty()) break;
        }
        next.insert(next.end(), conj.begin(), conj.end());
      }
      normalize_dnf(next);
      int t = intern(std::move(next));
      raw.delta.push_back(t);
    }
  }
  raw.num_states = static_cast<int>(states.size());
  raw.init = 0;
  raw.accepting.resize(states.size());
  for (std::size_t s = 0; s < states.size(); ++s)
    raw.accepting[s] = std::any_of(states[s].begin(), states[s].end(), [](const Clause& c) {
      return std::all_of(c.begin(), c.end(), [](int o) { return (o & 1) != 0; });
    });
  return opts.minimize ? minimize(raw) : raw;
}

// ---------------------------------------------------------------------------
// JSON exchange: {"states", "init", "ap", "delta": [[state, mask, target]...], "accepting"}

inline nlohmann::json to_json(const Dfa& d) {
  nlohmann::json delta = nlohmann::json::array();
  for (int s = 0; s < d.num_states; ++s)
    for (Symbol a = 0; a < d.num_symbols(); ++a) delta.push_back({s, a, d.step(s, a)});
  nlohmann::json acc = nlohmann::json::array();
  for (int s = 0; s < d.num_states; ++s)
    if (d.is_accepting(s)) acc.push_back(s);
  return {{"states", d.num_states}, {"init", d.init}, {"ap", d.ap}, {"delta", delta}, {"accepting", acc}};
}

inline Dfa dfa_from_json(const nlohmann::json& j) {
  Dfa d;
  try {
    d.num_states = j.at("states").get<int>();
    d.init = j.at("init").get<int>();
    d.ap = j.at("ap").get<Alphabet>();
    if (d.num_states <= 0 || d.ap.size() > 20) throw Error("dfa json: bad sizes");
    const std::size_t ns = d.num_symbols();
    d.delta.assign(static_cast<std::size_t>(d.num_states) * ns, -1);
    for (const auto& e : j.at("delta")) {
      auto s = e.at(0).get<long long>();
      auto a = e.at(1).get<long long>();
      auto t = e.at(2).get<int>();
      if (s < 0 || s >= d.num_states || a < 0 || static_cast<std::size_t>(a) >= ns)
        throw Error("dfa json: transition out of range");
      d.delta[static_cast<std::size_t>(s) * ns + static_cast<std::size_t>(a)] = t;
    }
    d.accepting.assign(static_cast<std::size_t>(d.num_states), 0);
    for (const auto& a : j.at("accepting")) {
      int s = a.get<int>();
      if (s < 0 || s >= d.num_states) throw Error("dfa json: accepting state out of range");
      d.accepting[static_cast<std::size_t>(s)] = 1;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("dfa json: ") + e.what());
  }
  d.validate();
  return d;
}

}  // namespace moaif::ltlf

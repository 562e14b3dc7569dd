#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "moaif/ltlf.hpp"
#include "moaif/model.hpp"

namespace moaif {

/// Maps transition-system labels onto the DFA alphabet. The DFA may mention
/// a subset of the model's propositions; the rest are projected away.
class LabelProjection {
 public:
  LabelProjection(const Alphabet& ts_ap, const Alphabet& dfa_ap) {
    for (const auto& p : dfa_ap) {
      auto it = std::find(ts_ap.begin(), ts_ap.end(), p);
      if (it == ts_ap.end()) throw Error("product: task proposition '" + p + "' is not a model proposition");
      src_.push_back(static_cast<int>(it - ts_ap.begin()));
    }
  }

  Symbol operator()(Symbol ts_label) const {
    Symbol out = 0;
    for (std::size_t i = 0; i < src_.size(); ++i) out |= ((ts_label >> src_[i]) & 1u) << i;
    return out;
  }

 private:
  std::vector<int> src_;
};

struct ProductEdge {
  int from = 0;
  int to = 0;
  int ts_edge = 0;
};

/// Reachable part of TS x DFA from (s_K, delta(gamma_0, L(s_K))).
class ProductAutomaton {
 public:
  int start = 0;
  std::vector<int> ts_state;
  std::vector<int> dfa_state;
  std::vector<char> accepting;
  std::vector<ProductEdge> edges;

  int num_states() const { return static_cast<int>(ts_state.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  const std::vector<int>& out_edges(int p) const { return out_[static_cast<std::size_t>(p)]; }
  bool is_accepting(int p) const { return accepting[static_cast<std::size_t>(p)] != 0; }

  friend ProductAutomaton build_product(const TransitionSystem&, const ltlf::Dfa&, int);

  /// Product for a bare weighted graph; used by tests and by callers that
  /// already have an explicit graph.
  static ProductAutomaton from_graph(int num_nodes, int start, const std::vector<ProductEdge>& edges,
                                     const std::vector<char>& accepting) {
    ProductAutomaton p;
    p.start = start;
    p.ts_state.assign(static_cast<std::size_t>(num_nodes), -1);
    p.dfa_state.assign(static_cast<std::size_t>(num_nodes), -1);
    p.accepting = accepting;
    p.edges = edges;
    p.out_.assign(static_cast<std::size_t>(num_nodes), {});
    for (int e = 0; e < p.num_edges(); ++e) p.out_[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].from)].push_back(e);
    return p;
  }

 private:
  std::vector<std::vector<int>> out_;
};

inline ProductAutomaton build_product(const TransitionSystem& ts, const ltlf::Dfa& dfa, int start_state) {
  if (start_state < 0 || start_state >= ts.num_states()) throw Error("product: start state out of range");
  LabelProjection proj(ts.ap, dfa.ap);
  std::vector<Symbol> sym(static_cast<std::size_t>(ts.num_states()));
  for (int s = 0; s < ts.num_states(); ++s) sym[static_cast<std::size_t>(s)] = proj(ts.label(s));

  ProductAutomaton p;
  const std::size_t ng = static_cast<std::size_t>(dfa.num_states);
  std::vector<int> id(static_cast<std::size_t>(ts.num_states()) * ng, -1);
  auto intern = [&](int s, int g) {
    int& slot = id[static_cast<std::size_t>(s) * ng + static_cast<std::size_t>(g)];
    if (slot < 0) {
      slot = p.num_states();
      p.ts_state.push_back(s);
      p.dfa_state.push_back(g);
      p.accepting.push_back(dfa.is_accepting(g));
      p.out_.emplace_back();
    }
    return slot;
  };
  p.start = intern(start_state, dfa.step(dfa.init, sym[static_cast<std::size_t>(start_state)]));
  for (int q = 0; q < p.num_states(); ++q) {
    const int s = p.ts_state[static_cast<std::size_t>(q)];
    const int g = p.dfa_state[static_cast<std::size_t>(q)];
    for (int e : ts.out_edges(s)) {
      const int s2 = ts.edges[static_cast<std::size_t>(e)].to;
      const int q2 = intern(s2, dfa.step(g, sym[static_cast<std::size_t>(s2)]));
      p.out_[static_cast<std::size_t>(q)].push_back(p.num_edges());
      p.edges.push_back({q, q2, e});
    }
  }
  return p;
}

/// True iff the plan's trace lies in the first-satisfaction language: the
/// product run accepts after the last action and at no earlier point
/// (including the absorbed start label).
inline bool is_satisfying(const TransitionSystem& ts, const ltlf::Dfa& dfa, const Plan& plan) {
  LabelProjection proj(ts.ap, dfa.ap);
  const auto edges = plan_edges(ts, plan);
  int g = dfa.step(dfa.init, proj(ts.label(plan.start)));
  for (int e : edges) {
    if (dfa.is_accepting(g)) return false;
    g = dfa.step(g, proj(ts.label(ts.edges[static_cast<std::size_t>(e)].to)));
  }
  return dfa.is_accepting(g);
}

/// Graphviz rendering for debugging.
inline std::string to_dot(const ProductAutomaton& p, const TransitionSystem& ts) {
  std::ostringstream os;
  os << "digraph product {\n  rankdir=LR;\n";
  for (int q = 0; q < p.num_states(); ++q) {
    os << "  p" << q << " [label=\"" << ts.state_names[static_cast<std::size_t>(p.ts_state[static_cast<std::size_t>(q)])] << ", q"
       << p.dfa_state[static_cast<std::size_t>(q)] << "\"";
    if (p.is_accepting(q)) os << ", shape=doublecircle";
    if (q == p.start) os << ", style=bold";
    os << "];\n";
  }
  for (const auto& e : p.edges)
    os << "  p" << e.from << " -> p" << e.to << " [label=\""
       << ts.action_names[static_cast<std::size_t>(ts.edges[static_cast<std::size_t>(e.ts_edge)].action)] << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace moaif

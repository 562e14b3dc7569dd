#pragma once

// Oracles and scenario helpers shared by the harness tests and the acceptance binary.

#include <deque>
#include <set>
#include <vector>

#include "moaif/harness.hpp"
#include "moaif/scenarios.hpp"

namespace moaif::testing {

using CostSet = std::set<std::vector<double>>;

inline std::vector<double> as_key(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Label-correcting multi-objective search: FIFO relaxation over per-node sets
/// of non-dominated labels, no expansion out of accepting nodes. Shares no
/// code with pareto_search.
inline CostSet label_correcting_front(const ProductAutomaton& p, const std::vector<Vector>& w, Eigen::Index dims) {
  auto weakly = [](const Vector& a, const Vector& b) { return (a.array() <= b.array()).all(); };
  std::vector<std::vector<Vector>> labels(static_cast<std::size_t>(p.num_states()));
  std::deque<std::pair<int, Vector>> queue;
  labels[static_cast<std::size_t>(p.start)].push_back(Vector::Zero(dims));
  queue.emplace_back(p.start, Vector::Zero(dims));
  while (!queue.empty()) {
    auto [q, g] = queue.front();
    queue.pop_front();
    auto& here = labels[static_cast<std::size_t>(q)];
    if (std::find(here.begin(), here.end(), g) == here.end()) continue;  // pruned since queued
    if (p.is_accepting(q)) continue;
    for (int e : p.out_edges(q)) {
      const int t = p.edges[static_cast<std::size_t>(e)].to;
      const Vector h = g + w[static_cast<std::size_t>(e)];
      auto& there = labels[static_cast<std::size_t>(t)];
      bool covered = false;
      for (const auto& l : there) covered = covered || weakly(l, h);
      if (covered) continue;
      std::erase_if(there, [&](const Vector& l) { return weakly(h, l); });
      there.push_back(h);
      queue.emplace_back(t, h);
    }
  }
  std::vector<Vector> acc;
  for (int q = 0; q < p.num_states(); ++q)
    if (p.is_accepting(q))
      for (const auto& l : labels[static_cast<std::size_t>(q)]) acc.push_back(l);
  CostSet out;
  for (const auto& a : acc) {
    bool dominated = false;
    for (const auto& b : acc) dominated = dominated || ((b.array() <= a.array()).all() && (b.array() < a.array()).any());
    if (!dominated) out.insert(as_key(a));
  }
  return out;
}

struct Graph {
  ProductAutomaton p;
  std::vector<Vector> w;
};

inline Graph random_graph(Rng& rng, int max_nodes, int dims, bool integer_weights) {
  const int n = 2 + static_cast<int>(rng.index(static_cast<std::size_t>(max_nodes - 1)));
  std::vector<ProductEdge> edges;
  std::vector<Vector> w;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      // Parallel edges are allowed; they model different actions.
      const int copies = rng.uniform() < 0.35 ? 1 + static_cast<int>(rng.index(2)) : 0;
      for (int c = 0; c < copies; ++c) {
        edges.push_back({a, b, static_cast<int>(edges.size())});
        Vector v(dims);
        for (int i = 0; i < dims; ++i) v[i] = integer_weights ? static_cast<double>(rng.index(6)) : 10.0 * rng.uniform();
        w.push_back(v);
      }
    }
  std::vector<char> acc(static_cast<std::size_t>(n), 0);
  for (int i = 1; i < n; ++i) acc[static_cast<std::size_t>(i)] = rng.uniform() < 0.3;
  acc[static_cast<std::size_t>(n - 1)] = 1;
  return {ProductAutomaton::from_graph(n, 0, edges, acc), w};
}

// All simple paths from the start that stop at their first accepting node.
inline void enumerate_paths(const ProductAutomaton& p, const std::vector<Vector>& w, int node, Vector g, std::vector<char>& on_path,
               std::vector<Vector>& out) {
  if (p.is_accepting(node)) {
    out.push_back(g);
    return;
  }
  on_path[static_cast<std::size_t>(node)] = 1;
  for (int e : p.out_edges(node)) {
    const int m = p.edges[static_cast<std::size_t>(e)].to;
    if (on_path[static_cast<std::size_t>(m)]) continue;
    enumerate_paths(p, w, m, g + w[static_cast<std::size_t>(e)], on_path, out);
  }
  on_path[static_cast<std::size_t>(node)] = 0;
}

inline CostSet brute_front(const ProductAutomaton& p, const std::vector<Vector>& w, Eigen::Index dims) {
  std::vector<Vector> all;
  std::vector<char> on_path(static_cast<std::size_t>(p.num_states()), 0);
  enumerate_paths(p, w, p.start, Vector::Zero(dims), on_path, all);
  std::set<std::vector<double>> out;
  for (int i : nondominated_indices(all)) out.insert(std::vector<double>(all[i].data(), all[i].data() + dims));
  return out;
}

inline bool reaches_accepting(const ProductAutomaton& p) {
  std::vector<char> seen(static_cast<std::size_t>(p.num_states()), 0);
  std::vector<int> stack{p.start};
  seen[static_cast<std::size_t>(p.start)] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    if (p.is_accepting(q)) return true;
    for (int e : p.out_edges(q)) {
      int m = p.edges[static_cast<std::size_t>(e)].to;
      if (!seen[static_cast<std::size_t>(m)]) {
        seen[static_cast<std::size_t>(m)] = 1;
        stack.push_back(m);
      }
    }
  }
  return false;
}

inline CostSet true_cost_set(const Scenario& sc, int start) {
  const ProductAutomaton p = build_product(sc.model.ts, sc.dfa, start);
  return label_correcting_front(p, product_weights(p, sc.model.truth.mean), sc.model.ts.num_objectives);
}

/// Small fixed grid with noiseless costs, alpha = 0 and kappa0 = 0: one
/// observation of an edge pins its posterior mean to the true mean. Uniform
/// selection keeps every LCB-front plan in play.
inline ScenarioConfig deterministic_limit_config(std::uint64_t seed, int instances = 80) {
  ScenarioConfig c = fixed_scenario("small");
  c.model["default"]["std"] = {0.0, 0.0};
  for (auto& r : c.model["regions"])
    if (r.contains("std")) r["std"] = {0.0, 0.0};
  c.alpha = 0.0;
  c.kappa0 = 0.0;
  c.selector = SelectorKind::Uniform;
  c.instances = instances;
  c.seed = seed;
  return c;
}

struct DeterministicLimitReport {
  int known_checks = 0;       // instances whose front plans used only visited edges
  bool fronts_match = true;   // estimated front == true front at every such instance
  int converged_at = 0;       // first such instance (0 if never)
  bool regret_constant = true;  // zero regret from converged_at on
  bool all_reachable_visited = false;
  int all_visited_after = 0;  // instance after which every reachable edge had been executed
  bool match_after_all_visited = true;  // every later instance was known and matched
  bool all_satisfied = true;
  std::string detail;
};

inline DeterministicLimitReport check_deterministic_limit(const ScenarioConfig& cfg) {
  DeterministicLimitReport rep;
  Scenario sc(cfg);
  const auto& ts = sc.model.ts;
  // Edges reachable from the initial state.
  std::vector<int> reachable;
  {
    std::vector<char> seen(static_cast<std::size_t>(ts.num_states()), 0);
    std::vector<int> stack{ts.initial_state};
    seen[static_cast<std::size_t>(ts.initial_state)] = 1;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (int e : ts.out_edges(s)) {
        reachable.push_back(e);
        const int t = ts.edges[static_cast<std::size_t>(e)].to;
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
      }
    }
  }
  auto all_visited = [&](const CostBelief& b) {
    for (int e : reachable)
      if (b.count(e) == 0) return false;
    return true;
  };

  EpisodeRunner runner(sc);
  std::vector<double> regret;
  for (int k = 0; k < cfg.instances; ++k) {
    const CostBelief before = runner.belief();
    const EpisodeRecord r = runner.step();
    regret.push_back(r.regret);
    rep.all_satisfied = rep.all_satisfied && r.satisfied;
    bool known = true;
    for (const auto& ep : r.front)
      for (int e : ep.edges) known = known && before.count(e) > 0;
    if (rep.all_visited_after && !known) rep.match_after_all_visited = false;
    if (!rep.all_visited_after && all_visited(runner.belief())) rep.all_visited_after = r.instance;
    if (!known) continue;
    ++rep.known_checks;
    if (!rep.converged_at) rep.converged_at = r.instance;
    CostSet est_search, est_pred;
    for (const auto& ep : r.front) {
      est_search.insert(as_key(ep.search_cost));
      est_pred.insert(as_key(ep.predicted.mean));
    }
    const CostSet truth = true_cost_set(sc, r.start_state);
    if (est_search != truth || est_pred != truth) {
      rep.fronts_match = false;
      rep.detail = "front mismatch at instance " + std::to_string(r.instance);
    }
  }
  rep.match_after_all_visited = rep.match_after_all_visited && rep.fronts_match;
  rep.all_reachable_visited = rep.all_visited_after > 0;
  if (rep.converged_at)
    for (std::size_t k = static_cast<std::size_t>(rep.converged_at - 1); k < regret.size(); ++k)
      rep.regret_constant = rep.regret_constant && regret[k] == 0.0;
  return rep;
}

}  // namespace moaif::testing

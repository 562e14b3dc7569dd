#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "moaif/belief.hpp"
#include "moaif/common.hpp"
#include "moaif/product.hpp"

namespace moaif {

/// u <= v elementwise with at least one strict inequality.
inline bool dominates(const Vector& u, const Vector& v) {
  require_dim(u.size(), v.size(), "dominates");
  bool strict = false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] > v[i]) return false;
    if (u[i] < v[i]) strict = true;
  }
  return strict;
}

/// u <= v elementwise.
inline bool weakly_dominates(const Vector& u, const Vector& v) {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u[i] > v[i]) return false;
  return true;
}

inline bool lex_less(const Vector& u, const Vector& v) {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u[i] != v[i]) return u[i] < v[i];
  return false;
}

/// Pareto cost-LCB weight: max(0, E[c] - alpha sqrt(log(k_g) / n)).
/// Unvisited edges (n = 0) get the zero vector.
inline Vector lcb_weight(const CostBelief& b, int edge, double alpha, double global_steps) {
  const long n = b.count(edge);
  if (n == 0) return Vector::Zero(b.dim());
  if (!(global_steps >= 1.0)) throw Error("lcb_weight: global step count must be at least 1");
  const double bonus = alpha * std::sqrt(std::log(global_steps) / static_cast<double>(n));
  return (b.params(edge).expected_mean().array() - bonus).cwiseMax(0.0).matrix();
}

/// Per-product-edge weights from per-transition weights.
inline std::vector<Vector> product_weights(const ProductAutomaton& p, const std::vector<Vector>& ts_weights) {
  std::vector<Vector> w;
  w.reserve(static_cast<std::size_t>(p.num_edges()));
  for (const auto& e : p.edges) w.push_back(ts_weights.at(static_cast<std::size_t>(e.ts_edge)));
  return w;
}

struct FrontEntry {
  Vector cost;                     // accumulated search cost
  std::vector<int> product_edges;  // witness path from the start node
};

struct SearchStats {
  std::size_t labels_created = 0;
  std::size_t labels_expanded = 0;
};

struct SearchOptions {
  std::size_t max_labels = 20'000'000;
  bool check_antichains = false;  // verify per-node label sets at every pop
};

struct SearchResult {
  std::vector<FrontEntry> front;  // in lexicographic order of cost
  SearchStats stats;
};

namespace detail {

struct Label {
  Vector g;
  int node;
  int parent;  // label index or -1
  int via;     // product edge or -1
  bool dead = false;
};

}  // namespace detail

/// Multi-objective Dijkstra (NAMOA* with a zero heuristic) over the product.
///
/// Labels are popped in lexicographic order of g (FIFO among equal g). Each
/// node keeps open and closed label sets; a new label is discarded if any
/// label already at its node, or any solution found so far, is <= it in
/// every objective, and it evicts open labels it dominates. Accepting nodes
/// record a solution and are not expanded, so every witness is a first
/// arrival in the accepting set.
///
/// Every new label is lexicographically >= every label popped so far, so
/// with two objectives a popped label weakly dominates it iff its second
/// component is no larger; closed sets and solutions then reduce to a
/// running minimum of g_2.
inline SearchResult pareto_search(const ProductAutomaton& p, const std::vector<Vector>& weights,
                                  const SearchOptions& opts = {}) {
  using detail::Label;
  if (static_cast<int>(weights.size()) != p.num_edges()) throw DimensionError("pareto_search: one weight per product edge required");
  if (weights.empty() && !p.is_accepting(p.start)) throw InfeasibleTask("pareto_search: no accepting state is reachable");
  const Eigen::Index n = weights.empty() ? 1 : weights.front().size();
  for (const auto& w : weights) {
    require_dim(w.size(), n, "pareto_search weight");
    if ((w.array() < 0).any() || !w.allFinite()) throw Error("pareto_search: weights must be finite and non-negative");
  }

  std::vector<Label> labels;
  std::vector<std::vector<int>> open(static_cast<std::size_t>(p.num_states()));
  std::vector<std::vector<int>> closed(static_cast<std::size_t>(p.num_states()));
  std::vector<int> solutions;

  auto cmp = [&](int a, int b) {
    // priority_queue is a max-heap: return true when a should pop after b.
    const Vector& ga = labels[static_cast<std::size_t>(a)].g;
    const Vector& gb = labels[static_cast<std::size_t>(b)].g;
    if (lex_less(ga, gb)) return false;
    if (lex_less(gb, ga)) return true;
    return a > b;
  };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> heap(cmp);

  auto covered = [&](const std::vector<int>& set, const Vector& g) {
    for (int l : set)
      if (weakly_dominates(labels[static_cast<std::size_t>(l)].g, g)) return true;
    return false;
  };
  const bool biobjective = n == 2;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> closed_min2(biobjective ? static_cast<std::size_t>(p.num_states()) : 0, inf);
  double solution_min2 = inf;
  auto covered_by_solutions = [&](const Vector& g) {
    return biobjective ? solution_min2 <= g[1] : covered(solutions, g);
  };
  auto covered_by_closed = [&](int node, const Vector& g) {
    return biobjective ? closed_min2[static_cast<std::size_t>(node)] <= g[1] : covered(closed[static_cast<std::size_t>(node)], g);
  };

  SearchResult result;
  labels.push_back({Vector::Zero(n), p.start, -1, -1});
  open[static_cast<std::size_t>(p.start)].push_back(0);
  heap.push(0);

  while (!heap.empty()) {
    const int li = heap.top();
    heap.pop();
    if (labels[static_cast<std::size_t>(li)].dead) continue;
    const int node = labels[static_cast<std::size_t>(li)].node;
    auto& op = open[static_cast<std::size_t>(node)];
    op.erase(std::find(op.begin(), op.end(), li));
    const Vector g = labels[static_cast<std::size_t>(li)].g;
    if (covered_by_solutions(g)) continue;
    closed[static_cast<std::size_t>(node)].push_back(li);
    if (biobjective) closed_min2[static_cast<std::size_t>(node)] = std::min(closed_min2[static_cast<std::size_t>(node)], g[1]);
    ++result.stats.labels_expanded;

    if (opts.check_antichains) {
      std::vector<int> all = closed[static_cast<std::size_t>(node)];
      all.insert(all.end(), op.begin(), op.end());
      for (int a : all)
        for (int b : all)
          if (a != b && dominates(labels[static_cast<std::size_t>(a)].g, labels[static_cast<std::size_t>(b)].g))
            throw Error("pareto_search: label set is not an antichain");
    }

    if (p.is_accepting(node)) {
      solutions.push_back(li);
      if (biobjective) solution_min2 = std::min(solution_min2, g[1]);
      continue;
    }
    for (int e : p.out_edges(node)) {
      const int m = p.edges[static_cast<std::size_t>(e)].to;
      Vector g2 = g + weights[static_cast<std::size_t>(e)];
      if (covered_by_solutions(g2) || covered_by_closed(m, g2) ||
          covered(open[static_cast<std::size_t>(m)], g2))
        continue;
      auto& om = open[static_cast<std::size_t>(m)];
      std::erase_if(om, [&](int l) {
        if (!dominates(g2, labels[static_cast<std::size_t>(l)].g)) return false;
        labels[static_cast<std::size_t>(l)].dead = true;
        return true;
      });
      if (labels.size() >= opts.max_labels) throw Error("pareto_search: label budget exceeded");
      const int id = static_cast<int>(labels.size());
      labels.push_back({std::move(g2), m, li, e});
      om.push_back(id);
      heap.push(id);
      ++result.stats.labels_created;
    }
  }
  if (solutions.empty()) throw InfeasibleTask("pareto_search: no accepting state is reachable");

  for (int s : solutions) {
    FrontEntry f;
    f.cost = labels[static_cast<std::size_t>(s)].g;
    for (int l = s; labels[static_cast<std::size_t>(l)].parent >= 0; l = labels[static_cast<std::size_t>(l)].parent)
      f.product_edges.push_back(labels[static_cast<std::size_t>(l)].via);
    std::reverse(f.product_edges.begin(), f.product_edges.end());
    result.front.push_back(std::move(f));
  }
  return result;
}

/// Transition-system edges of a product path.
inline std::vector<int> ts_edges_of(const ProductAutomaton& p, const std::vector<int>& product_edges) {
  std::vector<int> out;
  out.reserve(product_edges.size());
  for (int e : product_edges) out.push_back(p.edges[static_cast<std::size_t>(e)].ts_edge);
  return out;
}

/// Mutually non-dominated subset of `points`, keeping the first of equal points.
inline std::vector<int> nondominated_indices(const std::vector<Vector>& points) {
  std::vector<int> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < points.size() && !drop; ++j) {
      if (i == j) continue;
      if (dominates(points[j], points[i])) drop = true;
      else if (j < i && points[j] == points[i]) drop = true;
    }
    if (!drop) keep.push_back(static_cast<int>(i));
  }
  return keep;
}

}  // namespace moaif

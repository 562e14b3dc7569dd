#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "moaif/common.hpp"
#include "moaif/ltlf.hpp"

namespace moaif {

using ltlf::Alphabet;
using ltlf::Symbol;
using ltlf::Trace;

/// One enabled (state, action) pair. Edge ids index all per-edge data
/// (true costs, beliefs, visit counts).
struct Edge {
  int from = 0;
  int action = 0;
  int to = 0;
};

/// Deterministic transition system with labelled states.
class TransitionSystem {
 public:
  int num_objectives = 0;
  std::vector<std::string> objective_names;
  Alphabet ap;
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  std::vector<Symbol> labels;  // labels[s], bit i <-> ap[i]
  std::vector<Edge> edges;
  int initial_state = 0;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_actions() const { return static_cast<int>(action_names.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  const std::vector<int>& out_edges(int s) const { return out_[static_cast<std::size_t>(s)]; }

  /// Edge id of (s, a), or -1 when a is not enabled in s.
  int find_edge(int s, int a) const {
    for (int e : out_edges(s))
      if (edges[static_cast<std::size_t>(e)].action == a) return e;
    return -1;
  }

  Symbol label(int s) const { return labels[static_cast<std::size_t>(s)]; }

  int state_id(const std::string& name) const { return lookup(state_names, name, "state"); }
  int action_id(const std::string& name) const { return lookup(action_names, name, "action"); }

  /// Builds adjacency and checks the structural invariants.
  void finalize() {
    if (num_objectives < 1) throw Error("model: at least one objective required");
    if (ap.size() > 63) throw Error("model: too many propositions");
    if (labels.size() != state_names.size()) throw Error("model: every state needs a label set");
    if (initial_state < 0 || initial_state >= num_states()) throw Error("model: initial state out of range");
    out_.assign(state_names.size(), {});
    for (int e = 0; e < num_edges(); ++e) {
      const Edge& ed = edges[static_cast<std::size_t>(e)];
      if (ed.from < 0 || ed.from >= num_states() || ed.to < 0 || ed.to >= num_states() || ed.action < 0 ||
          ed.action >= num_actions())
        throw Error("model: transition " + std::to_string(e) + " references an unknown state or action");
      if (find_edge(ed.from, ed.action) >= 0)
        throw Error("model: action '" + action_names[static_cast<std::size_t>(ed.action)] +
                    "' has two successors in state '" + state_names[static_cast<std::size_t>(ed.from)] + "'");
      out_[static_cast<std::size_t>(ed.from)].push_back(e);
    }
    for (int s = 0; s < num_states(); ++s)
      if (out_edges(s).empty()) throw Error("model: state '" + state_names[static_cast<std::size_t>(s)] + "' has no enabled action");
  }

 private:
  static int lookup(const std::vector<std::string>& names, const std::string& n, const char* what) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw Error(std::string("model: unknown ") + what + " '" + n + "'");
    return static_cast<int>(it - names.begin());
  }

  std::vector<std::vector<int>> out_;
};

/// Hidden ground-truth cost distribution N(mean[e], cov[e]) per edge.
class TrueCostModel {
 public:
  std::vector<Vector> mean;
  std::vector<Matrix> cov;

  void finalize(const TransitionSystem& ts) {
    const auto n = static_cast<Eigen::Index>(ts.num_objectives);
    if (mean.size() != ts.edges.size() || cov.size() != ts.edges.size())
      throw Error("model: cost entries do not match transitions");
    factor_.clear();
    for (std::size_t e = 0; e < mean.size(); ++e) {
      require_dim(mean[e].size(), n, "model: cost mean");
      require_dim(cov[e].rows(), n, "model: cost covariance");
      require_dim(cov[e].cols(), n, "model: cost covariance");
      if ((mean[e].array() < 0).any()) throw Error("model: cost mean of transition " + std::to_string(e) + " is negative");
      check_psd(cov[e], "model: covariance of transition " + std::to_string(e));
      factor_.push_back(psd_factor(cov[e]));
    }
  }

  /// Draw mean + F z with F F^T = cov, z standard normal filled in index order.
  /// A zero covariance returns the mean exactly.
  Vector sample(int edge, Rng& rng) const {
    const auto e = static_cast<std::size_t>(edge);
    if (cov[e].isZero(0.0)) return mean[e];
    return mean[e] + factor_[e] * rng.standard_normal(mean[e].size());
  }

 private:
  std::vector<Matrix> factor_;
};

struct Model {
  TransitionSystem ts;
  TrueCostModel truth;
};

/// A start state and a sequence of action ids.
struct Plan {
  int start = 0;
  std::vector<int> actions;
};

/// Edge ids traversed by `plan`; throws naming the first disabled step.
inline std::vector<int> plan_edges(const TransitionSystem& ts, const Plan& plan) {
  std::vector<int> out;
  out.reserve(plan.actions.size());
  int s = plan.start;
  if (s < 0 || s >= ts.num_states()) throw Error("plan: start state out of range");
  for (std::size_t k = 0; k < plan.actions.size(); ++k) {
    int e = ts.find_edge(s, plan.actions[k]);
    if (e < 0) throw Error("plan: action at step " + std::to_string(k) + " is not enabled");
    out.push_back(e);
    s = ts.edges[static_cast<std::size_t>(e)].to;
  }
  return out;
}

inline Plan plan_from_edges(const TransitionSystem& ts, int start, const std::vector<int>& edges) {
  Plan p{start, {}};
  for (int e : edges) p.actions.push_back(ts.edges[static_cast<std::size_t>(e)].action);
  return p;
}

/// States s_0 .. s_m visited by the plan (length |plan| + 1).
inline std::vector<int> induce_trajectory(const TransitionSystem& ts, const Plan& plan) {
  std::vector<int> traj{plan.start};
  for (int e : plan_edges(ts, plan)) traj.push_back(ts.edges[static_cast<std::size_t>(e)].to);
  return traj;
}

/// Labels along the trajectory; one symbol per visited state.
inline Trace trace_of(const TransitionSystem& ts, const Plan& plan) {
  Trace w;
  for (int s : induce_trajectory(ts, plan)) w.push_back(ts.label(s));
  return w;
}

inline std::string plan_string(const TransitionSystem& ts, const Plan& plan) {
  std::string out;
  for (int a : plan.actions) {
    if (!out.empty()) out += ' ';
    out += ts.action_names[static_cast<std::size_t>(a)];
  }
  return out;
}

/// Symbol over `ap` from a list of proposition names.
inline Symbol make_symbol(const Alphabet& ap, const std::vector<std::string>& props) {
  Symbol s = 0;
  for (const auto& p : props) {
    auto it = std::find(ap.begin(), ap.end(), p);
    if (it == ap.end()) throw Error("unknown proposition '" + p + "'");
    s |= Symbol{1} << (it - ap.begin());
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

inline Vector vector_from_json(const nlohmann::json& j) {
  auto v = j.get<std::vector<double>>();
  return Eigen::Map<Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != n) throw Error("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

/// Covariance from a JSON object holding either "cov" (matrix) or "std"
/// (per-objective standard deviations). Missing both means zero.
inline Matrix covariance_from_json(const nlohmann::json& j, Eigen::Index n) {
  if (j.contains("cov")) return matrix_from_json(j.at("cov"));
  if (j.contains("std")) {
    Vector sd = vector_from_json(j.at("std"));
    require_dim(sd.size(), n, "std");
    return sd.array().square().matrix().asDiagonal();
  }
  return Matrix::Zero(n, n);
}

inline nlohmann::json model_to_json(const Model& m) {
  const auto& ts = m.ts;
  nlohmann::json states = nlohmann::json::array();
  for (int s = 0; s < ts.num_states(); ++s) {
    std::vector<std::string> props;
    for (std::size_t i = 0; i < ts.ap.size(); ++i)
      if ((ts.label(s) >> i) & 1u) props.push_back(ts.ap[i]);
    states.push_back({{"name", ts.state_names[static_cast<std::size_t>(s)]}, {"labels", props}});
  }
  nlohmann::json trans = nlohmann::json::array();
  for (int e = 0; e < ts.num_edges(); ++e) {
    const Edge& ed = ts.edges[static_cast<std::size_t>(e)];
    trans.push_back({{"from", ts.state_names[static_cast<std::size_t>(ed.from)]},
                     {"action", ts.action_names[static_cast<std::size_t>(ed.action)]},
                     {"to", ts.state_names[static_cast<std::size_t>(ed.to)]},
                     {"mean", vector_to_json(m.truth.mean[static_cast<std::size_t>(e)])},
                     {"cov", matrix_to_json(m.truth.cov[static_cast<std::size_t>(e)])}});
  }
  return {{"schema", "moaif.model/1"},
          {"objectives", ts.num_objectives},
          {"objective_names", ts.objective_names},
          {"ap", ts.ap},
          {"states", states},
          {"actions", ts.action_names},
          {"transitions", trans},
          {"initial_state", ts.state_names[static_cast<std::size_t>(ts.initial_state)]}};
}

inline Model grid_from_json(const nlohmann::json& j);

/// Loads either a full model document or the grid shorthand.
inline Model model_from_json(const nlohmann::json& j) {
  try {
    const std::string schema = j.value("schema", "moaif.model/1");
    if (schema == "moaif.grid/1") return grid_from_json(j);
    if (schema != "moaif.model/1") throw Error("unsupported model schema '" + schema + "'");
    Model m;
    auto& ts = m.ts;
    ts.num_objectives = j.at("objectives").get<int>();
    ts.objective_names = j.value("objective_names", std::vector<std::string>{});
    for (int i = static_cast<int>(ts.objective_names.size()); i < ts.num_objectives; ++i)
      ts.objective_names.push_back("c" + std::to_string(i + 1));
    ts.ap = j.at("ap").get<Alphabet>();
    for (const auto& s : j.at("states")) {
      ts.state_names.push_back(s.at("name").get<std::string>());
      ts.labels.push_back(make_symbol(ts.ap, s.value("labels", std::vector<std::string>{})));
    }
    ts.action_names = j.at("actions").get<std::vector<std::string>>();
    const auto n = static_cast<Eigen::Index>(ts.num_objectives);
    for (const auto& t : j.at("transitions")) {
      ts.edges.push_back({ts.state_id(t.at("from").get<std::string>()), ts.action_id(t.at("action").get<std::string>()),
                          ts.state_id(t.at("to").get<std::string>())});
      m.truth.mean.push_back(vector_from_json(t.at("mean")));
      m.truth.cov.push_back(covariance_from_json(t, n));
    }
    ts.initial_state = ts.state_id(j.at("initial_state").get<std::string>());
    ts.finalize();
    m.truth.finalize(ts);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("model json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Grid shorthand
//
// {"schema": "moaif.grid/1", "width": W, "height": H, "objectives": N,
//  "ap": [...], "obstacles": [[x, y], ...],
//  "map": ["row0", ...], "legend": {"c": ["region", ...] or "#"},
//  "default": {"mean": [...], "cov"|"std": ...},
//  "regions": [{"name", "cells": [[x, y]...] | "rect": [x0, y0, x1, y1],
//               "labels": [...], "mean"?, "cov"|"std"?}],
//  "start": [x, y]}
//
// Cells are 4-connected (up/down/left/right; y grows downward). Moving into a
// cell costs that cell's distribution: the last listed region with a mean
// wins, else "default". A cell's labels are the union over its regions.

struct GridCell {
  bool blocked = false;
  Symbol labels = 0;
  int cost_region = -1;
};

inline Model grid_from_json(const nlohmann::json& j) {
  const int w = j.at("width").get<int>();
  const int h = j.at("height").get<int>();
  if (w < 1 || h < 1) throw Error("grid: bad dimensions");
  Model m;
  auto& ts = m.ts;
  ts.num_objectives = j.at("objectives").get<int>();
  ts.objective_names = j.value("objective_names", std::vector<std::string>{});
  for (int i = static_cast<int>(ts.objective_names.size()); i < ts.num_objectives; ++i)
    ts.objective_names.push_back("c" + std::to_string(i + 1));
  ts.ap = j.at("ap").get<Alphabet>();
  const auto n = static_cast<Eigen::Index>(ts.num_objectives);

  std::vector<GridCell> cells(static_cast<std::size_t>(w * h));
  auto at = [&](int x, int y) -> GridCell& {
    if (x < 0 || x >= w || y < 0 || y >= h)
      throw Error("grid: cell (" + std::to_string(x) + "," + std::to_string(y) + ") outside the map");
    return cells[static_cast<std::size_t>(y * w + x)];
  };
  for (const auto& o : j.value("obstacles", nlohmann::json::array())) at(o.at(0), o.at(1)).blocked = true;

  struct Region {
    std::string name;
    Symbol labels;
    bool costed;
    Vector mean;
    Matrix cov;
  };
  std::vector<Region> regions;
  std::map<std::string, int> region_index;
  const auto& jr = j.value("regions", nlohmann::json::array());
  for (const auto& r : jr) {
    Region reg{r.at("name").get<std::string>(), make_symbol(ts.ap, r.value("labels", std::vector<std::string>{})),
               r.contains("mean"), Vector::Zero(n), Matrix::Zero(n, n)};
    if (reg.costed) {
      reg.mean = vector_from_json(r.at("mean"));
      reg.cov = covariance_from_json(r, n);
    }
    region_index[reg.name] = static_cast<int>(regions.size());
    regions.push_back(std::move(reg));
  }
  auto add_region = [&](GridCell& c, int r) {
    c.labels |= regions[static_cast<std::size_t>(r)].labels;
    if (regions[static_cast<std::size_t>(r)].costed && r > c.cost_region) c.cost_region = r;
  };
  for (std::size_t r = 0; r < jr.size(); ++r) {
    const auto& spec = jr[r];
    if (spec.contains("cells"))
      for (const auto& c : spec.at("cells")) add_region(at(c.at(0), c.at(1)), static_cast<int>(r));
    if (spec.contains("rect")) {
      auto b = spec.at("rect").get<std::vector<int>>();
      if (b.size() != 4) throw Error("grid: rect needs [x0, y0, x1, y1]");
      for (int y = b[1]; y <= b[3]; ++y)
        for (int x = b[0]; x <= b[2]; ++x) add_region(at(x, y), static_cast<int>(r));
    }
  }
  if (j.contains("map")) {
    auto rows = j.at("map").get<std::vector<std::string>>();
    if (static_cast<int>(rows.size()) != h) throw Error("grid: map height mismatch");
    const auto& legend = j.value("legend", nlohmann::json::object());
    for (int y = 0; y < h; ++y) {
      if (static_cast<int>(rows[static_cast<std::size_t>(y)].size()) != w) throw Error("grid: map width mismatch in row " + std::to_string(y));
      for (int x = 0; x < w; ++x) {
        const std::string key(1, rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]);
        if (key == "#") {
          at(x, y).blocked = true;
          continue;
        }
        if (key == "." || !legend.contains(key)) continue;
        for (const auto& name : legend.at(key).get<std::vector<std::string>>()) {
          auto it = region_index.find(name);
          if (it == region_index.end()) throw Error("grid: legend names unknown region '" + name + "'");
          add_region(at(x, y), it->second);
        }
      }
    }
  }

  const auto& def = j.at("default");
  Vector def_mean = vector_from_json(def.at("mean"));
  Matrix def_cov = covariance_from_json(def, n);

  std::vector<int> id(cells.size(), -1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const GridCell& c = cells[static_cast<std::size_t>(y * w + x)];
      if (c.blocked) continue;
      id[static_cast<std::size_t>(y * w + x)] = ts.num_states();
      ts.state_names.push_back("(" + std::to_string(x) + "," + std::to_string(y) + ")");
      ts.labels.push_back(c.labels);
    }
  ts.action_names = {"up", "down", "left", "right"};
  static constexpr int dx[] = {0, 0, -1, 1};
  static constexpr int dy[] = {-1, 1, 0, 0};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int from = id[static_cast<std::size_t>(y * w + x)];
      if (from < 0) continue;
      for (int a = 0; a < 4; ++a) {
        int nx = x + dx[a], ny = y + dy[a];
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
        int to = id[static_cast<std::size_t>(ny * w + nx)];
        if (to < 0) continue;
        ts.edges.push_back({from, a, to});
        int r = cells[static_cast<std::size_t>(ny * w + nx)].cost_region;
        m.truth.mean.push_back(r < 0 ? def_mean : regions[static_cast<std::size_t>(r)].mean);
        m.truth.cov.push_back(r < 0 ? def_cov : regions[static_cast<std::size_t>(r)].cov);
      }
    }
  auto start = j.at("start").get<std::vector<int>>();
  if (start.size() != 2) throw Error("grid: start must be [x, y]");
  if (at(start[0], start[1]).blocked) throw Error("grid: start cell is blocked");
  ts.initial_state = id[static_cast<std::size_t>(start[1] * w + start[0])];
  ts.finalize();
  m.truth.finalize(ts);
  return m;
}

}  // namespace moaif

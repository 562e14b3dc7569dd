#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "moaif/belief.hpp"
#include "moaif/common.hpp"
#include "moaif/ltlf.hpp"
#include "moaif/metrics.hpp"
#include "moaif/model.hpp"
#include "moaif/mosearch.hpp"
#include "moaif/product.hpp"
#include "moaif/select.hpp"

namespace moaif {

enum class SelectorKind { Aif, Uniform, Weights, Topsis };

inline SelectorKind parse_selector(const std::string& s) {
  if (s == "aif") return SelectorKind::Aif;
  if (s == "uniform") return SelectorKind::Uniform;
  if (s == "weights") return SelectorKind::Weights;
  if (s == "topsis") return SelectorKind::Topsis;
  throw Error("unknown selector '" + s + "' (expected aif, uniform, weights or topsis)");
}

inline std::string selector_name(SelectorKind k) {
  switch (k) {
    case SelectorKind::Aif: return "aif";
    case SelectorKind::Uniform: return "uniform";
    case SelectorKind::Weights: return "weights";
    case SelectorKind::Topsis: return "topsis";
  }
  return {};
}

/// Everything needed to run the learning loop. Built from a scenario JSON
/// document (see config_from_json) or directly in code.
struct ScenarioConfig {
  std::string name = "scenario";
  nlohmann::json model;  // model document (full or grid shorthand)
  std::string formula;
  PreferenceDist pref;
  double alpha = 0.1;
  int samples = 300;
  int instances = 150;
  std::uint64_t seed = 0;
  SelectorKind selector = SelectorKind::Aif;
  Vector weights;  // empty means equal weights
  Vector lambda0;  // empty means zeros
  double kappa0 = 1.0;
  Matrix Lambda0;  // empty means prior_scale * I
  double prior_scale = 1.0;
  double nu0 = 0.0;  // <= 0 means N + 4
  std::size_t max_dfa_states = 100000;
  bool record_steps = true;

  void validate() const {
    if (instances < 1) throw Error("config: instances must be at least 1");
    if (!(alpha >= 0.0)) throw Error("config: alpha must be non-negative");
    if (samples < 1) throw Error("config: samples must be at least 1");
    if (formula.empty()) throw Error("config: missing formula");
  }
};

inline nlohmann::json config_to_json(const ScenarioConfig& c) {
  nlohmann::json j{{"schema", "moaif.scenario/1"},
                   {"name", c.name},
                   {"model", c.model},
                   {"formula", c.formula},
                   {"preference", {{"mean", vector_to_json(c.pref.mean)}, {"cov", matrix_to_json(c.pref.cov)}}},
                   {"alpha", c.alpha},
                   {"samples", c.samples},
                   {"instances", c.instances},
                   {"seed", c.seed},
                   {"selector", selector_name(c.selector)},
                   {"max_dfa_states", c.max_dfa_states}};
  if (c.weights.size()) j["weights"] = vector_to_json(c.weights);
  nlohmann::json prior{{"kappa0", c.kappa0}, {"scale", c.prior_scale}};
  if (c.lambda0.size()) prior["lambda0"] = vector_to_json(c.lambda0);
  if (c.Lambda0.size()) prior["Lambda0"] = matrix_to_json(c.Lambda0);
  if (c.nu0 > 0) prior["nu0"] = c.nu0;
  j["prior"] = prior;
  return j;
}

/// Parses a scenario document. `model` must already be an object; resolving
/// file paths and builtin names is the caller's job.
inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  try {
    ScenarioConfig c;
    if (j.value("schema", "moaif.scenario/1") != "moaif.scenario/1") throw Error("config: unsupported schema");
    c.name = j.value("name", c.name);
    c.model = j.at("model");
    if (!c.model.is_object()) throw Error("config: model must be an object");
    c.formula = j.at("formula").get<std::string>();
    const auto& p = j.at("preference");
    c.pref.mean = vector_from_json(p.at("mean"));
    if (p.value("no_variance", false)) {
      c.pref = PreferenceDist::no_variance(c.pref.mean, p.value("scale", 1.0));
    } else {
      c.pref.cov = matrix_from_json(p.at("cov"));
    }
    c.alpha = j.value("alpha", c.alpha);
    c.samples = j.value("samples", c.samples);
    c.instances = j.value("instances", c.instances);
    c.seed = j.value("seed", c.seed);
    c.selector = parse_selector(j.value("selector", std::string("aif")));
    if (j.contains("weights")) c.weights = vector_from_json(j.at("weights"));
    c.max_dfa_states = j.value("max_dfa_states", c.max_dfa_states);
    if (j.contains("prior")) {
      const auto& pr = j.at("prior");
      if (pr.contains("lambda0")) c.lambda0 = vector_from_json(pr.at("lambda0"));
      c.kappa0 = pr.value("kappa0", c.kappa0);
      if (pr.contains("Lambda0")) c.Lambda0 = matrix_from_json(pr.at("Lambda0"));
      c.prior_scale = pr.value("scale", c.prior_scale);
      c.nu0 = pr.value("nu0", c.nu0);
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

/// Config with the model, task automaton and prior elaborated.
struct Scenario {
  ScenarioConfig cfg;
  Model model;
  Alphabet task_ap;
  ltlf::Formula formula;
  ltlf::Dfa dfa;
  NiwParams prior;

  explicit Scenario(ScenarioConfig c) : cfg(std::move(c)) {
    cfg.validate();
    model = model_from_json(cfg.model);
    const auto n = static_cast<Eigen::Index>(model.ts.num_objectives);
    task_ap = model.ts.ap;
    formula = ltlf::parse(cfg.formula, task_ap);
    ltlf::TranslateOptions opts;
    opts.max_states = cfg.max_dfa_states;
    dfa = ltlf::to_dfa(formula, task_ap, opts);
    require_dim(cfg.pref.mean.size(), n, "preference mean");
    cfg.pref.validate();
    if (cfg.weights.size()) require_dim(cfg.weights.size(), n, "selector weights");
    prior.lambda = cfg.lambda0.size() ? cfg.lambda0 : Vector::Zero(n);
    require_dim(prior.lambda.size(), n, "prior lambda0");
    prior.kappa = cfg.kappa0;
    prior.Lambda = cfg.Lambda0.size() ? cfg.Lambda0 : Matrix(cfg.prior_scale * Matrix::Identity(n, n));
    prior.nu = cfg.nu0 > 0 ? cfg.nu0 : static_cast<double>(n) + 4.0;
    prior.validate();
  }
};

/// Independent semantic check that a trace is in the first-satisfaction
/// language of `f`: the whole trace satisfies f and no strict prefix does.
inline bool first_satisfies(const ltlf::Formula& f, const Trace& w) {
  if (w.empty() || !ltlf::holds(f, w)) return false;
  for (std::size_t k = 1; k < w.size(); ++k)
    if (ltlf::holds(f, std::span<const Symbol>(w.data(), k))) return false;
  return true;
}

struct EstimatedPlan {
  std::vector<int> edges;  // transition edges
  Vector search_cost;      // LCB cost used by the search
  FrontPoint predicted;    // certainty-equivalent cumulative cost
};

struct EpisodeRecord {
  int instance = 0;  // 1-based
  int start_state = 0;
  int end_state = 0;
  std::vector<EstimatedPlan> front;
  std::vector<FrontPoint> true_front;
  std::vector<std::vector<int>> true_front_edges;
  int chosen = 0;
  std::vector<EfeBreakdown> efe;  // empty unless the AIF selector ran
  Vector true_mean;               // true expected cost of the chosen plan
  std::vector<Vector> step_costs; // sampled cost per executed edge
  Vector sampled_total;
  double regret = 0.0;
  double bias = 0.0;
  double plan_ms = 0.0;
  double select_ms = 0.0;
  bool satisfied = false;
};

struct TrueFront {
  std::vector<FrontPoint> points;
  std::vector<std::vector<int>> edges;
};

/// Oracle front: the search run with true mean costs as weights.
inline TrueFront true_front(const Model& m, const ltlf::Dfa& dfa, int start) {
  const ProductAutomaton p = build_product(m.ts, dfa, start);
  const auto res = pareto_search(p, product_weights(p, m.truth.mean));
  TrueFront tf;
  const auto n = static_cast<Eigen::Index>(m.ts.num_objectives);
  for (const auto& f : res.front) {
    auto edges = ts_edges_of(p, f.product_edges);
    Matrix cov = Matrix::Zero(n, n);
    for (int e : edges) cov += m.truth.cov[static_cast<std::size_t>(e)];
    tf.points.push_back({f.cost, cov});
    tf.edges.push_back(std::move(edges));
  }
  return tf;
}

inline Vector true_plan_mean(const Model& m, const std::vector<int>& edges) {
  Vector mu = Vector::Zero(m.ts.num_objectives);
  for (int e : edges) mu += m.truth.mean[static_cast<std::size_t>(e)];
  return mu;
}

// Stream tags for derive_seed.
enum : std::uint64_t { kTagExecute = 1, kTagSelect = 2, kTagUniform = 3 };

/// The plan / select / execute / update loop.
class EpisodeRunner {
 public:
  explicit EpisodeRunner(const Scenario& sc)
      : sc_(sc), belief_(sc.model.ts.num_edges(), sc.prior), state_(sc.model.ts.initial_state) {}

  const CostBelief& belief() const { return belief_; }
  CostBelief& belief() { return belief_; }
  int state() const { return state_; }

  EpisodeRecord step() {
    const auto& ts = sc_.model.ts;
    const auto& cfg = sc_.cfg;
    const int K = ++instance_;
    EpisodeRecord rec;
    rec.instance = K;
    rec.start_state = state_;

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    const ProductAutomaton& prod = product_at(state_);
    std::vector<Vector> w;
    w.reserve(static_cast<std::size_t>(ts.num_edges()));
    for (int e = 0; e < ts.num_edges(); ++e) w.push_back(lcb_weight(belief_, e, cfg.alpha, static_cast<double>(belief_.global_steps())));
    SearchResult res;
    try {
      res = pareto_search(prod, product_weights(prod, w));
    } catch (const InfeasibleTask&) {
      throw InfeasibleTask("task cannot be completed from state '" + ts.state_names[static_cast<std::size_t>(state_)] + "'");
    }
    std::vector<Candidate> cands;
    for (const auto& f : res.front) {
      EstimatedPlan ep;
      ep.edges = ts_edges_of(prod, f.product_edges);
      ep.search_cost = f.cost;
      auto [mu, sigma] = predicted_cost(belief_, ep.edges);
      ep.predicted = {mu, sigma};
      cands.push_back({ep.edges, mu, sigma});
      rec.front.push_back(std::move(ep));
    }
    auto t1 = clock::now();

    std::vector<Vector> means;
    for (const auto& c : cands) means.push_back(c.mean);
    switch (cfg.selector) {
      case SelectorKind::Aif: {
        if (cands.size() == 1 && cands.front().edges.empty()) break;
        auto sel = select_aif(cands, belief_, cfg.pref, cfg.samples, derive_seed(cfg.seed, kTagSelect, K));
        rec.chosen = sel.index;
        rec.efe = std::move(sel.scores);
        break;
      }
      case SelectorKind::Uniform: {
        Rng rng(derive_seed(cfg.seed, kTagUniform, K));
        rec.chosen = select_uniform(cands.size(), rng);
        break;
      }
      case SelectorKind::Weights: {
        Vector wv = cfg.weights.size() ? cfg.weights : Vector::Ones(ts.num_objectives);
        rec.chosen = select_weights(means, wv);
        break;
      }
      case SelectorKind::Topsis: rec.chosen = select_topsis(means); break;
    }
    auto t2 = clock::now();
    rec.plan_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.select_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();

    // Metrics use the estimate the agent planned with.
    const TrueFront& tf = true_front_at(state_);
    rec.true_front = tf.points;
    rec.true_front_edges = tf.edges;
    const auto& chosen_edges = rec.front[static_cast<std::size_t>(rec.chosen)].edges;
    rec.true_mean = true_plan_mean(sc_.model, chosen_edges);
    std::vector<Vector> true_means;
    for (const auto& p : tf.points) true_means.push_back(p.mean);
    rec.regret = pareto_regret(true_means, rec.true_mean);
    std::vector<FrontPoint> est;
    for (const auto& ep : rec.front) est.push_back(ep.predicted);
    rec.bias = pareto_bias(tf.points, est);

    Plan plan = plan_from_edges(ts, state_, chosen_edges);
    Trace trace;
    LabelProjection proj(ts.ap, sc_.task_ap);
    for (int s : induce_trajectory(ts, plan)) trace.push_back(proj(ts.label(s)));
    rec.satisfied = first_satisfies(sc_.formula, trace);

    Rng exec(derive_seed(cfg.seed, kTagExecute, K));
    rec.sampled_total = Vector::Zero(ts.num_objectives);
    for (int e : chosen_edges) {
      Vector c = sc_.model.truth.sample(e, exec);
      belief_.observe(e, c);
      rec.sampled_total += c;
      rec.step_costs.push_back(std::move(c));
      state_ = ts.edges[static_cast<std::size_t>(e)].to;
    }
    rec.end_state = state_;
    return rec;
  }

 private:
  const ProductAutomaton& product_at(int s) {
    auto it = products_.find(s);
    if (it == products_.end()) it = products_.emplace(s, build_product(sc_.model.ts, sc_.dfa, s)).first;
    return it->second;
  }

  const TrueFront& true_front_at(int s) {
    auto it = true_fronts_.find(s);
    if (it == true_fronts_.end()) it = true_fronts_.emplace(s, true_front(sc_.model, sc_.dfa, s)).first;
    return it->second;
  }

  const Scenario& sc_;
  CostBelief belief_;
  int state_;
  int instance_ = 0;
  std::map<int, ProductAutomaton> products_;
  std::map<int, TrueFront> true_fronts_;
};

inline std::vector<EpisodeRecord> run_episode_loop(const Scenario& sc, CostBelief* final_belief = nullptr) {
  EpisodeRunner runner(sc);
  std::vector<EpisodeRecord> out;
  out.reserve(static_cast<std::size_t>(sc.cfg.instances));
  for (int k = 0; k < sc.cfg.instances; ++k) out.push_back(runner.step());
  if (final_belief) *final_belief = runner.belief();
  return out;
}

// ---------------------------------------------------------------------------
// CSV output

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string numbered(const std::string& prefix, Eigen::Index n) {
  std::string out;
  for (Eigen::Index i = 0; i < n; ++i) out += "," + prefix + std::to_string(i + 1);
  return out;
}

inline std::string cov_columns(Eigen::Index n) {
  std::string out;
  for (auto [i, j] : upper_pairs(n)) out += ",cov_" + std::to_string(i + 1) + std::to_string(j + 1);
  return out;
}

inline std::string join_vec(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += "," + fmt_num(v[i]);
  return out;
}

inline std::string join_cov(const Matrix& m) {
  std::string out;
  for (auto [i, j] : upper_pairs(m.rows())) out += "," + fmt_num(m(i, j));
  return out;
}

/// Writes episodes.csv, front_snapshots.csv, efe.csv, steps.csv and
/// timings.csv. Every file starts with a "# schema: moaif.<name>/1" line.
/// All but timings.csv are a pure function of (config, seed).
inline void write_run_csvs(const std::string& dir, const Scenario& sc, const std::vector<EpisodeRecord>& recs) {
  const auto& ts = sc.model.ts;
  const auto n = static_cast<Eigen::Index>(ts.num_objectives);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir + "/" + name);
    if (!f) throw Error("cannot write " + dir + "/" + name);
    return f;
  };

  std::ofstream ep = open("episodes.csv");
  ep << "# schema: moaif.episodes/1\n";
  ep << "instance,start_state,end_state,front_size,true_front_size,chosen_index,plan_length" << numbered("est_mean_", n)
     << numbered("true_mean_", n) << numbered("sampled_cost_", n)
     << ",efe_term1,efe_term2,efe_term3,efe_total,regret,cum_regret,bias,cum_bias,satisfied,plan\n";
  double cum_r = 0.0, cum_b = 0.0;
  for (const auto& r : recs) {
    cum_r += r.regret;
    cum_b += r.bias;
    const auto& ch = r.front[static_cast<std::size_t>(r.chosen)];
    ep << r.instance << ',' << csv_quote(ts.state_names[static_cast<std::size_t>(r.start_state)]) << ','
       << csv_quote(ts.state_names[static_cast<std::size_t>(r.end_state)]) << ',' << r.front.size() << ','
       << r.true_front.size() << ',' << r.chosen << ',' << ch.edges.size() << join_vec(ch.predicted.mean)
       << join_vec(r.true_mean) << join_vec(r.sampled_total);
    if (r.efe.empty()) {
      ep << ",,,,";
    } else {
      const auto& e = r.efe[static_cast<std::size_t>(r.chosen)];
      ep << ',' << fmt_num(e.term1) << ',' << fmt_num(e.term2) << ',' << fmt_num(e.term3) << ',' << fmt_num(e.total);
    }
    ep << ',' << fmt_num(r.regret) << ',' << fmt_num(cum_r) << ',' << fmt_num(r.bias) << ',' << fmt_num(cum_b) << ','
       << (r.satisfied ? 1 : 0) << ',' << csv_quote(plan_string(ts, plan_from_edges(ts, r.start_state, ch.edges))) << '\n';
  }

  std::ofstream fs = open("front_snapshots.csv");
  fs << "# schema: moaif.front_snapshots/1\n";
  fs << "instance,point_index,is_true_front,chosen" << numbered("mean_", n) << cov_columns(n) << ",plan\n";
  for (const auto& r : recs) {
    for (std::size_t i = 0; i < r.true_front.size(); ++i)
      fs << r.instance << ',' << i << ",1,0" << join_vec(r.true_front[i].mean) << join_cov(r.true_front[i].cov) << ','
         << csv_quote(plan_string(ts, plan_from_edges(ts, r.start_state, r.true_front_edges[i]))) << '\n';
    for (std::size_t i = 0; i < r.front.size(); ++i)
      fs << r.instance << ',' << i << ",0," << (static_cast<int>(i) == r.chosen ? 1 : 0) << join_vec(r.front[i].predicted.mean)
         << join_cov(r.front[i].predicted.cov) << ','
         << csv_quote(plan_string(ts, plan_from_edges(ts, r.start_state, r.front[i].edges))) << '\n';
  }

  std::ofstream ef = open("efe.csv");
  ef << "# schema: moaif.efe/1\n";
  ef << "instance,candidate_index,chosen,term1,term2,term3,total\n";
  for (const auto& r : recs)
    for (std::size_t i = 0; i < r.efe.size(); ++i)
      ef << r.instance << ',' << i << ',' << (static_cast<int>(i) == r.chosen ? 1 : 0) << ',' << fmt_num(r.efe[i].term1)
         << ',' << fmt_num(r.efe[i].term2) << ',' << fmt_num(r.efe[i].term3) << ',' << fmt_num(r.efe[i].total) << '\n';

  std::ofstream st = open("steps.csv");
  st << "# schema: moaif.steps/1\n";
  st << "instance,step,state,action,next_state" << numbered("cost_", n) << '\n';
  for (const auto& r : recs) {
    const auto& edges = r.front[static_cast<std::size_t>(r.chosen)].edges;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Edge& e = ts.edges[static_cast<std::size_t>(edges[k])];
      st << r.instance << ',' << k << ',' << csv_quote(ts.state_names[static_cast<std::size_t>(e.from)]) << ','
         << ts.action_names[static_cast<std::size_t>(e.action)] << ',' << csv_quote(ts.state_names[static_cast<std::size_t>(e.to)])
         << join_vec(r.step_costs[k]) << '\n';
    }
  }

  std::ofstream tm = open("timings.csv");
  tm << "# schema: moaif.timings/1\n";
  tm << "instance,plan_ms,select_ms\n";
  for (const auto& r : recs) tm << r.instance << ',' << fmt_num(r.plan_ms) << ',' << fmt_num(r.select_ms) << '\n';
}

// ---------------------------------------------------------------------------
// Benchmarks

/// One selector series in a benchmark. AIF series scale the scenario's
/// preference covariance by `pref_scale`; pref_scale <= 0 means the
/// no-variance stand-in.
struct SeriesSpec {
  std::string name;
  SelectorKind selector = SelectorKind::Aif;
  double pref_scale = 1.0;
};

/// The seven standard series: AIF at none/small/medium/large preference
/// variance, uniform, weights and TOPSIS.
inline std::vector<SeriesSpec> standard_series() {
  return {{"aif-none", SelectorKind::Aif, 0.0},       {"aif-small", SelectorKind::Aif, 0.1},
          {"aif-medium", SelectorKind::Aif, 1.0},     {"aif-large", SelectorKind::Aif, 10.0},
          {"uniform", SelectorKind::Uniform, 1.0},    {"weights", SelectorKind::Weights, 1.0},
          {"topsis", SelectorKind::Topsis, 1.0}};
}

inline ScenarioConfig apply_series(ScenarioConfig c, const SeriesSpec& s) {
  c.selector = s.selector;
  if (s.selector == SelectorKind::Aif) {
    if (s.pref_scale <= 0.0) {
      const double scale = std::max(1.0, c.pref.mean.cwiseAbs().maxCoeff());
      c.pref = PreferenceDist::no_variance(c.pref.mean, scale);
    } else {
      c.pref.cov *= s.pref_scale;
    }
  }
  return c;
}

struct TrialResult {
  std::string series;
  std::string env;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<double> regret, bias;
  bool all_satisfied = true;
  Vector final_chosen_mean;
};

struct TrialSpec {
  std::string series;
  std::string env;
  ScenarioConfig cfg;
};

/// Runs trials on `jobs` worker threads; each trial owns its scenario,
/// belief and RNG streams. Failures are reported per trial.
inline std::vector<TrialResult> run_trials(const std::vector<TrialSpec>& trials, int jobs,
                                           const std::function<void(const TrialResult&)>& on_done = {}) {
  std::vector<TrialResult> out(trials.size());
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= trials.size()) return;
        i = next++;
      }
      TrialResult r;
      r.series = trials[i].series;
      r.env = trials[i].env;
      r.seed = trials[i].cfg.seed;
      try {
        Scenario sc(trials[i].cfg);
        auto recs = run_episode_loop(sc);
        for (const auto& e : recs) {
          r.regret.push_back(e.regret);
          r.bias.push_back(e.bias);
          r.all_satisfied = r.all_satisfied && e.satisfied;
        }
        r.final_chosen_mean = recs.back().front[static_cast<std::size_t>(recs.back().chosen)].predicted.mean;
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      if (on_done) on_done(r);
      out[i] = std::move(r);
    }
  };
  const int n = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

/// Per-(env, series), per-instance mean and population standard deviation of
/// cumulative regret and bias over the successful trials.
inline void write_aggregate_csv(const std::string& path, const std::vector<TrialResult>& results) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << "# schema: moaif.aggregate/1\n";
  f << "env,series,instance,trials,cum_regret_mean,cum_regret_std,cum_bias_mean,cum_bias_std\n";
  using Key = std::pair<std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<const TrialResult*>> groups;
  for (const auto& r : results) {
    const Key k{r.env, r.series};
    if (!groups.count(k)) order.push_back(k);
    auto& g = groups[k];
    if (r.ok) g.push_back(&r);
  }
  for (const auto& key : order) {
    const auto& rs = groups[key];
    if (rs.empty()) continue;
    std::size_t len = rs.front()->regret.size();
    for (const auto* r : rs) len = std::min(len, r->regret.size());
    std::vector<std::vector<double>> cr, cb;
    for (const auto* r : rs) {
      cr.push_back(cumulative(r->regret));
      cb.push_back(cumulative(r->bias));
    }
    for (std::size_t k = 0; k < len; ++k) {
      auto stats = [&](const std::vector<std::vector<double>>& v) {
        double m = 0.0, s2 = 0.0;
        for (const auto& x : v) m += x[k];
        m /= static_cast<double>(v.size());
        for (const auto& x : v) s2 += (x[k] - m) * (x[k] - m);
        return std::make_pair(m, std::sqrt(s2 / static_cast<double>(v.size())));
      };
      auto [rm, rsd] = stats(cr);
      auto [bm, bsd] = stats(cb);
      f << csv_quote(key.first) << ',' << key.second << ',' << k + 1 << ',' << rs.size() << ',' << fmt_num(rm) << ','
        << fmt_num(rsd) << ',' << fmt_num(bm) << ',' << fmt_num(bsd) << '\n';
    }
  }
}

inline void write_trials_csv(const std::string& path, const std::vector<TrialResult>& results) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << "# schema: moaif.trials/1\n";
  f << "series,env,seed,status,instances,final_cum_regret,final_cum_bias,all_satisfied,error\n";
  for (const auto& r : results) {
    double cr = 0.0, cb = 0.0;
    for (double v : r.regret) cr += v;
    for (double v : r.bias) cb += v;
    f << r.series << ',' << csv_quote(r.env) << ',' << r.seed << ',' << (r.ok ? "ok" : "failed") << ',' << r.regret.size()
      << ',' << fmt_num(cr) << ',' << fmt_num(cb) << ',' << (r.all_satisfied ? 1 : 0) << ',' << csv_quote(r.error) << '\n';
  }
}

}  // namespace moaif

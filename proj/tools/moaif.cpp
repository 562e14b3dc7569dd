// moaif: translate LTLf tasks, plan, run the learning loop, benchmark
// selectors and produce normality / Monte Carlo diagnostics.
//
// Exit codes: 0 success, 1 runtime failure (including infeasible tasks and
// failed trials), 2 usage, config or formula errors.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#include "moaif/harness.hpp"
#include "moaif/scenarios.hpp"

namespace fs = std::filesystem;
using namespace moaif;

namespace {

constexpr int kOk = 0, kRuntime = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw UsageError("cannot read " + p.string());
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(p.string() + ": " + e.what());
  }
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  std::ofstream f(p);
  if (!f) throw Error("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

template <class T>
std::vector<T> split_numbers(const std::string& s) {
  std::vector<T> out;
  for (const auto& item : split(s)) {
    try {
      if constexpr (std::is_integral_v<T>) out.push_back(static_cast<T>(std::stoll(item)));
      else out.push_back(static_cast<T>(std::stod(item)));
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return out;
}

// Model field of a config: inline object, file path (relative to the config),
// builtin scenario name, or {"generator": "random", "width", "height", "seed"}.
nlohmann::json resolve_model(const nlohmann::json& m, const fs::path& base) {
  if (m.is_string()) {
    const fs::path p = base / m.get<std::string>();
    if (fs::exists(p)) return read_json(p);
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), m.get<std::string>()) != names.end())
      return builtin_scenario(m.get<std::string>()).model;
    throw UsageError("model '" + m.get<std::string>() + "' is neither a file nor a builtin scenario");
  }
  if (m.is_object() && m.value("generator", "") == "random")
    return generate_random_grid(m.value("width", 20), m.value("height", 20), m.value("seed", std::uint64_t{0}));
  return m;
}

struct ScenarioArgs {
  std::string config, scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> selector;
  std::optional<double> alpha;
  std::optional<int> samples, instances;
  std::string weights;

  void add_to(CLI::App* app, bool overrides) {
    app->add_option("--config", config, "Scenario JSON file");
    app->add_option("--scenario", scenario, "Builtin scenario: rover, dishwasher, fixed-small, fixed-medium, fixed-large");
    if (!overrides) return;
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--selector", selector, "aif, uniform, weights or topsis");
    app->add_option("--alpha", alpha, "LCB exploration coefficient");
    app->add_option("--samples", samples, "Monte Carlo samples n_s for the information term");
    app->add_option("--instances", instances, "Number of task instances");
    app->add_option("--weights", weights, "Comma-separated selector weights");
  }

  ScenarioConfig load() const {
    if (config.empty() == scenario.empty()) throw UsageError("give exactly one of --config or --scenario");
    ScenarioConfig c;
    try {
      if (!scenario.empty()) {
        c = builtin_scenario(scenario);
      } else {
        nlohmann::json j = read_json(config);
        const fs::path base = fs::path(config).parent_path();
        if (j.contains("builtin")) {
          // Start from a builtin scenario and patch the given fields.
          nlohmann::json merged = config_to_json(builtin_scenario(j.at("builtin").get<std::string>()));
          j.erase("builtin");
          merged.merge_patch(j);
          j = merged;
        }
        if (j.contains("model")) j["model"] = resolve_model(j["model"], base);
        c = config_from_json(j);
      }
      if (seed) c.seed = *seed;
      if (selector) c.selector = parse_selector(*selector);
      if (alpha) c.alpha = *alpha;
      if (samples) c.samples = *samples;
      if (instances) c.instances = *instances;
      if (!weights.empty()) {
        const auto w = split_numbers<double>(weights);
        c.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
      }
      c.validate();
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

fs::path output_dir(const std::string& flag, const std::string& leaf) {
  fs::path d;
  if (!flag.empty()) d = flag;
  else if (const char* env = std::getenv("MOAIF_OUT"); env && *env) d = fs::path(env) / leaf;
  else d = fs::path("moaif-out") / leaf;
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec || !fs::is_directory(d)) throw UsageError("output directory " + d.string() + " is not writable");
  return d;
}

// Scenario construction errors (bad model, formula, dimensions) are usage errors.
Scenario elaborate(const ScenarioConfig& c) {
  try {
    return Scenario(c);
  } catch (const InfeasibleTask&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------

Alphabet atoms_in(const std::string& formula) {
  static const std::set<std::string> keywords{"X", "F", "G", "U", "true", "false"};
  Alphabet ap;
  const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
  for (auto it = std::sregex_iterator(formula.begin(), formula.end(), ident); it != std::sregex_iterator(); ++it) {
    const std::string a = it->str();
    if (!keywords.count(a) && std::find(ap.begin(), ap.end(), a) == ap.end()) ap.push_back(a);
  }
  return ap;
}

int cmd_translate(const std::string& formula, const std::string& ap_flag, bool check, int check_length,
                  std::size_t max_states, const std::string& out) {
  const Alphabet ap = ap_flag.empty() ? atoms_in(formula) : split(ap_flag);
  ltlf::Formula f;
  try {
    f = ltlf::parse(formula, ap);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n' << "  " << formula << '\n' << "  " << std::string(e.position, ' ') << "^\n";
    return kUsage;
  }
  ltlf::TranslateOptions opts;
  opts.max_states = max_states;
  const ltlf::Dfa d = ltlf::to_dfa(f, ap, opts);
  const std::string text = ltlf::to_json(d).dump(2);
  if (out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream o(out);
    if (!o) throw UsageError("cannot write " + out);
    o << text << '\n';
  }
  int accepting = 0;
  for (int s = 0; s < d.num_states; ++s) accepting += d.is_accepting(s);
  std::cerr << "formula: " << ltlf::print(f) << '\n'
            << "dfa: " << d.num_states << " states (" << accepting << " accepting), "
            << d.num_states * static_cast<long>(d.num_symbols()) << " transitions over " << d.num_symbols() << " symbols\n";
  if (!check) return kOk;

  // Compare with the direct semantics on every trace up to the length bound.
  long traces = 0, mismatches = 0;
  Trace w;
  std::function<void(int)> rec = [&](int q) {
    for (Symbol a = 0; a < d.num_symbols(); ++a) {
      w.push_back(a);
      const int q2 = d.step(q, a);
      ++traces;
      if (d.is_accepting(q2) != ltlf::holds(f, w)) ++mismatches;
      if (static_cast<int>(w.size()) < check_length) rec(q2);
      w.pop_back();
    }
  };
  rec(d.init);
  std::cerr << "check: " << traces << " traces up to length " << check_length << ", " << mismatches << " mismatches\n";
  return mismatches ? kRuntime : kOk;
}

int cmd_plan(const ScenarioArgs& sa, const std::string& start_name, const std::string& belief_path) {
  const ScenarioConfig cfg = sa.load();
  const Scenario sc = elaborate(cfg);
  const auto& ts = sc.model.ts;
  int start = ts.initial_state;
  if (!start_name.empty()) {
    try {
      start = ts.state_id(start_name);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const ProductAutomaton prod = build_product(ts, sc.dfa, start);
  nlohmann::json out{{"scenario", cfg.name},
                     {"start", ts.state_names[static_cast<std::size_t>(start)]},
                     {"dfa_states", sc.dfa.num_states},
                     {"product_states", prod.num_states()}};
  const TrueFront tf = true_front(sc.model, sc.dfa, start);
  nlohmann::json front = nlohmann::json::array();
  for (std::size_t i = 0; i < tf.points.size(); ++i)
    front.push_back({{"mean", vector_to_json(tf.points[i].mean)},
                     {"plan", plan_string(ts, plan_from_edges(ts, start, tf.edges[i]))}});
  out["true_front"] = front;
  if (!belief_path.empty()) {
    CostBelief b = [&] {
      try {
        return CostBelief::from_json(read_json(belief_path));
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }();
    if (b.num_edges() != ts.num_edges()) throw UsageError("belief does not match the model's transitions");
    std::vector<Vector> w;
    for (int e = 0; e < ts.num_edges(); ++e) w.push_back(lcb_weight(b, e, cfg.alpha, static_cast<double>(b.global_steps())));
    nlohmann::json est = nlohmann::json::array();
    for (const auto& f : pareto_search(prod, product_weights(prod, w)).front) {
      const auto edges = ts_edges_of(prod, f.product_edges);
      auto [mu, cov] = predicted_cost(b, edges);
      est.push_back({{"lcb_cost", vector_to_json(f.cost)},
                     {"predicted_mean", vector_to_json(mu)},
                     {"plan", plan_string(ts, plan_from_edges(ts, start, edges))}});
    }
    out["estimated_front"] = est;
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_run(const ScenarioArgs& sa, const std::string& out_flag) {
  const ScenarioConfig cfg = sa.load();
  const Scenario sc = elaborate(cfg);
  const fs::path dir = output_dir(out_flag, "run-" + cfg.name);
  write_json(dir / "config.json", config_to_json(cfg));
  std::cerr << "scenario " << cfg.name << ": " << sc.model.ts.num_states() << " states, " << sc.model.ts.num_edges()
            << " transitions, dfa " << sc.dfa.num_states << " states, selector " << selector_name(cfg.selector) << ", seed "
            << cfg.seed << '\n';
  CostBelief final_belief(1, sc.prior);
  const auto recs = run_episode_loop(sc, &final_belief);
  write_run_csvs(dir.string(), sc, recs);
  write_json(dir / "belief.json", final_belief.to_json());
  double cr = 0.0, cb = 0.0;
  int sat = 0;
  for (const auto& r : recs) {
    cr += r.regret;
    cb += r.bias;
    sat += r.satisfied;
  }
  const auto& last = recs.back();
  std::printf("instances: %zu\nfinal cumulative regret: %s\nfinal cumulative bias: %s\nsatisfied: %d/%zu\n", recs.size(),
              fmt_num(cr).c_str(), fmt_num(cb).c_str(), sat, recs.size());
  std::printf("last chosen predicted mean: (%s)\noutput: %s\n",
              join_vec(last.front[static_cast<std::size_t>(last.chosen)].predicted.mean).substr(1).c_str(), dir.string().c_str());
  return sat == static_cast<int>(recs.size()) ? kOk : kRuntime;
}

struct BenchArgs {
  std::string suite = "fixed";
  std::string envs = "small,medium,large";
  int trials = 10;
  int size = 8;
  int instances = 50;
  int samples = 300;
  double alpha = 0.1;
  std::string series;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  if (a.suite != "fixed" && a.suite != "random" && a.suite != "all") throw UsageError("--suite must be fixed, random or all");
  if (a.trials < 1 || a.instances < 1 || a.samples < 1) throw UsageError("--trials, --instances and --samples must be positive");
  std::vector<SeriesSpec> series;
  const auto all = standard_series();
  if (a.series.empty()) {
    series = all;
  } else {
    for (const auto& name : split(a.series)) {
      auto it = std::find_if(all.begin(), all.end(), [&](const SeriesSpec& s) { return s.name == name; });
      if (it == all.end()) throw UsageError("unknown series '" + name + "'");
      series.push_back(*it);
    }
  }
  std::vector<TrialSpec> trials;
  auto add = [&](const std::string& env, ScenarioConfig base, std::uint64_t seed) {
    base.instances = a.instances;
    base.samples = a.samples;
    base.alpha = a.alpha;
    base.seed = seed;
    for (const auto& s : series) trials.push_back({s.name, env, apply_series(base, s)});
  };
  if (a.suite != "random")
    for (const auto& env : split(a.envs)) {
      ScenarioConfig base;
      try {
        base = fixed_scenario(env);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      for (int t = 0; t < a.trials; ++t) add("fixed-" + env, base, derive_seed(a.seed, static_cast<std::uint64_t>(t)));
    }
  if (a.suite != "fixed") {
    const std::string env = "random-" + std::to_string(a.size) + "x" + std::to_string(a.size);
    for (int t = 0; t < a.trials; ++t) {
      const std::uint64_t s = derive_seed(a.seed, 0x72616e64, static_cast<std::uint64_t>(t));
      add(env, random_grid_scenario(a.size, a.size, s), s);
    }
  }
  const fs::path dir = output_dir(a.out, "bench-" + a.suite);
  write_json(dir / "bench.json", {{"suite", a.suite},
                                  {"envs", a.envs},
                                  {"trials", a.trials},
                                  {"size", a.size},
                                  {"instances", a.instances},
                                  {"samples", a.samples},
                                  {"alpha", a.alpha},
                                  {"series", [&] {
                                     nlohmann::json j = nlohmann::json::array();
                                     for (const auto& s : series) j.push_back(s.name);
                                     return j;
                                   }()},
                                  {"jobs", a.jobs},
                                  {"seed", a.seed}});
  std::size_t done = 0;
  const auto results = run_trials(trials, a.jobs, [&](const TrialResult& r) {
    ++done;
    std::fprintf(stderr, "[%zu/%zu] %s %s seed %llu: %s\n", done, trials.size(), r.env.c_str(), r.series.c_str(),
                 static_cast<unsigned long long>(r.seed), r.ok ? "ok" : ("FAILED: " + r.error).c_str());
  });
  write_aggregate_csv((dir / "aggregate.csv").string(), results);
  write_trials_csv((dir / "trials.csv").string(), results);
  int failed = 0;
  for (const auto& r : results) failed += !r.ok;
  std::printf("trials: %zu (%d failed)\noutput: %s\n", results.size(), failed, dir.string().c_str());
  return failed ? kRuntime : kOk;
}

struct DiagArgs {
  int draws = 5000;
  std::string lengths = "10,20,40";
  std::string data = "10,30,100";
  int base_length = 20;
  int base_data = 10;
  std::string sweep = "10,30,100,300,1000";
  int reps = 20;
  int reference = 20000;
  std::string out;
};

// A random walk of `length` steps from the initial state, with each distinct
// edge on it observed `l` times from the true cost model.
std::pair<CostBelief, std::vector<int>> synthetic_belief(const Scenario& sc, int length, int l, std::uint64_t seed) {
  const auto& ts = sc.model.ts;
  Rng rng(seed);
  std::vector<int> walk;
  int s = ts.initial_state;
  for (int k = 0; k < length; ++k) {
    const auto& out = ts.out_edges(s);
    const int e = out[rng.index(out.size())];
    walk.push_back(e);
    s = ts.edges[static_cast<std::size_t>(e)].to;
  }
  CostBelief b(ts.num_edges(), sc.prior);
  std::set<int> distinct(walk.begin(), walk.end());
  for (int e : distinct)
    for (int k = 0; k < l; ++k) b.observe(e, sc.model.truth.sample(e, rng));
  return {b, walk};
}

int cmd_diag(const ScenarioArgs& sa, const DiagArgs& a) {
  const ScenarioConfig cfg = sa.load();
  const Scenario sc = elaborate(cfg);
  if (a.draws < 10 || a.reps < 2 || a.reference < 1) throw UsageError("--draws >= 10, --reps >= 2 and --reference >= 1 required");
  const fs::path dir = output_dir(a.out, "diag-" + cfg.name);
  write_json(dir / "config.json", config_to_json(cfg));
  const auto lengths = split_numbers<int>(a.lengths), data = split_numbers<int>(a.data);
  const auto sweep = split_numbers<int>(a.sweep);

  // Settings: plan-length sweep at fixed data, then data sweep at fixed length.
  struct Setting {
    const char* sweep;
    int m, l;
  };
  std::vector<Setting> settings;
  for (int m : lengths) settings.push_back({"length", m, a.base_data});
  for (int l : data) settings.push_back({"data", a.base_length, l});

  std::ofstream qq(dir / "qq.csv"), qs(dir / "qq_summary.csv"), mc(dir / "mc_error.csv");
  if (!qq || !qs || !mc) throw Error("cannot write diagnostics into " + dir.string());
  qq << "# schema: moaif.qq/1\nsweep,plan_length,data_per_edge,coordinate,quantile,theoretical,sample\n";
  qs << "# schema: moaif.qq_summary/1\nsweep,plan_length,data_per_edge,coordinate,max_dev,central_max_dev,jittered\n";
  mc << "# schema: moaif.mc_error/1\nsweep,plan_length,data_per_edge,samples,reps,mean,sd,mean_abs_pct_error\n";

  const auto names = [&] {
    std::vector<std::string> v;
    const auto n = sc.model.ts.num_objectives;
    for (int i = 0; i < n; ++i) v.push_back("mu_" + std::to_string(i + 1));
    for (auto [i, j] : upper_pairs(n)) v.push_back("sigma_" + std::to_string(i + 1) + std::to_string(j + 1));
    return v;
  }();
  for (std::size_t si = 0; si < settings.size(); ++si) {
    const auto& st = settings[si];
    auto [belief, plan] = synthetic_belief(sc, st.m, st.l, derive_seed(cfg.seed, 0x64696167, static_cast<std::uint64_t>(st.m),
                                                                      static_cast<std::uint64_t>(st.l)));
    Rng qrng(derive_seed(cfg.seed, 0x7171, si));
    const QqReport rep = normality_diagnostic(belief, plan, a.draws, qrng);
    const std::string prefix = std::string(st.sweep) + "," + std::to_string(st.m) + "," + std::to_string(st.l) + ",";
    const int stride = std::max(1, a.draws / 200);
    for (std::size_t c = 0; c < rep.coords.size(); ++c) {
      const auto& q = rep.coords[c];
      for (std::size_t i = 0; i < q.sample.size(); i += static_cast<std::size_t>(stride))
        qq << prefix << names[c] << ',' << i << ',' << fmt_num(q.theoretical[i]) << ',' << fmt_num(q.sample[i]) << '\n';
      qs << prefix << names[c] << ',' << fmt_num(q.max_dev) << ',' << fmt_num(q.central_max_dev) << ',' << rep.jittered << '\n';
    }
    std::fprintf(stderr, "%s m=%d l=%d: max central Q-Q deviation %.3f\n", st.sweep, st.m, st.l, rep.max_central_dev());

    Term3Estimator est(belief, plan);
    Rng ref_rng(derive_seed(cfg.seed, 0x726566, si));
    const double reference = est.estimate(a.reference, ref_rng);
    for (int ns : sweep) {
      double s = 0.0, s2 = 0.0, pct = 0.0;
      for (int r = 0; r < a.reps; ++r) {
        Rng rng(derive_seed(cfg.seed, 0x6d63, si, static_cast<std::uint64_t>(ns), static_cast<std::uint64_t>(r)));
        const double v = est.estimate(ns, rng);
        s += v;
        s2 += v * v;
        pct += 100.0 * std::abs(v - reference) / std::abs(reference);
      }
      const double mean = s / a.reps, sd = std::sqrt(std::max(0.0, (s2 - a.reps * mean * mean) / (a.reps - 1)));
      mc << prefix << ns << ',' << a.reps << ',' << fmt_num(mean) << ',' << fmt_num(sd) << ',' << fmt_num(pct / a.reps) << '\n';
    }
  }
  std::printf("output: %s\n", dir.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective LTLf planning with active-inference plan selection"};
  app.require_subcommand(1);

  auto* translate = app.add_subcommand("translate", "Translate an LTLf formula to a minimal DFA (JSON on stdout)");
  std::string formula, ap, tr_out;
  bool check = false;
  int check_length = 6;
  std::size_t max_states = 100000;
  translate->add_option("--formula", formula, "LTLf formula")->required();
  translate->add_option("--ap", ap, "Comma-separated propositions (default: atoms in order of appearance)");
  translate->add_flag("--check", check, "Validate the DFA against the direct semantics on all short traces");
  translate->add_option("--check-length", check_length, "Longest trace checked")->check(CLI::Range(1, 12));
  translate->add_option("--max-states", max_states, "Abort translation beyond this many DFA states");
  translate->add_option("--out", tr_out, "Write the DFA JSON here instead of stdout");

  auto* plan = app.add_subcommand("plan", "Print the true Pareto front (and an estimated front from a saved belief)");
  ScenarioArgs plan_args;
  std::string start, belief;
  plan_args.add_to(plan, false);
  plan->add_option("--alpha", plan_args.alpha, "LCB exploration coefficient for --belief");
  plan->add_option("--start", start, "Start state name (default: the model's initial state)");
  plan->add_option("--belief", belief, "belief.json written by 'run'");

  auto* run = app.add_subcommand("run", "Run the plan/select/execute/update loop and write CSVs");
  ScenarioArgs run_args;
  std::string run_out;
  run_args.add_to(run, true);
  run->add_option("--out", run_out, "Output directory (default: $MOAIF_OUT/run-<name> or moaif-out/run-<name>)");

  auto* bench = app.add_subcommand("bench", "Benchmark the seven selector series on fixed and random grids");
  BenchArgs ba;
  bench->add_option("--suite", ba.suite, "fixed, random or all");
  bench->add_option("--envs", ba.envs, "Fixed environments (comma-separated)");
  bench->add_option("--trials", ba.trials, "Trials per fixed environment, or number of random grids");
  bench->add_option("--size", ba.size, "Random grid width and height");
  bench->add_option("--instances", ba.instances, "Instances per trial");
  bench->add_option("--samples", ba.samples, "Monte Carlo samples n_s");
  bench->add_option("--alpha", ba.alpha, "LCB exploration coefficient");
  bench->add_option("--series", ba.series, "Subset of series (default: all seven)");
  bench->add_option("--jobs", ba.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--seed", ba.seed, "Master seed");
  bench->add_option("--out", ba.out, "Output directory");

  auto* diag = app.add_subcommand("diag", "Q-Q normality and Monte Carlo error diagnostics");
  ScenarioArgs diag_args;
  DiagArgs da;
  diag_args.add_to(diag, false);
  diag->add_option("--seed", diag_args.seed, "Master seed");
  diag->add_option("--draws", da.draws, "NIW draws per Q-Q report");
  diag->add_option("--lengths", da.lengths, "Plan lengths for the length sweep");
  diag->add_option("--data", da.data, "Observations per edge for the data sweep");
  diag->add_option("--base-length", da.base_length, "Plan length used in the data sweep");
  diag->add_option("--base-data", da.base_data, "Observations per edge used in the length sweep");
  diag->add_option("--sweep", da.sweep, "Sample counts n_s for the Monte Carlo error sweep");
  diag->add_option("--reps", da.reps, "Replicate estimates per n_s");
  diag->add_option("--reference", da.reference, "Samples for the reference estimate");
  diag->add_option("--out", da.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*translate) return cmd_translate(formula, ap, check, check_length, max_states, tr_out);
    if (*plan) return cmd_plan(plan_args, start, belief);
    if (*run) return cmd_run(run_args, run_out);
    if (*bench) return cmd_bench(ba);
    if (*diag) return cmd_diag(diag_args, da);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleTask& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

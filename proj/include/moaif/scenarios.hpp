#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "moaif/common.hpp"
#include "moaif/harness.hpp"
#include "moaif/model.hpp"

namespace moaif {

namespace detail {

inline nlohmann::json region(const std::string& name, std::vector<std::string> labels) {
  return {{"name", name}, {"labels", labels}};
}

inline nlohmann::json region(const std::string& name, std::vector<std::string> labels, std::vector<double> mean,
                             std::vector<double> sd) {
  return {{"name", name}, {"labels", labels}, {"mean", mean}, {"std", sd}};
}

}  // namespace detail

/// Mars-rover grid. Objective 1 is time (minutes), objective 2 radiation.
/// Standard deviations are 10% of each region's mean.
inline nlohmann::json rover_grid() {
  using detail::region;
  // '#' rock, 's' sun, 'S' sand (sunny), 'L' left sample (sunny), 'R' right
  // sample (shade), 'W' wash station, 'B' base, 'D' deposit inside base.
  const std::vector<std::string> map{
      "............................",
      "............R...............",
      "sssssssssssssss.............",
      "ssssssssssssssss............",
      "sssssssssssssssss...........",
      "ssssssssssssssssss..........",
      "Wssssssssssssssssss.........",
      "ssssssssssssssssssss........",
      "sssssssssssssssssssss.......",
      "sssLssssssssssssssssss......",
      "sSSSSSsssssssssssssssss.....",
      "sSSSSSssssssssssssssssss....",
      "sssssssssssssssssssssssss...",
      "............................",
      "..BBB.......................",
      "..BDB.......................",
      "..BBB.......................",
  };
  return {{"schema", "moaif.grid/1"},
          {"width", 28},
          {"height", 17},
          {"objectives", 2},
          {"objective_names", {"time", "radiation"}},
          {"ap", {"sample", "deposit", "sand", "base", "wash", "sun"}},
          {"map", map},
          {"legend",
           {{"s", {"sun"}},
            {"S", {"sun", "sand"}},
            {"L", {"sun", "sample_left"}},
            {"R", {"sample_right"}},
            {"W", {"sun", "wash"}},
            {"B", {"base"}},
            {"D", {"base", "deposit"}}}},
          {"default", {{"mean", {1.0, 0.0}}, {"std", {0.1, 0.0}}}},
          {"regions",
           {region("sun", {"sun"}, {1, 1}, {0.1, 0.1}), region("sand", {"sand"}, {3, 7}, {0.3, 0.7}),
            region("wash", {"wash"}, {11, 31}, {1.1, 3.1}), region("sample_left", {"sample"}, {6, 16}, {0.6, 1.6}),
            region("sample_right", {"sample"}, {6, 0}, {0.6, 0.0}), region("base", {"base"}),
            region("deposit", {"deposit"})}},
          {"start", {3, 15}}};
}

inline ScenarioConfig rover_scenario() {
  ScenarioConfig c;
  c.name = "rover";
  c.model = rover_grid();
  c.formula = "F(sample & F(deposit)) & G(sand -> (!base U wash))";
  c.pref.mean = Vector{{90.0, 6.0}};
  c.pref.cov = Matrix{{140.0, -2.0}, {-2.0, 70.0}};
  c.alpha = 0.1;
  c.samples = 300;
  c.instances = 150;
  c.lambda0 = Vector{{0.5, 0.0}};
  return c;
}

/// Five-state dish-handling model: one wash state (jar and pitcher in the
/// dishwasher) and four dry placements. Costs are (time s, risk).
inline nlohmann::json dishwasher_model() {
  struct Arc {
    const char* from;
    const char* action;
    const char* to;
    std::vector<double> mean;
    std::vector<double> sd;
  };
  const std::vector<Arc> arcs{
      {"Jf_Pf", "load", "Jd_Pd", {150, 0.2}, {15, 0.05}},     {"Jr_Pf", "load", "Jd_Pd", {160, 1.5}, {16, 0.3}},
      {"Jr_Pr", "load", "Jd_Pd", {140, 1.6}, {14, 0.3}},      {"Jf_Pr", "load", "Jd_Pd", {155, 0.3}, {15, 0.05}},
      {"Jd_Pd", "unload_1", "Jf_Pf", {250, 0.1}, {25, 0.02}}, {"Jd_Pd", "unload_2", "Jr_Pf", {180, 3.0}, {18, 0.5}},
      {"Jd_Pd", "unload_3", "Jr_Pr", {60, 3.2}, {6, 0.5}},    {"Jd_Pd", "unload_4", "Jf_Pr", {190, 0.2}, {19, 0.04}},
  };
  nlohmann::json trans = nlohmann::json::array();
  for (const auto& a : arcs)
    trans.push_back({{"from", a.from}, {"action", a.action}, {"to", a.to}, {"mean", a.mean}, {"std", a.sd}});
  return {{"schema", "moaif.model/1"},
          {"objectives", 2},
          {"objective_names", {"time", "risk"}},
          {"ap", {"wash", "dry"}},
          {"states",
           {{{"name", "Jf_Pf"}, {"labels", {"dry"}}},
            {{"name", "Jr_Pf"}, {"labels", {"dry"}}},
            {{"name", "Jr_Pr"}, {"labels", {"dry"}}},
            {{"name", "Jf_Pr"}, {"labels", {"dry"}}},
            {{"name", "Jd_Pd"}, {"labels", {"wash"}}}}},
          {"actions", {"load", "unload_1", "unload_2", "unload_3", "unload_4"}},
          {"transitions", trans},
          {"initial_state", "Jf_Pf"}};
}

inline ScenarioConfig dishwasher_scenario() {
  ScenarioConfig c;
  c.name = "dishwasher";
  c.model = dishwasher_model();
  c.formula = "F(wash & F(dry))";
  c.pref.mean = Vector{{350.0, 0.5}};
  c.pref.cov = Matrix{{400.0, 0.0}, {0.0, 2.0}};
  c.instances = 50;
  c.prior_scale = 100.0;
  return c;
}

/// Preference for generated environments: mean 35% of the way from the
/// front's ideal corner to its nadir corner, covariance diag(((hi-lo)/2)^2)
/// with a floor of 1.
inline PreferenceDist preference_from_box(const Vector& lo, const Vector& hi) {
  PreferenceDist p;
  p.mean = lo + 0.35 * (hi - lo);
  Vector half = (0.5 * (hi - lo)).cwiseMax(1.0);
  p.cov = half.array().square().matrix().asDiagonal();
  return p;
}

/// Fixed pick-and-drop grids with small, medium and large true fronts.
/// Objective 1 is time, objective 2 risk. Walled vertical corridors join an
/// open top row (with the pickup) to an open bottom row (with the drop); each
/// corridor is one lettered band, and the bands trade time against risk.
/// A round trip uses any pair of corridors, so K corridors spaced evenly
/// along the band scale give 2K - 1 distinct front points.
inline nlohmann::json fixed_grid(const std::string& size) {
  using detail::region;
  std::string bands;
  int depth = 0;
  if (size == "small") {
    bands = "ap";
    depth = 3;
  } else if (size == "medium") {
    bands = "afkp";
    depth = 4;
  } else if (size == "large") {
    bands = "acegikmo";
    depth = 5;
  } else {
    throw Error("unknown fixed environment '" + size + "' (expected small, medium or large)");
  }
  const int w0 = 2 * static_cast<int>(bands.size()) - 1;
  std::vector<std::string> map(static_cast<std::size_t>(depth + 2), std::string(static_cast<std::size_t>(w0), '.'));
  for (int y = 1; y <= depth; ++y)
    for (int x = 0; x < w0; ++x)
      map[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = x % 2 ? '#' : bands[static_cast<std::size_t>(x / 2)];
  map.front().front() = 'P';
  map.back().back() = 'D';
  const int h = static_cast<int>(map.size());
  const int w = static_cast<int>(map.front().size());
  nlohmann::json regions = nlohmann::json::array();
  regions.push_back(region("pickup", {"pickup"}));
  regions.push_back(region("drop", {"drop"}));
  nlohmann::json legend{{"P", {"pickup"}}, {"D", {"drop"}}};
  // Band k costs (1 + k/4, 4.75 - k/4).
  for (char ch = 'a'; ch <= 'p'; ++ch) {
    const int k = ch - 'a';
    const double t = 1.0 + 0.25 * k, r = 4.75 - 0.25 * k;
    regions.push_back(region(std::string(1, ch), {}, {t, r}, {0.1 * t, 0.1 * r}));
    legend[std::string(1, ch)] = {std::string(1, ch)};
  }
  return {{"schema", "moaif.grid/1"},
          {"width", w},
          {"height", h},
          {"objectives", 2},
          {"objective_names", {"time", "risk"}},
          {"ap", {"pickup", "drop"}},
          {"map", map},
          {"legend", legend},
          {"default", {{"mean", {1.0, 1.0}}, {"std", {0.1, 0.1}}}},
          {"regions", regions},
          {"start", {w - 1, h - 1}}};
}

inline ScenarioConfig fixed_scenario(const std::string& size) {
  ScenarioConfig c;
  c.name = "fixed-" + size;
  c.model = fixed_grid(size);
  c.formula = "F(pickup & F(drop))";
  c.instances = 300;
  // Preference is set from the true front at the start state.
  Scenario probe([&] {
    ScenarioConfig p = c;
    p.pref = {Vector::Zero(2), Matrix::Identity(2, 2)};
    return p;
  }());
  const auto tf = true_front(probe.model, probe.dfa, probe.model.ts.initial_state);
  Vector lo = tf.points.front().mean, hi = lo;
  for (const auto& p : tf.points) {
    lo = lo.cwiseMin(p.mean);
    hi = hi.cwiseMax(p.mean);
  }
  c.pref = preference_from_box(lo, hi);
  return c;
}

struct RandomGridSpec {
  double obstacle_density = 0.15;
  int num_regions = 6;
  double max_mean = 4.0;
  double sd_fraction = 0.1;
  int max_retries = 100;
};

/// Random 4-connected pick-and-drop grid in the grid shorthand. Obstacles are
/// sprinkled at random; cells outside the largest free component become
/// obstacles too, so every remaining cell can reach every other. Rectangular
/// regions get random (time, risk) means with correlated noise.
inline nlohmann::json generate_random_grid(int width, int height, std::uint64_t seed, const RandomGridSpec& spec = {}) {
  if (width < 2 || height < 2) throw Error("generate_random_grid: dimensions must be at least 2");
  Rng rng(derive_seed(seed, 0x67726964));
  for (int attempt = 0; attempt < spec.max_retries; ++attempt) {
    const int n = width * height;
    std::vector<char> blocked(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) blocked[static_cast<std::size_t>(i)] = rng.uniform() < spec.obstacle_density;
    // Largest 4-connected free component.
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int best = -1, best_size = 0, ncomp = 0;
    for (int i = 0; i < n; ++i) {
      if (blocked[static_cast<std::size_t>(i)] || comp[static_cast<std::size_t>(i)] >= 0) continue;
      std::vector<int> stack{i};
      comp[static_cast<std::size_t>(i)] = ncomp;
      int size = 0;
      while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        ++size;
        const int x = c % width, y = c / width;
        const int nb[4][2] = {{x, y - 1}, {x, y + 1}, {x - 1, y}, {x + 1, y}};
        for (auto [nx, ny] : nb) {
          if (nx < 0 || nx >= width || ny < 0 || ny >= height) continue;
          const int j = ny * width + nx;
          if (blocked[static_cast<std::size_t>(j)] || comp[static_cast<std::size_t>(j)] >= 0) continue;
          comp[static_cast<std::size_t>(j)] = ncomp;
          stack.push_back(j);
        }
      }
      if (size > best_size) {
        best_size = size;
        best = ncomp;
      }
      ++ncomp;
    }
    if (best_size < 3) continue;
    std::vector<int> free;
    nlohmann::json obstacles = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      if (comp[static_cast<std::size_t>(i)] == best) free.push_back(i);
      else obstacles.push_back({i % width, i / width});
    }
    auto pick = [&] {
      const std::size_t k = rng.index(free.size());
      const int c = free[k];
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(k));
      return c;
    };
    const int pickup = pick(), drop = pick(), start = pick();

    nlohmann::json regions = nlohmann::json::array();
    regions.push_back({{"name", "pickup"}, {"labels", {"pickup"}}, {"cells", {{pickup % width, pickup / width}}}});
    regions.push_back({{"name", "drop"}, {"labels", {"drop"}}, {"cells", {{drop % width, drop / width}}}});
    for (int r = 0; r < spec.num_regions; ++r) {
      const int x0 = static_cast<int>(rng.index(static_cast<std::size_t>(width)));
      const int y0 = static_cast<int>(rng.index(static_cast<std::size_t>(height)));
      const int x1 = std::min(width - 1, x0 + static_cast<int>(rng.index(static_cast<std::size_t>(width / 2 + 1))));
      const int y1 = std::min(height - 1, y0 + static_cast<int>(rng.index(static_cast<std::size_t>(height / 2 + 1))));
      const double t = 0.5 + rng.uniform() * (spec.max_mean - 0.5);
      const double k = rng.uniform() * spec.max_mean;
      const double st = spec.sd_fraction * t, sk = spec.sd_fraction * k + 0.01;
      const double rho = rng.uniform() - 0.5;
      regions.push_back({{"name", "r" + std::to_string(r)},
                         {"labels", nlohmann::json::array()},
                         {"rect", {x0, y0, x1, y1}},
                         {"mean", {t, k}},
                         {"cov", {{st * st, rho * st * sk}, {rho * st * sk, sk * sk}}}});
    }
    return {{"schema", "moaif.grid/1"},
            {"width", width},
            {"height", height},
            {"objectives", 2},
            {"objective_names", {"time", "risk"}},
            {"ap", {"pickup", "drop"}},
            {"obstacles", obstacles},
            {"default", {{"mean", {1.0, 1.0}}, {"std", {0.1, 0.1}}}},
            {"regions", regions},
            {"start", {start % width, start / width}},
            {"seed", seed}};
  }
  throw Error("generate_random_grid: no usable map after " + std::to_string(spec.max_retries) + " attempts");
}

/// Scenario on a generated grid; the preference is placed relative to the
/// true front at the start state (see preference_from_box).
inline ScenarioConfig random_grid_scenario(int width, int height, std::uint64_t seed, const RandomGridSpec& spec = {}) {
  ScenarioConfig c;
  c.name = "random-" + std::to_string(width) + "x" + std::to_string(height) + "-" + std::to_string(seed);
  c.model = generate_random_grid(width, height, seed, spec);
  c.formula = "F(pickup & F(drop))";
  c.instances = 100;
  c.seed = seed;
  ScenarioConfig p = c;
  p.pref = {Vector::Zero(2), Matrix::Identity(2, 2)};
  Scenario probe(p);
  const auto tf = true_front(probe.model, probe.dfa, probe.model.ts.initial_state);
  Vector lo = tf.points.front().mean, hi = lo;
  for (const auto& q : tf.points) {
    lo = lo.cwiseMin(q.mean);
    hi = hi.cwiseMax(q.mean);
  }
  c.pref = preference_from_box(lo, hi);
  return c;
}

inline std::vector<std::string> builtin_names() {
  return {"rover", "dishwasher", "fixed-small", "fixed-medium", "fixed-large"};
}

inline ScenarioConfig builtin_scenario(const std::string& name) {
  if (name == "rover") return rover_scenario();
  if (name == "dishwasher") return dishwasher_scenario();
  if (name.rfind("fixed-", 0) == 0) return fixed_scenario(name.substr(6));
  throw Error("unknown builtin scenario '" + name + "'");
}

}  // namespace moaif

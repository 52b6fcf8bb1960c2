/*
 * Copyright 2026 The gpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gpsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gpsim/errors.hpp"
#include "gpsim/goodput.hpp"

namespace gpsim {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::kFig1: return "fig1";
    case Preset::kFig2: return "fig2";
    case Preset::kFig3: return "fig3";
    case Preset::kTable1: return "table1";
    case Preset::kCustom: return "custom";
  }
  return "custom";
}

Preset preset_from_name(const std::string& name) {
  if (name == "fig1") return Preset::kFig1;
  if (name == "fig2") return Preset::kFig2;
  if (name == "fig3") return Preset::kFig3;
  if (name == "table1") return Preset::kTable1;
  if (name == "custom") return Preset::kCustom;
  throw ConfigError("unknown preset '" + name + "'");
}

void ExperimentSpec::validate() const {
  try {
    scenario.validate();
  } catch (const InvalidInputError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (n_channel_sets < 1) throw ConfigError("n_channel_sets must be >= 1");
  if (mc_samples != 0 && mc_samples < 100) {
    throw ConfigError("mc_samples must be 0 (disabled) or >= 100");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  if (degree < 2 || degree > 16) throw ConfigError("degree must be in [2, 16]");
  if (rate_grid.points < 2) throw ConfigError("rate_grid_points must be >= 2");
  if (!(rate_grid.lo_factor > 0.0) ||
      !(rate_grid.hi_factor > rate_grid.lo_factor)) {
    throw ConfigError("rate grid needs 0 < rate_grid_lo < rate_grid_hi");
  }
  for (const double a : a_grid) {
    if (a < 0.0) throw ConfigError("a_grid entries must be >= 0");
  }
  if (output_path.empty()) throw ConfigError("output_path must not be empty");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

namespace {

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("value for '" + key + "' is not an integer: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("value for '" + key + "' is not an unsigned integer: '" +
                      v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("value for '" + key + "' is not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("value for '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<double> to_double_list(const std::string& key,
                                   const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

// Returns false when the key is not a scenario field.
bool apply_scenario_key(ScenarioConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "n_antennas") cfg.n_antennas = to_int(key, value);
  else if (key == "n_users") cfg.n_users = to_int(key, value);
  else if (key == "cell_radius") cfg.cell_radius = to_double(key, value);
  else if (key == "pathloss_exponent") cfg.pathloss_exponent = to_double(key, value);
  else if (key == "shadow_std_db") cfg.shadow_std_db = to_double(key, value);
  else if (key == "noise_power") cfg.noise_power = to_double(key, value);
  else if (key == "error_power") cfg.error_power = to_double(key, value);
  else if (key == "total_power") cfg.total_power = to_double(key, value);
  else if (key == "multicell") cfg.multicell = to_bool(key, value);
  else if (key == "interferer_distance") cfg.interferer_distance = to_double(key, value);
  else if (key == "n_interferers") cfg.n_interferers = to_int(key, value);
  else if (key == "min_distance") cfg.min_distance = to_double(key, value);
  else if (key == "intercept_gain_db") cfg.intercept_gain_db = to_double(key, value);
  else if (key == "correlated_interferer_shadowing")
    cfg.correlated_interferer_shadowing = to_bool(key, value);
  else return false;
  return true;
}

}  // namespace

ExperimentSpec parse_config_stream(std::istream& is, const std::string& name) {
  ExperimentSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = name + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "preset") spec.preset = preset_from_name(value);
      else if (key == "n_channel_sets") spec.n_channel_sets = to_int(key, value);
      else if (key == "eta") spec.eta = to_double(key, value);
      else if (key == "degree") spec.degree = to_int(key, value);
      else if (key == "a_grid") spec.a_grid = to_double_list(key, value);
      else if (key == "rate_grid_points") spec.rate_grid.points = to_int(key, value);
      else if (key == "rate_grid_lo") spec.rate_grid.lo_factor = to_double(key, value);
      else if (key == "rate_grid_hi") spec.rate_grid.hi_factor = to_double(key, value);
      else if (key == "mc_samples") spec.mc_samples = to_int(key, value);
      else if (key == "output_path") spec.output_path = value;
      else if (key == "seed") spec.seed = to_u64(key, value);
      else if (!apply_scenario_key(spec.scenario, key, value)) {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return spec;
}

ExperimentSpec parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_stream(is, path);
}

void save_config(const ExperimentSpec& spec, std::ostream& os) {
  os << "preset = " << preset_name(spec.preset) << "\n";
  os << "seed = " << spec.seed << "\n";
  os << "n_channel_sets = " << spec.n_channel_sets << "\n";
  os << "eta = " << fmt_exact(spec.eta) << "\n";
  os << "degree = " << spec.degree << "\n";
  if (!spec.a_grid.empty()) {
    os << "a_grid = ";
    for (size_t i = 0; i < spec.a_grid.size(); ++i) {
      os << (i ? "," : "") << fmt_exact(spec.a_grid[i]);
    }
    os << "\n";
  }
  os << "rate_grid_points = " << spec.rate_grid.points << "\n";
  os << "rate_grid_lo = " << fmt_exact(spec.rate_grid.lo_factor) << "\n";
  os << "rate_grid_hi = " << fmt_exact(spec.rate_grid.hi_factor) << "\n";
  os << "mc_samples = " << spec.mc_samples << "\n";
  os << "output_path = " << spec.output_path << "\n";
  const ScenarioConfig& sc = spec.scenario;
  os << "n_antennas = " << sc.n_antennas << "\n";
  os << "n_users = " << sc.n_users << "\n";
  os << "cell_radius = " << fmt_exact(sc.cell_radius) << "\n";
  os << "pathloss_exponent = " << fmt_exact(sc.pathloss_exponent) << "\n";
  os << "shadow_std_db = " << fmt_exact(sc.shadow_std_db) << "\n";
  os << "noise_power = " << fmt_exact(sc.noise_power) << "\n";
  os << "error_power = " << fmt_exact(sc.error_power) << "\n";
  os << "total_power = " << fmt_exact(sc.total_power) << "\n";
  os << "multicell = " << (sc.multicell ? "true" : "false") << "\n";
  os << "interferer_distance = " << fmt_exact(sc.interferer_distance) << "\n";
  os << "n_interferers = " << sc.n_interferers << "\n";
  os << "min_distance = " << fmt_exact(sc.min_distance) << "\n";
  os << "intercept_gain_db = " << fmt_exact(sc.intercept_gain_db) << "\n";
  os << "correlated_interferer_shadowing = "
     << (sc.correlated_interferer_shadowing ? "true" : "false") << "\n";
}

namespace {

std::vector<double> effective_a_grid(const ExperimentSpec& spec) {
  std::vector<double> grid = spec.a_grid;
  if (grid.empty()) {
    if (spec.preset == Preset::kFig1 || spec.preset == Preset::kFig2 ||
        spec.preset == Preset::kCustom) {
      for (int a = 1; a <= 20; ++a) grid.push_back(a);
    } else {
      grid.push_back(0.5);
      for (int a = 1; a <= 50; ++a) grid.push_back(a);
    }
  }
  if (spec.preset == Preset::kTable1 &&
      std::find(grid.begin(), grid.end(), 1.0) == grid.end()) {
    grid.push_back(1.0);  // the a=1 column must be on the grid
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

Scenario make_scenario(const ExperimentSpec& spec, int index,
                       std::atomic<int>& redraws) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    ScenarioConfig cfg = spec.scenario;
    cfg.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(index)) +
               static_cast<std::uint64_t>(attempt);
    Scenario scen = generate(cfg);
    try {
      zf_directions(scen.h_est);
      return scen;
    } catch (const IllConditionedChannelError&) {
      ++redraws;
    }
  }
  throw IllConditionedChannelError("scenario " + std::to_string(index) +
                                   ": 10 redraws exhausted");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_meta(const ExperimentSpec& spec, const RunResult& result,
                const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  os << "# gpsim run metadata; this file re-parses as a config\n";
  os << "# files:";
  for (const auto& f : result.files) {
    os << " " << std::filesystem::path(f).filename().string();
  }
  os << "\n# redraws: " << result.redraws << "\n";
  save_config(spec, os);
}

RunResult run_fig_curve(const ExperimentSpec& spec) {
  RunResult result;
  std::atomic<int> redraws{0};
  const Scenario scen = make_scenario(spec, 0, redraws);
  const Eigen::Index k = scen.h_est.cols();

  const BeamformDesign naive = design_maxmin(scen, 0.0);
  const std::vector<double> rates =
      rate_grid(naive.gamma, spec.rate_grid.points, spec.rate_grid.lo_factor,
                spec.rate_grid.hi_factor);
  const auto theory = sweep_rate(scen, naive, rates, spec.eta, spec.degree);
  std::vector<GoodputPoint> mc;
  if (spec.mc_samples > 0) {
    mc = mc_goodput(scen, naive, rates, spec.eta, spec.mc_samples,
                    derive_seed(spec.seed, 0x6d63ULL));
  }

  const std::string tag = preset_name(spec.preset);
  const std::string curve_path = join_path(spec.output_path, tag + "_curve.csv");
  {
    std::ofstream os(curve_path, std::ios::binary);
    os << "rate,goodput_alg1";
    if (!mc.empty()) os << ",goodput_mc";
    for (Eigen::Index u = 0; u < k; ++u) os << ",outage_alg1_u" << u;
    if (!mc.empty()) {
      for (Eigen::Index u = 0; u < k; ++u) os << ",outage_mc_u" << u;
    }
    os << "\n";
    for (size_t i = 0; i < theory.size(); ++i) {
      if (!theory[i].ok) continue;
      os << fmt(theory[i].rate) << ',' << fmt(theory[i].goodput);
      if (!mc.empty()) os << ',' << fmt(mc[i].goodput);
      for (Eigen::Index u = 0; u < k; ++u) {
        os << ',' << fmt(theory[i].outage(u));
      }
      if (!mc.empty()) {
        for (Eigen::Index u = 0; u < k; ++u) os << ',' << fmt(mc[i].outage(u));
      }
      os << "\n";
    }
  }
  result.files.push_back(curve_path);

  const std::string heur_path =
      join_path(spec.output_path, tag + "_heuristic.csv");
  {
    std::ofstream os(heur_path, std::ios::binary);
    os << "a,rate,goodput_alg1,goodput_exp_a,outage_exp_a";
    for (Eigen::Index u = 0; u < k; ++u) os << ",outage_alg1_u" << u;
    os << "\n";
    for (const double a : effective_a_grid(spec)) {
      const GoodputPoint p =
          evaluate_design_goodput(scen, a, spec.eta, spec.degree);
      const double delta_a = exp_a_outage(a);
      const double gp_expa = goodput(
          p.rate, Eigen::VectorXd::Constant(k, delta_a), spec.eta);
      os << fmt(a) << ',' << fmt(p.rate) << ',' << fmt(p.goodput) << ','
         << fmt(gp_expa) << ',' << fmt(delta_a);
      for (Eigen::Index u = 0; u < k; ++u) os << ',' << fmt(p.outage(u));
      os << "\n";
    }
  }
  result.files.push_back(heur_path);
  result.redraws = redraws.load();
  return result;
}

RunResult run_fig3(const ExperimentSpec& spec) {
  RunResult result;
  std::atomic<int> redraws{0};
  const std::vector<double> grid = effective_a_grid(spec);
  const int n = spec.n_channel_sets;
  const int na = static_cast<int>(grid.size());

  Eigen::MatrixXd gp(n, na);
  Eigen::MatrixXd rate(n, na);
  parallel_for(n, spec.jobs, [&](int i) {
    const Scenario scen = make_scenario(spec, i, redraws);
    for (int ai = 0; ai < na; ++ai) {
      const GoodputPoint p = evaluate_design_goodput(
          scen, grid[static_cast<size_t>(ai)], spec.eta, spec.degree);
      gp(i, ai) = p.goodput;
      rate(i, ai) = p.rate;
    }
  });

  const std::string path =
      join_path(spec.output_path, "fig3_goodput_vs_a.csv");
  {
    std::ofstream os(path, std::ios::binary);
    os << "a,mean_goodput,mean_rate\n";
    for (int ai = 0; ai < na; ++ai) {
      os << fmt(grid[static_cast<size_t>(ai)]) << ','
         << fmt(gp.col(ai).mean()) << ',' << fmt(rate.col(ai).mean()) << "\n";
    }
  }
  result.files.push_back(path);
  result.redraws = redraws.load();
  return result;
}

RunResult run_table1(const ExperimentSpec& spec) {
  RunResult result;
  std::atomic<int> redraws{0};
  const std::vector<double> grid = effective_a_grid(spec);
  const int n = spec.n_channel_sets;
  const int na = static_cast<int>(grid.size());
  const auto a1_pos = std::find(grid.begin(), grid.end(), 1.0) - grid.begin();

  Eigen::VectorXd best_alg1(n), nested(n), estimated(n), naive_delivered(n),
      naive_claimed(n);
  Eigen::MatrixXd heuristic(n, na);

  parallel_for(n, spec.jobs, [&](int i) {
    const Scenario scen = make_scenario(spec, i, redraws);

    const BeamformDesign naive = design_maxmin(scen, 0.0);
    const double r0 = rate_from_gamma(naive.gamma);
    naive_claimed(i) = r0;
    naive_delivered(i) = goodput(
        r0, alg1_outages(scen, naive, naive.gamma, spec.degree), spec.eta);

    const std::vector<double> rates =
        rate_grid(naive.gamma, spec.rate_grid.points, spec.rate_grid.lo_factor,
                  spec.rate_grid.hi_factor);
    double best = 0.0;
    for (const GoodputPoint& p :
         sweep_rate(scen, naive, rates, spec.eta, spec.degree)) {
      if (p.ok && p.goodput > best) best = p.goodput;
    }
    best_alg1(i) = best;

    double best_a = 0.0;
    for (int ai = 0; ai < na; ++ai) {
      const GoodputPoint p = evaluate_design_goodput(
          scen, grid[static_cast<size_t>(ai)], spec.eta, spec.degree);
      heuristic(i, ai) = p.goodput;
      best_a = std::max(best_a, p.goodput);
    }
    nested(i) = best_a;

    const AChoice choice =
        choose_a(scen, spec.eta, grid.front(), grid.back(), 1e-3);
    estimated(i) =
        evaluate_design_goodput(scen, choice.a, spec.eta, spec.degree).goodput;
  });

  int best_fixed_idx = 0;
  double best_fixed_mean = -1.0;
  for (int ai = 0; ai < na; ++ai) {
    const double m = heuristic.col(ai).mean();
    if (m > best_fixed_mean) {
      best_fixed_mean = m;
      best_fixed_idx = ai;
    }
  }

  const std::string path = join_path(spec.output_path, "table1.csv");
  {
    std::ofstream os(path, std::ios::binary);
    os << "method,goodput,detail\n";
    os << "alg1_best," << fmt(best_alg1.mean()) << ",\n";
    os << "heuristic_nested," << fmt(nested.mean()) << ",\n";
    os << "best_fixed_a," << fmt(best_fixed_mean) << ",a="
       << fmt(grid[static_cast<size_t>(best_fixed_idx)]) << "\n";
    os << "a_1," << fmt(heuristic.col(a1_pos).mean()) << ",\n";
    os << "estimated_a," << fmt(estimated.mean()) << ",\n";
    os << "naive_maxmin," << fmt(naive_delivered.mean()) << ",claimed="
       << fmt(naive_claimed.mean()) << "\n";
  }
  result.files.push_back(path);
  result.redraws = redraws.load();
  return result;
}

}  // namespace

RunResult run(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  // fig1 is the single-cell curve, fig2 its multi-cell variant, fig3 the
  // multi-cell goodput-versus-a batch.
  if (spec.preset == Preset::kFig1) spec.scenario.multicell = false;
  if (spec.preset == Preset::kFig2 || spec.preset == Preset::kFig3) {
    spec.scenario.multicell = true;
  }
  spec.validate();
  std::filesystem::create_directories(spec.output_path);

  RunResult result;
  switch (spec.preset) {
    case Preset::kFig1:
    case Preset::kFig2:
    case Preset::kCustom:
      result = run_fig_curve(spec);
      break;
    case Preset::kFig3:
      result = run_fig3(spec);
      break;
    case Preset::kTable1:
      result = run_table1(spec);
      break;
  }
  const std::string meta_path =
      join_path(spec.output_path, preset_name(spec.preset) + "_meta.txt");
  write_meta(spec, result, meta_path);
  result.files.push_back(meta_path);
  return result;
}

}  // namespace gpsim

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

#ifndef GPSIM_CHANNEL_HPP
#define GPSIM_CHANNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gpsim/rng.hpp"

namespace gpsim {

struct ScenarioConfig {
  int n_antennas = 8;
  int n_users = 3;
  double cell_radius = 1000.0;        // meters
  double pathloss_exponent = 3.52;
  double shadow_std_db = 8.0;
  double noise_power = 1e-12;         // watts (-90 dBm)
  double error_power = 1e-13;         // watts (-100 dBm)
  double total_power = 40.0;          // watts
  bool multicell = false;
  double interferer_distance = 2000.0;  // meters
  int n_interferers = 6;
  std::uint64_t seed = 1;
  double min_distance = 10.0;           // meters, path-loss clamp
  double intercept_gain_db = 0.0;       // gain at the 1 m reference
  bool correlated_interferer_shadowing = false;

  void validate() const;
};

/// One drawn channel set. Columns index users. err_cov carries one Hermitian
/// PSD matrix per user; `noise` already includes the inter-cell term when
/// the config is multicell.
struct Scenario {
  ScenarioConfig config;
  Eigen::MatrixXcd h_true;    // N_t x K
  Eigen::MatrixXcd h_est;     // N_t x K, h_true = h_est + e
  Eigen::MatrixXcd err_mean;  // N_t x K
  std::vector<Eigen::MatrixXcd> err_cov;
  Eigen::VectorXd noise;      // K
  double total_power = 0.0;
  Eigen::Matrix2Xd positions;  // user coordinates relative to the BS, meters
};

/// Large-scale gain at distance d: 10^{(intercept+shadow_db)/10} *
/// max(d, d_min)^{-alpha}, distances in meters.
double pathloss_gain(const ScenarioConfig& config, double distance_m,
                     double shadow_db);

/// Draws user placement, shadowing, Rayleigh fading, and estimation error;
/// deterministic given config.seed.
Scenario generate(const ScenarioConfig& config);

/// Noise power augmented with interference from the surrounding base
/// stations (one shadowing draw per interferer). Returns noise_power
/// unchanged for single-cell configs.
double intercell_noise(const ScenarioConfig& config,
                       const Eigen::Vector2d& position, Rng& rng);

/// Same, with caller-supplied per-interferer shadowing (dB); used for
/// correlated-shadowing runs.
double intercell_noise(const ScenarioConfig& config,
                       const Eigen::Vector2d& position,
                       const Eigen::VectorXd& shadows_db);

/// i.i.d. draws from CN(mu_k, C_k); column per draw, deterministic per seed.
Eigen::MatrixXcd sample_errors(const Scenario& scenario, Eigen::Index user,
                               int count, std::uint64_t seed);

/// Flat per-user record dump (positions, noise, channel entries) for
/// reproducibility audits.
void write_flat(const Scenario& scenario, std::ostream& os);

}  // namespace gpsim

#endif  // GPSIM_CHANNEL_HPP

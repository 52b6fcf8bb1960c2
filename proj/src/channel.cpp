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

#include "gpsim/channel.hpp"

#include <cmath>
#include <ostream>

#include "gpsim/errors.hpp"

namespace gpsim {

void ScenarioConfig::validate() const {
  if (n_users < 1 || n_antennas < n_users) {
    throw InvalidInputError("ScenarioConfig: need N_t >= K >= 1");
  }
  if (!(noise_power > 0.0) || !(error_power > 0.0) || !(total_power > 0.0)) {
    throw InvalidInputError("ScenarioConfig: powers must be > 0");
  }
  if (!(cell_radius > 0.0)) {
    throw InvalidInputError("ScenarioConfig: cell_radius must be > 0");
  }
  if (!(min_distance > 0.0) || !(interferer_distance > 0.0)) {
    throw InvalidInputError("ScenarioConfig: distances must be > 0");
  }
  if (n_interferers < 0 || shadow_std_db < 0.0 || pathloss_exponent < 0.0) {
    throw InvalidInputError("ScenarioConfig: negative parameter");
  }
}

double pathloss_gain(const ScenarioConfig& config, double distance_m,
                     double shadow_db) {
  const double d = std::max(distance_m, config.min_distance);
  return std::pow(10.0, (config.intercept_gain_db + shadow_db) / 10.0) *
         std::pow(d, -config.pathloss_exponent);
}

double intercell_noise(const ScenarioConfig& config,
                       const Eigen::Vector2d& position,
                       const Eigen::VectorXd& shadows_db) {
  if (!config.multicell) return config.noise_power;
  if (shadows_db.size() != config.n_interferers) {
    throw InvalidInputError("intercell_noise: one shadow draw per interferer");
  }
  double noise = config.noise_power;
  for (int j = 0; j < config.n_interferers; ++j) {
    const double angle = 2.0 * M_PI * j / config.n_interferers;
    const Eigen::Vector2d center(config.interferer_distance * std::cos(angle),
                                 config.interferer_distance * std::sin(angle));
    const double dist = (position - center).norm();
    // Small-scale fading of the interference is folded into its mean power.
    noise += config.total_power * pathloss_gain(config, dist, shadows_db(j));
  }
  return noise;
}

double intercell_noise(const ScenarioConfig& config,
                       const Eigen::Vector2d& position, Rng& rng) {
  if (!config.multicell) return config.noise_power;
  Eigen::VectorXd shadows(config.n_interferers);
  for (int j = 0; j < config.n_interferers; ++j) {
    shadows(j) = config.shadow_std_db * rng.normal();
  }
  return intercell_noise(config, position, shadows);
}

Scenario generate(const ScenarioConfig& config) {
  config.validate();
  const int nt = config.n_antennas;
  const int k = config.n_users;

  Scenario scen;
  scen.config = config;
  scen.h_true.resize(nt, k);
  scen.h_est.resize(nt, k);
  scen.err_mean = Eigen::MatrixXcd::Zero(nt, k);
  scen.err_cov.assign(static_cast<size_t>(k),
                      config.error_power *
                          Eigen::MatrixXcd::Identity(nt, nt));
  scen.noise = Eigen::VectorXd::Constant(k, config.noise_power);
  scen.total_power = config.total_power;
  scen.positions.resize(2, k);

  Rng rng(config.seed);
  const double err_std = std::sqrt(config.error_power);
  for (int u = 0; u < k; ++u) {
    // Uniform over the disc by area.
    const double r = config.cell_radius * std::sqrt(rng.uniform());
    const double angle = 2.0 * M_PI * rng.uniform();
    scen.positions.col(u) = Eigen::Vector2d(r * std::cos(angle),
                                            r * std::sin(angle));
    const double shadow_db = config.shadow_std_db * rng.normal();
    const double gain = pathloss_gain(config, r, shadow_db);
    const Eigen::VectorXcd fading = rng.cnormal_vector(nt);
    scen.h_true.col(u) = std::sqrt(gain) * fading;
    const Eigen::VectorXcd err = err_std * rng.cnormal_vector(nt);
    scen.h_est.col(u) = scen.h_true.col(u) - err;  // h_true = h_est + e
  }

  if (config.multicell) {
    if (config.correlated_interferer_shadowing) {
      Eigen::VectorXd shared(config.n_interferers);
      for (int j = 0; j < config.n_interferers; ++j) {
        shared(j) = config.shadow_std_db * rng.normal();
      }
      for (int u = 0; u < k; ++u) {
        scen.noise(u) = intercell_noise(config, scen.positions.col(u), shared);
      }
    } else {
      for (int u = 0; u < k; ++u) {
        scen.noise(u) = intercell_noise(config, scen.positions.col(u), rng);
      }
    }
  }
  return scen;
}

Eigen::MatrixXcd sample_errors(const Scenario& scenario, Eigen::Index user,
                               int count, std::uint64_t seed) {
  if (user < 0 || user >= scenario.h_est.cols()) {
    throw InvalidInputError("sample_errors: user index");
  }
  if (count < 1) throw InvalidInputError("sample_errors: count must be >= 1");
  const Eigen::Index nt = scenario.h_est.rows();
  const Eigen::MatrixXcd& cov = scenario.err_cov[static_cast<size_t>(user)];
  const Eigen::VectorXcd& mu = scenario.err_mean.col(user);

  // White covariance is the common case; otherwise color through C^{1/2}.
  const double diag0 = std::real(cov(0, 0));
  const bool white =
      (cov - diag0 * Eigen::MatrixXcd::Identity(nt, nt)).cwiseAbs().maxCoeff() <=
      1e-14 * std::abs(diag0);
  Eigen::MatrixXcd half;
  if (!white) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov);
    half = es.eigenvectors() *
           es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           es.eigenvectors().adjoint();
  }

  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(user)));
  Eigen::MatrixXcd draws(nt, count);
  const double scale = std::sqrt(std::max(diag0, 0.0));
  for (int c = 0; c < count; ++c) {
    const Eigen::VectorXcd z = rng.cnormal_vector(nt);
    draws.col(c) = white ? (mu + scale * z).eval() : (mu + half * z).eval();
  }
  return draws;
}

void write_flat(const Scenario& scenario, std::ostream& os) {
  const Eigen::Index nt = scenario.h_true.rows();
  os << "user,pos_x,pos_y,noise,error_power";
  for (Eigen::Index i = 0; i < nt; ++i) {
    os << ",htrue_re_" << i << ",htrue_im_" << i;
  }
  for (Eigen::Index i = 0; i < nt; ++i) {
    os << ",hest_re_" << i << ",hest_im_" << i;
  }
  os << "\n";
  os.precision(17);
  for (Eigen::Index u = 0; u < scenario.h_true.cols(); ++u) {
    os << u << ',' << scenario.positions(0, u) << ','
       << scenario.positions(1, u) << ',' << scenario.noise(u) << ','
       << std::real(scenario.err_cov[static_cast<size_t>(u)](0, 0));
    for (Eigen::Index i = 0; i < nt; ++i) {
      os << ',' << scenario.h_true(i, u).real() << ','
         << scenario.h_true(i, u).imag();
    }
    for (Eigen::Index i = 0; i < nt; ++i) {
      os << ',' << scenario.h_est(i, u).real() << ','
         << scenario.h_est(i, u).imag();
    }
    os << "\n";
  }
}

}  // namespace gpsim

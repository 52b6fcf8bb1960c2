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

#ifndef GPSIM_GOODPUT_HPP
#define GPSIM_GOODPUT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gpsim/beamform.hpp"
#include "gpsim/channel.hpp"

namespace gpsim {

/// One evaluated operating point: transmission rate, per-user outage, and
/// the per-user goodput (1/K) sum_k [(1-delta_k) R + eta delta_k R].
struct GoodputPoint {
  double rate = 0.0;        // bits/s/Hz
  Eigen::VectorXd outage;   // delta_k
  double goodput = 0.0;     // bits/s/Hz per user
  std::string method;       // alg1 | mc | exp_a | interference_only
  bool ok = true;
  std::string error;
};

/// Per-user goodput at rate R with recovery factor eta in [0, 1].
double goodput(double rate, const Eigen::VectorXd& delta, double eta);

double rate_from_gamma(double gamma);   // log2(1 + gamma)
double gamma_from_rate(double rate);    // 2^R - 1

/// Geometric SINR grid [lo_factor, hi_factor] * gamma_ref mapped to rates.
std::vector<double> rate_grid(double gamma_ref, int points, double lo_factor,
                              double hi_factor);

/// Per-user outage at the common target via the indefinite-form pipeline.
Eigen::VectorXd alg1_outages(const Scenario& scenario,
                             const BeamformDesign& design, double gamma,
                             int degree);

/// Fixed design, swept transmission rate; the theoretical goodput curve.
/// Failed points are marked, not fatal.
std::vector<GoodputPoint> sweep_rate(const Scenario& scenario,
                                     const BeamformDesign& design,
                                     const std::vector<double>& rates,
                                     double eta, int degree);

/// Monte Carlo counterpart: draws error vectors per (user, rate) stream and
/// counts realized-SINR shortfalls. Deterministic per seed.
std::vector<GoodputPoint> mc_goodput(const Scenario& scenario,
                                     const BeamformDesign& design,
                                     const std::vector<double>& rates,
                                     double eta, int n_samples,
                                     std::uint64_t seed);

/// Outage estimate exp(-a) of the scaled-interference heuristic.
double exp_a_outage(double a);

/// Outage from the interference term alone: fits the PDF of
/// e^H (sum_{j!=k} beta_j u_j u_j^H) e and thresholds it against
/// beta_k |h_ek^H u_k|^2 / gamma - sigma_k^2.
double interference_only_outage(const Scenario& scenario,
                                const BeamformDesign& design,
                                Eigen::Index user, double gamma, int degree);

/// ZF directions plus the robust max-min loading at scale factor a.
BeamformDesign design_maxmin(const Scenario& scenario, double a,
                             double tol = 1e-8);

/// End-to-end heuristic point: design at `a`, rate log2(1+gamma*), outage
/// via the full approximation.
GoodputPoint evaluate_design_goodput(const Scenario& scenario, double a,
                                     double eta, int degree);

struct AChoice {
  double a = 0.0;
  double gamma = 0.0;
  double goodput = 0.0;  // under the exp(-a) outage estimate
  bool at_boundary = false;
};

/// Unimodal search over the scale factor with outage estimated as exp(-a).
AChoice choose_a(const Scenario& scenario, double eta, double a_lo,
                 double a_hi, double tol);

/// Golden-section maximization of a unimodal function on [lo, hi].
template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gpsim

#endif  // GPSIM_GOODPUT_HPP

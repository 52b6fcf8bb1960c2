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

#ifndef GPSIM_BEAMFORM_HPP
#define GPSIM_BEAMFORM_HPP

#include <Eigen/Dense>

namespace gpsim {

/// Zero-forcing directions with a max-min power loading. `a` scales the
/// expected interference-leakage power in the robust SINR constraint.
struct BeamformDesign {
  Eigen::MatrixXcd directions;  // N_t x K, unit-norm columns u_k
  Eigen::VectorXd powers;       // beta_k = ||w_k||^2
  double gamma = 0.0;           // common SINR target (linear)
  double a = 0.0;               // interference scale factor

  Eigen::Index n_users() const { return directions.cols(); }
};

/// Checks unit norms, nonnegative powers, the power budget, and (when the
/// estimates are given) the zero-forcing property |h_ej^H u_k| <= 1e-8 |h_ej|.
void validate_design(const BeamformDesign& design, double p_total = -1.0,
                     const Eigen::MatrixXcd* h_est = nullptr);

/// Normalized columns of the right pseudo-inverse of the stacked estimates;
/// throws IllConditionedChannelError when the estimate matrix has condition
/// number above 1e8.
Eigen::MatrixXcd zf_directions(const Eigen::MatrixXcd& h_est);

/// |h_ek^H u_k|^2 per user.
Eigen::VectorXd signal_gains(const Eigen::MatrixXcd& h_est,
                             const Eigen::MatrixXcd& directions);

/// Expected interference leakage for `user`:
///   mu^H (sum_{j!=k} beta_j u_j u_j^H) mu + sum_{j!=k} beta_j u_j^H C u_j.
/// For white zero-mean error this is sigma_e^2 * sum_{j!=k} beta_j.
double effective_noise(const BeamformDesign& design, Eigen::Index user,
                       const Eigen::VectorXcd& err_mean,
                       const Eigen::MatrixXcd& err_cov);

struct PowerCondition {
  bool feasible = false;
  double total_power = 0.0;  // sum_k gamma (sigma_k^2 + P_t a s_ek^2) /
                             //       (g_k + a s_ek^2 gamma)
};

/// Feasibility of the common target via the closed-form power condition.
PowerCondition maxmin_power_condition(double gamma,
                                      const Eigen::VectorXd& gains,
                                      const Eigen::VectorXd& noise,
                                      const Eigen::VectorXd& err_power,
                                      double a, double p_total);

/// Sherman-Morrison closed form for 1^T A^{-1} sigma^2 with
/// A = B + s 1^T, B = diag(g_k/gamma + a s_ek^2), s_k = -a s_ek^2.
double sherman_morrison_total(double gamma, const Eigen::VectorXd& gains,
                              const Eigen::VectorXd& noise,
                              const Eigen::VectorXd& err_power, double a);

/// Solves A beta = sigma^2 at equality. Throws InfeasibleTargetError when the
/// target sits beyond the spectral feasibility limit (some beta_k <= 0).
Eigen::VectorXd solve_power_loading(double gamma, const Eigen::VectorXd& gains,
                                    const Eigen::VectorXd& noise,
                                    const Eigen::VectorXd& err_power, double a,
                                    double p_total);

struct MaxMinSolution {
  double gamma = 0.0;
  Eigen::VectorXd powers;
};

/// Largest feasible common SINR target by bisection, with the power loading
/// at that target. The returned loading uses the full budget.
MaxMinSolution maxmin_gamma(const Eigen::VectorXd& gains,
                            const Eigen::VectorXd& noise,
                            const Eigen::VectorXd& err_power, double a,
                            double p_total, double tol = 1e-8);

}  // namespace gpsim

#endif  // GPSIM_BEAMFORM_HPP

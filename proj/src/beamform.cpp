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

#include "gpsim/beamform.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gpsim/errors.hpp"

namespace gpsim {

namespace {

void check_solver_inputs(double gamma, const Eigen::VectorXd& gains,
                         const Eigen::VectorXd& noise,
                         const Eigen::VectorXd& err_power) {
  const Eigen::Index k = gains.size();
  if (noise.size() != k || err_power.size() != k || k == 0) {
    throw InvalidInputError("power loading: per-user vectors must agree");
  }
  if (!(gamma > 0.0)) {
    throw InvalidInputError("power loading: gamma must be > 0");
  }
  if (gains.minCoeff() <= 0.0 || noise.minCoeff() <= 0.0 ||
      err_power.minCoeff() < 0.0) {
    throw InvalidInputError(
        "power loading: gains/noise must be positive, error power >= 0");
  }
}

}  // namespace

void validate_design(const BeamformDesign& design, double p_total,
                     const Eigen::MatrixXcd* h_est) {
  const Eigen::Index k = design.directions.cols();
  if (design.powers.size() != k) {
    throw InvalidInputError("BeamformDesign: powers/directions size mismatch");
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (std::abs(design.directions.col(j).norm() - 1.0) > 1e-9) {
      throw InvalidInputError("BeamformDesign: direction " + std::to_string(j) +
                              " is not unit norm");
    }
    if (design.powers(j) < 0.0) {
      throw InvalidInputError("BeamformDesign: negative power");
    }
  }
  if (p_total > 0.0 && design.powers.sum() > p_total * (1.0 + 1e-9)) {
    throw InvalidInputError("BeamformDesign: power budget exceeded");
  }
  if (h_est != nullptr) {
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < k; ++i) {
        if (i == j) continue;
        const double cross = std::abs(h_est->col(i).dot(design.directions.col(j)));
        if (cross > 1e-8 * h_est->col(i).norm()) {
          throw InvalidInputError("BeamformDesign: zero-forcing violated");
        }
      }
    }
  }
}

Eigen::MatrixXcd zf_directions(const Eigen::MatrixXcd& h_est) {
  const Eigen::Index nt = h_est.rows();
  const Eigen::Index k = h_est.cols();
  if (k == 0 || nt < k) {
    throw InvalidInputError("zf_directions: need 1 <= K <= N_t estimates");
  }
  // Stacked estimate matrix H has rows h_ek^H; W = H^H (H H^H)^{-1} is the
  // right pseudo-inverse, so h_ej^H w_k = delta_jk.
  const Eigen::MatrixXcd h_stack = h_est.adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h_stack);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin > 1e8) {
    throw IllConditionedChannelError(
        "zf_directions: estimate matrix condition number above 1e8");
  }
  const Eigen::MatrixXcd gram = h_stack * h_est;  // K x K
  const Eigen::MatrixXcd w = h_est * gram.inverse();
  Eigen::MatrixXcd u(nt, k);
  for (Eigen::Index j = 0; j < k; ++j) u.col(j) = w.col(j).normalized();
  return u;
}

Eigen::VectorXd signal_gains(const Eigen::MatrixXcd& h_est,
                             const Eigen::MatrixXcd& directions) {
  if (h_est.cols() != directions.cols() || h_est.rows() != directions.rows()) {
    throw InvalidInputError("signal_gains: shape mismatch");
  }
  Eigen::VectorXd g(h_est.cols());
  for (Eigen::Index j = 0; j < h_est.cols(); ++j) {
    g(j) = std::norm(h_est.col(j).dot(directions.col(j)));
  }
  return g;
}

double effective_noise(const BeamformDesign& design, Eigen::Index user,
                       const Eigen::VectorXcd& err_mean,
                       const Eigen::MatrixXcd& err_cov) {
  const Eigen::Index k = design.n_users();
  if (user < 0 || user >= k) throw InvalidInputError("effective_noise: user");
  double total = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j == user) continue;
    const auto uj = design.directions.col(j);
    const double mean_part = std::norm(uj.dot(err_mean));
    const double cov_part = std::real(uj.dot(err_cov * uj));
    total += design.powers(j) * (mean_part + cov_part);
  }
  return total;
}

PowerCondition maxmin_power_condition(double gamma,
                                      const Eigen::VectorXd& gains,
                                      const Eigen::VectorXd& noise,
                                      const Eigen::VectorXd& err_power,
                                      double a, double p_total) {
  check_solver_inputs(gamma, gains, noise, err_power);
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    lhs += gamma * (noise(i) + p_total * a * err_power(i)) /
           (gains(i) + a * err_power(i) * gamma);
  }
  return {lhs <= p_total, lhs};
}

double sherman_morrison_total(double gamma, const Eigen::VectorXd& gains,
                              const Eigen::VectorXd& noise,
                              const Eigen::VectorXd& err_power, double a) {
  check_solver_inputs(gamma, gains, noise, err_power);
  double num = 0.0;
  double den = 1.0;
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    const double binv = gamma / (gains(i) + a * err_power(i) * gamma);
    num += binv * noise(i);
    den -= binv * a * err_power(i);  // 1 + 1^T B^{-1} s with s_k = -a s_ek^2
  }
  return num / den;
}

Eigen::VectorXd solve_power_loading(double gamma, const Eigen::VectorXd& gains,
                                    const Eigen::VectorXd& noise,
                                    const Eigen::VectorXd& err_power, double a,
                                    double p_total) {
  check_solver_inputs(gamma, gains, noise, err_power);
  const Eigen::Index k = gains.size();
  Eigen::MatrixXd mat(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      mat(i, j) = (i == j) ? gains(i) / gamma : -a * err_power(i);
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(mat);
  const Eigen::VectorXd beta = lu.solve(noise);
  const double residual = (mat * beta - noise).norm();
  if (!beta.allFinite() || residual > 1e-8 * noise.norm() ||
      beta.minCoeff() <= 0.0) {
    throw InfeasibleTargetError(
        "solve_power_loading: target beyond the spectral feasibility limit");
  }
  (void)p_total;
  return beta;
}

MaxMinSolution maxmin_gamma(const Eigen::VectorXd& gains,
                            const Eigen::VectorXd& noise,
                            const Eigen::VectorXd& err_power, double a,
                            double p_total, double tol) {
  if (!(tol > 0.0)) throw InvalidInputError("maxmin_gamma: tol must be > 0");
  check_solver_inputs(1.0, gains, noise, err_power);
  if (!(p_total > 0.0)) {
    throw InvalidInputError("maxmin_gamma: power budget must be > 0");
  }
  const auto feasible = [&](double g) {
    return maxmin_power_condition(g, gains, noise, err_power, a, p_total)
        .feasible;
  };

  double lo = 0.0;
  double hi = p_total * (gains.array() / noise.array()).maxCoeff();
  for (int i = 0; i < 200 && feasible(hi); ++i) {
    lo = hi;
    hi *= 2.0;
  }
  // Feasibility holds on [0, gamma*]; bisect, then keep halving until the
  // loading at the feasible end actually exhausts the budget (the condition
  // can be steep in gamma near the spectral limit at large `a`).
  for (int i = 0; i < 400; ++i) {
    const bool width_ok = (hi - lo) <= tol * hi;
    if (width_ok) {
      if (lo == 0.0) break;
      Eigen::VectorXd beta;
      try {
        beta = solve_power_loading(lo, gains, noise, err_power, a, p_total);
      } catch (const InfeasibleTargetError&) {
        beta.resize(0);
      }
      if (beta.size() > 0 && beta.sum() >= (1.0 - tol) * p_total) break;
      if ((hi - lo) <= 8.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  MaxMinSolution sol;
  sol.gamma = lo;
  sol.powers = (lo > 0.0)
                   ? solve_power_loading(lo, gains, noise, err_power, a, p_total)
                   : Eigen::VectorXd::Zero(gains.size()).eval();
  return sol;
}

}  // namespace gpsim

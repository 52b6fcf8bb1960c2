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

#include "gpsim/goodput.hpp"

#include <cmath>
#include <exception>

#include "gpsim/errors.hpp"
#include "gpsim/indefinite.hpp"

namespace gpsim {

double goodput(double rate, const Eigen::VectorXd& delta, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidInputError("goodput: eta must lie in [0, 1]");
  }
  if (rate < 0.0) throw InvalidInputError("goodput: rate must be >= 0");
  if (delta.size() == 0) throw InvalidInputError("goodput: empty outage");
  if (delta.minCoeff() < 0.0 || delta.maxCoeff() > 1.0) {
    throw InvalidInputError("goodput: outage outside [0, 1]");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < delta.size(); ++k) {
    sum += (1.0 - delta(k)) * rate + eta * delta(k) * rate;
  }
  return sum / static_cast<double>(delta.size());
}

double rate_from_gamma(double gamma) { return std::log2(1.0 + gamma); }

double gamma_from_rate(double rate) { return std::exp2(rate) - 1.0; }

std::vector<double> rate_grid(double gamma_ref, int points, double lo_factor,
                              double hi_factor) {
  if (points < 2 || !(gamma_ref > 0.0) || !(lo_factor > 0.0) ||
      !(hi_factor > lo_factor)) {
    throw InvalidInputError("rate_grid: bad grid parameters");
  }
  std::vector<double> rates(static_cast<size_t>(points));
  const double log_lo = std::log(gamma_ref * lo_factor);
  const double log_hi = std::log(gamma_ref * hi_factor);
  for (int i = 0; i < points; ++i) {
    const double g =
        std::exp(log_lo + (log_hi - log_lo) * i / (points - 1));
    rates[static_cast<size_t>(i)] = rate_from_gamma(g);
  }
  return rates;
}

Eigen::VectorXd alg1_outages(const Scenario& scenario,
                             const BeamformDesign& design, double gamma,
                             int degree) {
  const Eigen::Index k = design.n_users();
  Eigen::VectorXd delta(k);
  for (Eigen::Index u = 0; u < k; ++u) {
    ComplexQuadraticProblem prob;
    prob.Q = build_q(design, u, gamma);
    prob.h_est = scenario.h_est.col(u);
    prob.mu = scenario.err_mean.col(u);
    prob.cov = scenario.err_cov[static_cast<size_t>(u)];
    prob.sigma2 = scenario.noise(u);
    delta(u) = outage_probability(prob, degree);
  }
  return delta;
}

std::vector<GoodputPoint> sweep_rate(const Scenario& scenario,
                                     const BeamformDesign& design,
                                     const std::vector<double>& rates,
                                     double eta, int degree) {
  std::vector<GoodputPoint> points;
  points.reserve(rates.size());
  for (const double r : rates) {
    GoodputPoint p;
    p.rate = r;
    p.method = "alg1";
    try {
      p.outage = alg1_outages(scenario, design, gamma_from_rate(r), degree);
      p.goodput = goodput(r, p.outage, eta);
    } catch (const std::exception& e) {
      p.ok = false;
      p.error = e.what();
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<GoodputPoint> mc_goodput(const Scenario& scenario,
                                     const BeamformDesign& design,
                                     const std::vector<double>& rates,
                                     double eta, int n_samples,
                                     std::uint64_t seed) {
  if (n_samples < 1) throw InvalidInputError("mc_goodput: n_samples >= 1");
  const Eigen::Index k = design.n_users();
  // Beamformers with power folded in: w_j = sqrt(beta_j) u_j.
  const Eigen::MatrixXcd w =
      design.directions * design.powers.cwiseSqrt().asDiagonal();

  std::vector<GoodputPoint> points(rates.size());
  for (size_t ri = 0; ri < rates.size(); ++ri) {
    GoodputPoint& p = points[ri];
    p.rate = rates[ri];
    p.method = "mc";
    p.outage.resize(k);
    const double gamma = gamma_from_rate(p.rate);
    for (Eigen::Index u = 0; u < k; ++u) {
      const Eigen::MatrixXcd errs = sample_errors(
          scenario, u, n_samples,
          derive_seed(seed, static_cast<std::uint64_t>(ri)));
      // y = W^H h per draw, h = h_est + e.
      const Eigen::MatrixXcd y =
          w.adjoint() * (scenario.h_est.col(u).replicate(1, n_samples) + errs);
      int outages = 0;
      for (int s = 0; s < n_samples; ++s) {
        const double sig = std::norm(y(u, s));
        double interference = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
          if (j != u) interference += std::norm(y(j, s));
        }
        const double sinr = sig / (interference + scenario.noise(u));
        if (sinr < gamma) ++outages;
      }
      p.outage(u) = static_cast<double>(outages) / n_samples;
    }
    p.goodput = goodput(p.rate, p.outage, eta);
  }
  return points;
}

double exp_a_outage(double a) {
  if (a < 0.0) throw InvalidInputError("exp_a_outage: a must be >= 0");
  return std::exp(-a);
}

double interference_only_outage(const Scenario& scenario,
                                const BeamformDesign& design,
                                Eigen::Index user, double gamma, int degree) {
  if (!(gamma > 0.0)) {
    throw InvalidInputError("interference_only_outage: gamma must be > 0");
  }
  validate_design(design);
  const Eigen::Index k = design.n_users();
  if (user < 0 || user >= k) {
    throw InvalidInputError("interference_only_outage: user index");
  }
  const double gain = std::norm(
      scenario.h_est.col(user).dot(design.directions.col(user)));
  const double threshold =
      design.powers(user) * gain / gamma - scenario.noise(user);
  if (threshold <= 0.0) return 1.0;

  const Eigen::Index nt = design.directions.rows();
  Eigen::MatrixXcd interference = Eigen::MatrixXcd::Zero(nt, nt);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j == user) continue;
    const auto uj = design.directions.col(j);
    interference.noalias() += design.powers(j) * (uj * uj.adjoint());
  }

  ComplexQuadraticProblem prob;
  prob.Q = interference;
  prob.h_est = Eigen::VectorXcd::Zero(nt);
  prob.mu = scenario.err_mean.col(user);
  prob.cov = scenario.err_cov[static_cast<size_t>(user)];
  prob.sigma2 = threshold;
  const IndefiniteSplit split = decompose(prob);
  if (!split.pos.has_value()) return 0.0;  // no interferers: I identically 0

  const RealQuadraticForm<double> form =
      embed_real(split.pos->b, split.pos->delta);
  const VectorX<double> chi = moments_from_cumulants(cumulants(form, degree));
  const double var = chi(2) - chi(1) * chi(1);
  const double effective = threshold - split.shift;
  if (var <= 1e-14 * chi(1) * chi(1)) {
    return (chi(1) > effective) ? 1.0 : 0.0;
  }
  const LaguerrePdf<double> pdf = fit_laguerre(chi, degree);
  if (effective <= 0.0) return 1.0;
  const double p = 1.0 - cdf(pdf, effective);
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

BeamformDesign design_maxmin(const Scenario& scenario, double a, double tol) {
  if (a < 0.0) throw InvalidInputError("design_maxmin: a must be >= 0");
  BeamformDesign design;
  design.directions = zf_directions(scenario.h_est);
  design.a = a;
  const Eigen::VectorXd gains = signal_gains(scenario.h_est, design.directions);
  Eigen::VectorXd err_power(scenario.h_est.cols());
  for (Eigen::Index u = 0; u < err_power.size(); ++u) {
    err_power(u) =
        std::real(scenario.err_cov[static_cast<size_t>(u)](0, 0));
  }
  const MaxMinSolution sol = maxmin_gamma(gains, scenario.noise, err_power, a,
                                          scenario.total_power, tol);
  design.gamma = sol.gamma;
  design.powers = sol.powers;
  return design;
}

GoodputPoint evaluate_design_goodput(const Scenario& scenario, double a,
                                     double eta, int degree) {
  const BeamformDesign design = design_maxmin(scenario, a);
  GoodputPoint p;
  p.method = "alg1";
  p.rate = rate_from_gamma(design.gamma);
  p.outage = alg1_outages(scenario, design, design.gamma, degree);
  p.goodput = goodput(p.rate, p.outage, eta);
  return p;
}

AChoice choose_a(const Scenario& scenario, double eta, double a_lo,
                 double a_hi, double tol) {
  if (!(a_lo >= 0.0) || !(a_hi > a_lo) || !(tol > 0.0)) {
    throw InvalidInputError("choose_a: need 0 <= a_lo < a_hi, tol > 0");
  }
  const Eigen::MatrixXcd dirs = zf_directions(scenario.h_est);
  const Eigen::VectorXd gains = signal_gains(scenario.h_est, dirs);
  Eigen::VectorXd err_power(scenario.h_est.cols());
  for (Eigen::Index u = 0; u < err_power.size(); ++u) {
    err_power(u) = std::real(scenario.err_cov[static_cast<size_t>(u)](0, 0));
  }
  const auto objective = [&](double a) {
    const MaxMinSolution sol = maxmin_gamma(gains, scenario.noise, err_power,
                                            a, scenario.total_power);
    const double r = rate_from_gamma(sol.gamma);
    return (1.0 - (1.0 - eta) * exp_a_outage(a)) * r;
  };
  AChoice choice;
  choice.a = golden_section_max(objective, a_lo, a_hi, tol);
  const MaxMinSolution sol = maxmin_gamma(gains, scenario.noise, err_power,
                                          choice.a, scenario.total_power);
  choice.gamma = sol.gamma;
  choice.goodput = objective(choice.a);
  choice.at_boundary =
      (choice.a - a_lo <= tol) || (a_hi - choice.a <= tol);
  return choice;
}

}  // namespace gpsim

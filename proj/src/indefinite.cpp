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

#include "gpsim/indefinite.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gpsim/errors.hpp"

namespace gpsim {

void ComplexQuadraticProblem::validate() const {
  const Eigen::Index n = Q.rows();
  if (Q.cols() != n || h_est.size() != n || mu.size() != n ||
      cov.rows() != n || cov.cols() != n) {
    throw InvalidInputError("ComplexQuadraticProblem: dimension mismatch");
  }
  const double q_scale = Q.cwiseAbs().maxCoeff();
  const double tiny = std::numeric_limits<double>::min();
  if ((Q - Q.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * q_scale + tiny) {
    throw InvalidInputError("ComplexQuadraticProblem: Q not Hermitian");
  }
  const double c_scale = cov.cwiseAbs().maxCoeff();
  if ((cov - cov.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * c_scale + tiny) {
    throw InvalidInputError("ComplexQuadraticProblem: covariance not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10 * c_scale - tiny) {
    throw InvalidInputError("ComplexQuadraticProblem: covariance not PSD");
  }
  if (!(sigma2 > 0.0)) {
    throw InvalidInputError("ComplexQuadraticProblem: sigma2 must be > 0");
  }
}

Eigen::MatrixXcd build_q(const BeamformDesign& design, Eigen::Index user,
                         double gamma) {
  const Eigen::Index k = design.n_users();
  if (user < 0 || user >= k) throw InvalidInputError("build_q: user index");
  if (!(gamma > 0.0)) throw InvalidInputError("build_q: gamma must be > 0");
  validate_design(design);
  const Eigen::Index nt = design.directions.rows();
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(nt, nt);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto uj = design.directions.col(j);
    const double w = (j == user) ? design.powers(j) / gamma : -design.powers(j);
    q.noalias() += w * (uj * uj.adjoint());
  }
  return q;
}

IndefiniteSplit decompose(const ComplexQuadraticProblem& prob,
                          double eps_eigen) {
  prob.validate();
  const Eigen::Index n = prob.Q.rows();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_cov(prob.cov);
  Eigen::VectorXd cov_vals = es_cov.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXcd cov_half =
      es_cov.eigenvectors() * cov_vals.cwiseSqrt().asDiagonal() *
      es_cov.eigenvectors().adjoint();

  Eigen::MatrixXcd m = cov_half * prob.Q * cov_half;
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_m(m);
  const Eigen::VectorXd lambda = es_m.eigenvalues();
  const Eigen::MatrixXcd basis = es_m.eigenvectors();

  const Eigen::VectorXcd mean = prob.h_est + prob.mu;
  const Eigen::VectorXcd qm = prob.Q * mean;
  const Eigen::VectorXcd t = basis.adjoint() * (cov_half * qm);
  const double const_part = std::real(mean.dot(qm));  // mean^H Q mean

  const double lam_max = lambda.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> pos_idx, neg_idx;
  double dropped_linear_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam_max > 0.0 && std::abs(lambda(i)) > eps_eigen * lam_max) {
      (lambda(i) > 0.0 ? pos_idx : neg_idx).push_back(i);
    } else {
      dropped_linear_sq += std::norm(t(i));
    }
  }

  IndefiniteSplit split;
  double carried = 0.0;
  const auto make_side = [&](const std::vector<Eigen::Index>& idx) {
    SplitSide side;
    const Eigen::Index count = static_cast<Eigen::Index>(idx.size());
    side.delta.resize(count);
    side.b.resize(count);
    side.coord_rows.resize(count, n);
    for (Eigen::Index r = 0; r < count; ++r) {
      const Eigen::Index i = idx[static_cast<size_t>(r)];
      side.delta(r) = std::abs(lambda(i));
      side.b(r) = t(i) / lambda(i);
      side.coord_rows.row(r) = basis.col(i).adjoint();
      carried += lambda(i) * std::norm(side.b(r));
    }
    return side;
  };
  if (!pos_idx.empty()) split.pos = make_side(pos_idx);
  if (!neg_idx.empty()) split.neg = make_side(neg_idx);
  split.shift = const_part - carried;

  // If dropped coordinates still carry a linear Gaussian term, the form is
  // not a difference of definite quadratics: happens only when cov is
  // singular and Q maps outside its range.
  double scale = lam_max + std::abs(split.shift) + prob.sigma2;
  if (split.pos) scale += split.pos->delta.dot(split.pos->b.cwiseAbs2());
  if (split.neg) scale += split.neg->delta.dot(split.neg->b.cwiseAbs2());
  if (std::sqrt(dropped_linear_sq) > 1e-7 * scale) {
    throw SingularCovarianceError(
        "decompose: covariance singular with Q not supported on its range");
  }
  return split;
}

RealQuadraticForm<double> embed_real(const Eigen::VectorXcd& b,
                                     const Eigen::VectorXd& delta) {
  const Eigen::Index m = delta.size();
  if (b.size() != m) throw InvalidInputError("embed_real: size mismatch");
  if (m == 0 || delta.minCoeff() <= 0.0) {
    throw InvalidInputError("embed_real: delta entries must be > 0");
  }
  RealQuadraticForm<double> form;
  form.A = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  form.A.diagonal().head(m) = delta;
  form.A.diagonal().tail(m) = delta;
  form.mu.resize(2 * m);
  form.mu.head(m) = b.real();
  form.mu.tail(m) = b.imag();
  form.C = 0.5 * Eigen::MatrixXd::Identity(2 * m, 2 * m);
  return form;
}

namespace {

// Either a fitted density or a point mass (absent side, or variance that
// vanished relative to the mean).
struct SideDistribution {
  bool is_point = true;
  double mass = 0.0;
  LaguerrePdf<double> pdf;
};

SideDistribution analyze_side(const std::optional<SplitSide>& side,
                              int degree) {
  SideDistribution dist;
  if (!side.has_value()) return dist;
  const RealQuadraticForm<double> form = embed_real(side->b, side->delta);
  const VectorX<double> chi =
      moments_from_cumulants(cumulants(form, degree));
  const double var = chi(2) - chi(1) * chi(1);
  if (var <= 1e-14 * chi(1) * chi(1)) {
    dist.mass = chi(1);
    return dist;
  }
  dist.is_point = false;
  dist.pdf = fit_laguerre(chi, degree);
  return dist;
}

double clamp_probability(double p) {
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

}  // namespace

double outage_probability(const ComplexQuadraticProblem& prob, int degree,
                          double eps_eigen) {
  if (degree < 2) throw InvalidInputError("outage_probability: degree >= 2");
  const IndefiniteSplit split = decompose(prob, eps_eigen);
  const double tau = prob.sigma2 - split.shift;

  const SideDistribution d1 = analyze_side(split.pos, degree);
  const SideDistribution d2 = analyze_side(split.neg, degree);

  if (d1.is_point && d2.is_point) {
    return (d1.mass - d2.mass <= tau) ? 1.0 : 0.0;
  }
  if (!d1.is_point && d2.is_point) {
    // P[X1 <= tau + m2]
    const double arg = tau + d2.mass;
    return (arg <= 0.0) ? 0.0 : cdf(d1.pdf, arg);
  }
  if (d1.is_point && !d2.is_point) {
    // P[X2 >= m1 - tau]
    const double arg = d1.mass - tau;
    return (arg <= 0.0) ? 1.0 : clamp_probability(1.0 - cdf(d2.pdf, arg));
  }

  // Both sides random: P[X1 - X2 <= tau] = E_{X2}[F1(tau + X2)], integrated
  // against the fitted X2 density on a fixed grid out to its 1 - 1e-8
  // quantile (composite Simpson).
  const double upper = quantile(d2.pdf, 1.0 - 1e-8);
  const int intervals = 2048;
  const double h = upper / intervals;
  const auto integrand = [&](double tt) {
    const double f2 = density(d2.pdf, tt);
    if (f2 <= 0.0) return 0.0;
    const double arg = tau + tt;
    return (arg <= 0.0) ? 0.0 : cdf(d1.pdf, arg) * f2;
  };
  double acc = integrand(0.0) + integrand(upper);
  for (int j = 1; j < intervals; ++j) {
    acc += (j % 2 == 1 ? 4.0 : 2.0) * integrand(h * j);
  }
  double outage = acc * h / 3.0;
  outage += 1.0 - cdf(d2.pdf, upper);  // tail, where F1 is ~1
  return clamp_probability(outage);
}

}  // namespace gpsim

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

#ifndef GPSIM_INDEFINITE_HPP
#define GPSIM_INDEFINITE_HPP

#include <Eigen/Dense>
#include <optional>

#include "gpsim/beamform.hpp"
#include "gpsim/quadform.hpp"

namespace gpsim {

/// Outage-defining quadratic form h^H Q h with h = h_est + e,
/// e ~ CN(mu, cov): outage is P[h^H Q h <= sigma2].
struct ComplexQuadraticProblem {
  Eigen::MatrixXcd Q;      // Hermitian, indefinite in general
  Eigen::VectorXcd h_est;
  Eigen::VectorXcd mu;
  Eigen::MatrixXcd cov;    // Hermitian PSD error covariance
  double sigma2 = 0.0;     // noise power (threshold)

  void validate() const;
};

/// One sign class of the split: value = sum_i delta_i |b_i + z_i|^2 with
/// z ~ CN(0, I). `coord_rows` maps the whitened error z (= C^{-1/2}(e - mu))
/// to these coordinates; kept for validation and Monte Carlo cross-checks.
struct SplitSide {
  Eigen::VectorXd delta;        // strictly positive eigenvalue magnitudes
  Eigen::VectorXcd b;
  Eigen::MatrixXcd coord_rows;  // m x N_t rows of P^H
};

/// f + sigma2 = (pos value) - (neg value) + shift. The shift carries the
/// deterministic mass of coordinates with (near-)zero quadratic weight.
struct IndefiniteSplit {
  std::optional<SplitSide> pos;
  std::optional<SplitSide> neg;
  double shift = 0.0;
};

/// Q_k = beta_k u_k u_k^H / gamma - sum_{j != k} beta_j u_j u_j^H.
Eigen::MatrixXcd build_q(const BeamformDesign& design, Eigen::Index user,
                         double gamma);

/// Eigendecompose C^{1/2} Q C^{1/2} and partition by eigenvalue sign.
/// Eigenvalues with |lambda| <= eps_eigen * max|lambda| are dropped; their
/// deterministic contribution lands in `shift`. Throws
/// SingularCovarianceError when the covariance is singular and Q is not
/// supported on its range (the form then has a linear Gaussian part).
IndefiniteSplit decompose(const ComplexQuadraticProblem& prob,
                          double eps_eigen = 1e-10);

/// Real embedding of one side: A = diag(delta, delta), mu = [Re b; Im b],
/// C = I/2 (each real component of a unit circular complex Gaussian).
RealQuadraticForm<double> embed_real(const Eigen::VectorXcd& b,
                                     const Eigen::VectorXd& delta);

/// Full pipeline: split, embed, fit both sides at the given degree, and
/// combine into P[h^H Q h <= sigma2] in [0, 1].
double outage_probability(const ComplexQuadraticProblem& prob, int degree = 6,
                          double eps_eigen = 1e-10);

}  // namespace gpsim

#endif  // GPSIM_INDEFINITE_HPP

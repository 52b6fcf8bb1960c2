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

#ifndef GPSIM_QUADFORM_HPP
#define GPSIM_QUADFORM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "gpsim/errors.hpp"
#include "gpsim/special_functions.hpp"

namespace gpsim {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// x^T A x for x ~ N(mu, C), all real. A and C must be symmetric, A PSD.
template <typename Scalar>
struct RealQuadraticForm {
  MatrixX<Scalar> A;
  VectorX<Scalar> mu;
  MatrixX<Scalar> C;

  Eigen::Index size() const { return A.rows(); }

  void validate() const {
    if (A.rows() != A.cols() || C.rows() != C.cols() || A.rows() != C.rows() ||
        mu.size() != A.rows()) {
      throw InvalidInputError("RealQuadraticForm: dimension mismatch");
    }
    const Scalar a_scale = A.cwiseAbs().maxCoeff();
    const Scalar c_scale = C.cwiseAbs().maxCoeff();
    const Scalar tiny = std::numeric_limits<Scalar>::min();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() >
        Scalar(1e-12) * a_scale + tiny) {
      throw InvalidInputError("RealQuadraticForm: A not symmetric");
    }
    if ((C - C.transpose()).cwiseAbs().maxCoeff() >
        Scalar(1e-12) * c_scale + tiny) {
      throw InvalidInputError("RealQuadraticForm: C not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es_a(A,
                                                        Eigen::EigenvaluesOnly);
    if (es_a.eigenvalues().minCoeff() < Scalar(-1e-10) * a_scale - tiny) {
      throw InvalidInputError("RealQuadraticForm: A not positive semidefinite");
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es_c(C,
                                                        Eigen::EigenvaluesOnly);
    if (es_c.eigenvalues().minCoeff() < Scalar(-1e-10) * c_scale - tiny) {
      throw InvalidInputError("RealQuadraticForm: C not positive semidefinite");
    }
  }
};

/// Cumulants c_1..c_count of the form:
///   c_i = 2^{i-1} i! (tr((AC)^i)/i + mu^T (AC)^{i-1} A mu),
/// powers of AC taken by repeated multiplication.
template <typename Scalar>
VectorX<Scalar> cumulants(const RealQuadraticForm<Scalar>& form, int count) {
  if (count < 1) throw InvalidInputError("cumulants: count must be >= 1");
  form.validate();
  const MatrixX<Scalar> m = form.A * form.C;
  MatrixX<Scalar> power = m;                  // (AC)^i
  VectorX<Scalar> v = form.A * form.mu;       // (AC)^{i-1} A mu
  VectorX<Scalar> c(count);
  Scalar factor(1);                           // 2^{i-1} i!
  for (int i = 1; i <= count; ++i) {
    if (i > 1) {
      factor *= Scalar(2) * Scalar(i);
      power = power * m;
      v = m * v;
    }
    c(i - 1) = factor * (power.trace() / Scalar(i) + form.mu.dot(v));
  }
  return c;
}

/// chi_0..chi_d from cumulants c_1..c_d via the recursion
///   chi_i = sum_{k=0}^{i-1} binom(i-1, k) c_{i-k} chi_k, chi_0 = 1.
template <typename Scalar>
VectorX<Scalar> moments_from_cumulants(const VectorX<Scalar>& c) {
  const int d = static_cast<int>(c.size());
  VectorX<Scalar> chi(d + 1);
  chi(0) = Scalar(1);
  std::vector<Scalar> binom(static_cast<size_t>(d) + 1, Scalar(0));
  binom[0] = Scalar(1);
  for (int i = 1; i <= d; ++i) {
    // binom holds row i-1 of Pascal's triangle.
    Scalar acc(0);
    for (int k = 0; k <= i - 1; ++k) acc += binom[k] * c(i - k - 1) * chi(k);
    chi(i) = acc;
    for (int k = i; k >= 1; --k) binom[k] += binom[k - 1];
  }
  return chi;
}

/// Fitted density of a positive definite quadratic form,
///   f(y) = [y^nu e^{-y/beta} / (beta^nu Gamma(nu+1))]
///          * sum_{k=0}^{d} xi_k y^k / beta^{k+1}.
/// The polynomial part equals sum_i eta_i L_i^{(nu)}(y/beta) in the
/// generalized Laguerre basis; evaluation goes through eta and the Laguerre
/// recurrence, which stays accurate when nu is large and the monomial xi_k
/// would cancel catastrophically.
template <typename Scalar>
struct LaguerrePdf {
  Scalar nu{};
  Scalar beta{};
  VectorX<Scalar> xi;       // monomial coefficients xi_0..xi_d
  int degree{};
  VectorX<Scalar> moments;  // chi_0..chi_d of the source form
  VectorX<Scalar> eta;      // Laguerre-basis coefficients eta_0..eta_d
};

namespace detail {

// L_0^{(a)}(x) .. L_d^{(a)}(x) by the three-term recurrence.
template <typename Scalar>
void laguerre_values(Scalar a, Scalar x, int d, Scalar* out) {
  out[0] = Scalar(1);
  if (d == 0) return;
  out[1] = Scalar(1) + a - x;
  for (int i = 1; i < d; ++i) {
    out[i + 1] = ((Scalar(2 * i + 1) + a - x) * out[i] -
                  (Scalar(i) + a) * out[i - 1]) /
                 Scalar(i + 1);
  }
}

}  // namespace detail

/// Fit from moments chi_0..chi_d (chi must hold at least d+1 entries).
template <typename Scalar>
LaguerrePdf<Scalar> fit_laguerre(const VectorX<Scalar>& chi, int d) {
  if (d < 1) throw InvalidInputError("fit_laguerre: degree must be >= 1");
  if (chi.size() < d + 1) {
    throw InvalidInputError("fit_laguerre: need moments chi_0..chi_d");
  }
  const Scalar chi1 = chi(1);
  const Scalar chi2 = chi(2);
  if (!(chi1 > Scalar(0))) {
    throw InvalidInputError("fit_laguerre: first moment must be positive");
  }
  const Scalar var = chi2 - chi1 * chi1;
  if (!(var > Scalar(1e-14) * chi1 * chi1)) {
    throw DegenerateDistributionError(
        "fit_laguerre: variance vanishes; treat as point mass at chi_1");
  }

  LaguerrePdf<Scalar> pdf;
  pdf.degree = d;
  pdf.moments = chi.head(d + 1);
  pdf.beta = var / chi1;            // chi_2/chi_1 - chi_1
  pdf.nu = chi1 * chi1 / var - Scalar(1);
  const Scalar nu = pdf.nu;
  const Scalar beta = pdf.beta;

  // Scaled moments chi_k / beta^k.
  VectorX<Scalar> chis(d + 1);
  chis(0) = Scalar(1);
  for (int k = 1; k <= d; ++k) chis(k) = chi(k) / std::pow(beta, Scalar(k));

  // eta_i = [Gamma(nu+1) i! / Gamma(nu+i+1)] sum_k d_{i,k} chi_k / beta^k,
  // with d_{i,k} = (-1)^k Gamma(i+nu+1) / ((i-k)! k! Gamma(nu+k+1)).
  // The inner terms are built by a ratio recurrence in k to limit rounding.
  pdf.eta.resize(d + 1);
  for (int i = 0; i <= d; ++i) {
    Scalar term = std::exp(std::lgamma(Scalar(i) + nu + Scalar(1)) -
                           std::lgamma(Scalar(i + 1)) -
                           std::lgamma(nu + Scalar(1)));  // d_{i,0} * chis_0
    Scalar sum = term;
    for (int k = 0; k < i; ++k) {
      const Scalar ratio = -Scalar(i - k) /
                           (Scalar(k + 1) * (nu + Scalar(k + 1)));
      term *= ratio * (chis(k + 1) / chis(k));
      sum += term;
    }
    const Scalar pref = std::exp(std::lgamma(nu + Scalar(1)) +
                                 std::lgamma(Scalar(i + 1)) -
                                 std::lgamma(nu + Scalar(i) + Scalar(1)));
    pdf.eta(i) = pref * sum;
  }

  // xi_k = sum_{i=k}^{d} eta_i d_{i,k}.
  pdf.xi = VectorX<Scalar>::Zero(d + 1);
  for (int i = 0; i <= d; ++i) {
    Scalar dik = std::exp(std::lgamma(Scalar(i) + nu + Scalar(1)) -
                          std::lgamma(Scalar(i + 1)) -
                          std::lgamma(nu + Scalar(1)));  // d_{i,0}
    pdf.xi(0) += pdf.eta(i) * dik;
    for (int k = 0; k < i; ++k) {
      dik *= -Scalar(i - k) / (Scalar(k + 1) * (nu + Scalar(k + 1)));
      pdf.xi(k + 1) += pdf.eta(i) * dik;
    }
  }
  return pdf;
}

/// Fit directly from a form: cumulants -> moments -> Laguerre weights.
template <typename Scalar>
LaguerrePdf<Scalar> fit_laguerre(const RealQuadraticForm<Scalar>& form,
                                 int d) {
  return fit_laguerre(moments_from_cumulants(cumulants(form, d)), d);
}

/// Approximated density at y >= 0. Negative series ringing is clamped to 0;
/// `clamped`, when given, reports that the clamp fired.
template <typename Scalar>
Scalar density(const LaguerrePdf<Scalar>& pdf, Scalar y,
               bool* clamped = nullptr) {
  if (clamped) *clamped = false;
  if (y < Scalar(0)) throw InvalidInputError("density: y must be >= 0");
  const Scalar x = y / pdf.beta;
  if (x == Scalar(0)) {
    if (pdf.nu > Scalar(0)) return Scalar(0);
    if (pdf.nu == Scalar(0)) {
      const Scalar v = pdf.eta.sum() / pdf.beta;  // L_i^{(0)}(0) = 1
      if (v < Scalar(0)) {
        if (clamped) *clamped = true;
        return Scalar(0);
      }
      return v;
    }
    return std::numeric_limits<Scalar>::infinity();
  }
  const int d = pdf.degree;
  std::vector<Scalar> lag(static_cast<size_t>(d) + 1);
  detail::laguerre_values(pdf.nu, x, d, lag.data());
  Scalar series(0);
  for (int i = 0; i <= d; ++i) series += pdf.eta(i) * lag[i];
  const Scalar log_kernel =
      pdf.nu * std::log(x) - x - std::lgamma(pdf.nu + Scalar(1));
  const Scalar value = std::exp(log_kernel) * series / pdf.beta;
  if (value < Scalar(0)) {
    if (clamped) *clamped = true;
    return Scalar(0);
  }
  return value;
}

/// CDF by term-wise integration: the eta_0 term integrates to the
/// regularized lower incomplete gamma, the higher Laguerre terms to boundary
/// terms via int_0^z x^nu e^{-x} L_n(x) dx = z^{nu+1} e^{-z} L_{n-1}(z) / n
/// (superscript raised by one). Result clamped to [0, 1].
template <typename Scalar>
Scalar cdf(const LaguerrePdf<Scalar>& pdf, Scalar y) {
  if (y <= Scalar(0)) return Scalar(0);
  const Scalar x = y / pdf.beta;
  Scalar value = pdf.eta(0) * gamma_p(pdf.nu + Scalar(1), x);
  const int d = pdf.degree;
  if (d >= 1) {
    std::vector<Scalar> lag(static_cast<size_t>(d));
    detail::laguerre_values(pdf.nu + Scalar(1), x, d - 1, lag.data());
    Scalar series(0);
    for (int n = 1; n <= d; ++n) series += pdf.eta(n) / Scalar(n) * lag[n - 1];
    const Scalar log_kernel = (pdf.nu + Scalar(1)) * std::log(x) - x -
                              std::lgamma(pdf.nu + Scalar(1));
    value += std::exp(log_kernel) * series;
  }
  if (value < Scalar(0)) return Scalar(0);
  if (value > Scalar(1)) return Scalar(1);
  return value;
}

/// Smallest y with cdf(y) >= p, by bracketing + bisection.
template <typename Scalar>
Scalar quantile(const LaguerrePdf<Scalar>& pdf, Scalar p) {
  if (!(p >= Scalar(0) && p < Scalar(1))) {
    throw InvalidInputError("quantile: p must lie in [0, 1)");
  }
  if (p == Scalar(0)) return Scalar(0);
  const Scalar mean = pdf.moments(1);
  const Scalar sd = std::sqrt(pdf.moments(2) - mean * mean);
  Scalar hi = mean + Scalar(10) * sd + pdf.beta;
  for (int i = 0; i < 200 && cdf(pdf, hi) < p; ++i) hi *= Scalar(2);
  Scalar lo(0);
  for (int i = 0; i < 200; ++i) {
    const Scalar mid = (lo + hi) / Scalar(2);
    if (cdf(pdf, mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= Scalar(1e-12) * (Scalar(1) + hi)) break;
  }
  return hi;
}

}  // namespace gpsim

#endif  // GPSIM_QUADFORM_HPP

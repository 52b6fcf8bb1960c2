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

#ifndef GPSIM_SPECIAL_FUNCTIONS_HPP
#define GPSIM_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <limits>

#include "gpsim/errors.hpp"

namespace gpsim {

template <typename Scalar>
Scalar normal_cdf(Scalar z) {
  return Scalar(0.5) * std::erfc(-z / std::sqrt(Scalar(2)));
}

namespace detail {

// Series expansion of P(a, x), reliable for x < a + 1.
template <typename Scalar>
Scalar gamma_p_series(Scalar a, Scalar x) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar ap = a;
  Scalar sum = Scalar(1) / a;
  Scalar term = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += Scalar(1);
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * eps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), reliable for x >= a + 1.
template <typename Scalar>
Scalar gamma_q_contfrac(Scalar a, Scalar x) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar fpmin = std::numeric_limits<Scalar>::min() / eps;
  Scalar b = x + Scalar(1) - a;
  Scalar c = Scalar(1) / fpmin;
  Scalar d = Scalar(1) / b;
  Scalar h = d;
  for (int i = 1; i < 1000; ++i) {
    const Scalar an = -Scalar(i) * (Scalar(i) - a);
    b += Scalar(2);
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = Scalar(1) / d;
    const Scalar del = d * c;
    h *= del;
    if (std::abs(del - Scalar(1)) < eps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Wilson-Hilferty is used for very large shape, where the distribution is a
/// near-delta and the series/continued fraction become slow.
template <typename Scalar>
Scalar gamma_p(Scalar a, Scalar x) {
  if (!(a > Scalar(0))) throw InvalidInputError("gamma_p: shape must be > 0");
  if (x < Scalar(0)) throw InvalidInputError("gamma_p: x must be >= 0");
  if (x == Scalar(0)) return Scalar(0);
  if (a > Scalar(1e8)) {
    const Scalar t = std::cbrt(x / a);
    const Scalar z =
        (t - (Scalar(1) - Scalar(1) / (Scalar(9) * a))) * Scalar(3) * std::sqrt(a);
    return normal_cdf(z);
  }
  if (x < a + Scalar(1)) return detail::gamma_p_series(a, x);
  return Scalar(1) - detail::gamma_q_contfrac(a, x);
}

/// Upper tail Q(a, x) = 1 - P(a, x), computed without cancellation.
template <typename Scalar>
Scalar gamma_q(Scalar a, Scalar x) {
  if (!(a > Scalar(0))) throw InvalidInputError("gamma_q: shape must be > 0");
  if (x < Scalar(0)) throw InvalidInputError("gamma_q: x must be >= 0");
  if (x == Scalar(0)) return Scalar(1);
  if (a > Scalar(1e8)) return Scalar(1) - gamma_p(a, x);
  if (x < a + Scalar(1)) return Scalar(1) - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

}  // namespace gpsim

#endif  // GPSIM_SPECIAL_FUNCTIONS_HPP

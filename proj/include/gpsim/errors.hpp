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

#ifndef GPSIM_ERRORS_HPP
#define GPSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gpsim {

/// Malformed arguments: dimension mismatches, out-of-domain values.
struct InvalidInputError : std::invalid_argument {
  explicit InvalidInputError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A quadratic form whose variance vanishes relative to its mean; callers
/// handle these as point masses.
struct DegenerateDistributionError : std::runtime_error {
  explicit DegenerateDistributionError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Error covariance singular while the form matrix is not supported on its
/// range, so the form has a linear Gaussian component the split cannot carry.
struct SingularCovarianceError : std::runtime_error {
  explicit SingularCovarianceError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Stacked channel estimates too close to rank deficiency for zero forcing.
struct IllConditionedChannelError : std::runtime_error {
  explicit IllConditionedChannelError(const std::string& what)
      : std::runtime_error(what) {}
};

/// SINR target beyond the spectral feasibility limit of the power loading.
struct InfeasibleTargetError : std::runtime_error {
  explicit InfeasibleTargetError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Config file parse or validation failure; message carries file/line/field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gpsim

#endif  // GPSIM_ERRORS_HPP

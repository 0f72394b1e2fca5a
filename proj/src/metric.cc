// Copyright 2026 The Trimsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trimsim/metric.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace trimsim {

double NormalQuantile(double p) {
  if (p <= 0) return -std::numeric_limits<double>::infinity();
  if (p >= 1) return std::numeric_limits<double>::infinity();
  // Acklam's rational approximation, then one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - kLow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

absl::StatusOr<double> ZScore(double alpha) {
  if (!(alpha > 0 && alpha < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("confidence ", alpha, " outside (0, 1)"));
  }
  return -NormalQuantile((1 - alpha) / 2);
}

absl::StatusOr<double> TabulatedZScore(double alpha) {
  absl::StatusOr<double> z = ZScore(alpha);
  if (!z.ok()) return z;
  return std::round(*z * 1000) / 1000;
}

std::string Rounds::ToString() const {
  return infinite_ ? "inf" : absl::StrCat(value_);
}

absl::StatusOr<double> RoundsBound(const RtRQuery& query) {
  if (!(query.err > 0) || !std::isfinite(query.err)) {
    return absl::InvalidArgumentError("error margin must be positive");
  }
  if (!(query.variance >= 0) || !std::isfinite(query.variance)) {
    return absl::InvalidArgumentError("variance must be finite and >= 0");
  }
  absl::StatusOr<double> z = TabulatedZScore(query.alpha);
  if (!z.ok()) return z.status();
  // z is a multiple of 1/1000; keep it an integer so that exact inputs give
  // exact bounds (3.291^2 * 8e6 is exactly 86645448).
  const long double milli = std::llround(*z * 1000);
  return static_cast<double>(milli * milli * query.variance /
                             (1e6L * query.err * query.err));
}

absl::StatusOr<Rounds> RoundsToRecover(const RtRQuery& query) {
  absl::StatusOr<double> bound = RoundsBound(query);
  if (!bound.ok()) return bound.status();
  const double r = std::ceil(*bound);
  if (r >= 1.8e19) {
    return absl::OutOfRangeError("rounds-to-recover exceeds 64 bits");
  }
  return Rounds::Finite(r < 1 ? 1 : static_cast<uint64_t>(r));
}

}  // namespace trimsim

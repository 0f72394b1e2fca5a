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

#include "trimsim/distributions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace trimsim {

uint64_t RoundToCount(double x) {
  if (!(x > 0)) return 0;
  const double r = std::floor(x + 0.5);
  if (r >= 1.8e19) return std::numeric_limits<uint64_t>::max();
  return static_cast<uint64_t>(r);
}

namespace {

// Streaming central moments around a fixed shift.
class MomentAccumulator {
 public:
  void Add(double x) {
    if (count_ == 0) shift_ = x;
    const long double d = static_cast<long double>(x) - shift_;
    const long double d2 = d * d;
    s1_ += d;
    s2_ += d2;
    s3_ += d2 * d;
    s4_ += d2 * d2;
    ++count_;
  }

  uint64_t count() const { return count_; }
  double Mean() const { return static_cast<double>(shift_ + s1_ / count_); }
  // Unbiased sample variance.
  double Variance() const {
    if (count_ < 2) return 0;
    const long double n = count_;
    const long double m = s1_ / n;
    const long double v = (s2_ / n - m * m) * n / (n - 1);
    return static_cast<double>(std::max<long double>(v, 0));
  }
  double FourthCentral() const {
    const long double n = count_;
    const long double m = s1_ / n;
    const long double e2 = s2_ / n, e3 = s3_ / n, e4 = s4_ / n;
    return static_cast<double>(e4 - 4 * m * e3 + 6 * m * m * e2 -
                               3 * m * m * m * m);
  }
  double VarianceStderr() const {
    const double v = Variance();
    const double spread = FourthCentral() - v * v;
    return count_ > 1 ? std::sqrt(std::max(spread, 0.0) / count_) : 0;
  }

 private:
  long double shift_ = 0;
  long double s1_ = 0, s2_ = 0, s3_ = 0, s4_ = 0;
  uint64_t count_ = 0;
};

// Moments of min(round(X), m) with X ~ Laplace(mu, b) truncated to
// [0, inf), by summing the probability of every integer outcome.
std::optional<MomentEstimate> TLapCounterMoments(const TLapParams& dist,
                                                 uint64_t n, uint64_t t) {
  const uint64_t m = n - t;
  const long double b = dist.Scale(n);
  const long double mu = dist.Location(n);
  auto cdf = [&](long double x) -> long double {
    return x < mu ? 0.5L * std::exp((x - mu) / b)
                  : 1.0L - 0.5L * std::exp(-(x - mu) / b);
  };
  auto sf = [&](long double x) -> long double {
    return x < mu ? 1.0L - 0.5L * std::exp((x - mu) / b)
                  : 0.5L * std::exp(-(x - mu) / b);
  };
  // Mass of [lo, hi), computed on the side of mu where it is accurate.
  auto mass = [&](long double lo, long double hi) -> long double {
    if (lo >= mu) return sf(lo) - sf(hi);
    if (hi <= mu) return cdf(hi) - cdf(lo);
    return (1.0L - sf(hi)) - cdf(lo);
  };
  const long double z = sf(0);
  const long double reach = mu + 45.0L * b;
  const uint64_t last = static_cast<uint64_t>(
      std::min<long double>(static_cast<long double>(m), std::ceil(reach)));
  constexpr uint64_t kMaxTerms = 50'000'000;
  if (last > kMaxTerms) return std::nullopt;
  const long double center = std::floor(mu + 0.5L);
  long double e1 = 0, e2 = 0, total = 0;
  for (uint64_t k = 0; k <= last; ++k) {
    const long double lo = k == 0 ? 0.0L : k - 0.5L;
    long double p;
    if (k == m) {
      p = sf(lo) / z;  // everything at or above m is clamped to m
    } else {
      p = mass(lo, k + 0.5L) / z;
    }
    const long double d = static_cast<long double>(k) - center;
    e1 += p * d;
    e2 += p * d * d;
    total += p;
  }
  e1 /= total;
  e2 /= total;
  MomentEstimate est;
  est.method = MomentMethod::kAnalytic;
  est.filler_mean = static_cast<double>(center + e1);
  est.mean = static_cast<double>(t) + est.filler_mean;
  est.variance = static_cast<double>(std::max<long double>(e2 - e1 * e1, 0));
  return est;
}

}  // namespace

double SampleStandardNormal(Stream& rng) {
  for (;;) {
    const double u = 2.0 * rng.Uniform() - 1.0;
    const double v = 2.0 * rng.Uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0 && s < 1) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double SampleGamma(double shape, Stream& rng) {
  if (shape < 1) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    double u = rng.Uniform();
    while (u == 0) u = rng.Uniform();
    return SampleGamma(shape + 1, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = SampleStandardNormal(rng);
      v = 1.0 + c * x;
    } while (v <= 0);
    v = v * v * v;
    const double u = rng.Uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

absl::StatusOr<double> SampleBeta(double alpha, double beta, Stream& rng) {
  if (absl::Status st = ValidateDistribution(BetaParams{alpha, beta}); !st.ok()) {
    return st;
  }
  for (;;) {
    const double x = SampleGamma(alpha, rng);
    const double y = SampleGamma(beta, rng);
    if (x + y > 0) return x / (x + y);
  }
}

absl::StatusOr<double> SampleEtaTLap(const TLapParams& dist, uint64_t n,
                                     Stream& rng) {
  if (absl::Status st = ValidateDistribution(dist); !st.ok()) return st;
  const double b = dist.Scale(n);
  const double mu = dist.Location(n);
  for (;;) {
    const double u = rng.Uniform() - 0.5;  // [-0.5, 0.5)
    if (u == -0.5) continue;
    const double x = u < 0 ? mu + b * std::log1p(2.0 * u)
                           : mu - b * std::log1p(-2.0 * u);
    if (x >= 0) return x;
  }
}

double PFromEta(double eta, uint64_t n, uint64_t t) {
  if (n <= t) return 0;
  const double fillers = static_cast<double>(n - t);
  return std::clamp(eta, 0.0, fillers) / fillers;
}

uint64_t SampleBinomial(uint64_t trials, double p, Stream& rng) {
  if (trials == 0 || p <= 0) return 0;
  if (p >= 1) return trials;
  std::binomial_distribution<long long> dist(static_cast<long long>(trials), p);
  return static_cast<uint64_t>(dist(rng));
}

absl::StatusOr<double> SampleKeepProbability(const FillerDistribution& dist,
                                             uint64_t n, uint64_t t,
                                             Stream& rng) {
  if (absl::Status st = ValidateDistribution(dist); !st.ok()) return st;
  if (const auto* b = std::get_if<BetaParams>(&dist)) {
    return SampleBeta(b->alpha, b->beta, rng);
  }
  if (const auto* tl = std::get_if<TLapParams>(&dist)) {
    absl::StatusOr<double> eta = SampleEtaTLap(*tl, n, rng);
    if (!eta.ok()) return eta.status();
    return PFromEta(*eta, n, t);
  }
  return std::get<FixedFractionParams>(dist).f;
}

absl::StatusOr<uint64_t> SampleFillerCount(const FillerDistribution& dist,
                                           uint64_t n, uint64_t t,
                                           Stream& rng) {
  if (absl::Status st = ValidateDistribution(dist); !st.ok()) return st;
  const double fillers = n > t ? static_cast<double>(n - t) : 0.0;
  if (const auto* b = std::get_if<BetaParams>(&dist)) {
    absl::StatusOr<double> p = SampleBeta(b->alpha, b->beta, rng);
    if (!p.ok()) return p.status();
    return RoundToCount(*p * fillers);
  }
  if (const auto* tl = std::get_if<TLapParams>(&dist)) {
    absl::StatusOr<double> eta = SampleEtaTLap(*tl, n, rng);
    if (!eta.ok()) return eta.status();
    return RoundToCount(*eta);
  }
  return RoundToCount(std::get<FixedFractionParams>(dist).f * fillers);
}

absl::StatusOr<uint64_t> SampleRetainedFillers(const TrimStrategy& strategy,
                                               uint64_t n, uint64_t t,
                                               Stream& rng) {
  if (absl::Status st = strategy.Validate(); !st.ok()) return st;
  if (t > n) return absl::InvalidArgumentError("true count exceeds N");
  const uint64_t fillers = n - t;
  switch (strategy.kind) {
    case TrimKind::kNone:
      return fillers;
    case TrimKind::kCoinToss: {
      absl::StatusOr<double> p =
          SampleKeepProbability(*strategy.distribution, n, t, rng);
      if (!p.ok()) return p.status();
      return SampleBinomial(fillers, *p, rng);
    }
    case TrimKind::kCounter:
    case TrimKind::kSortAndCut: {
      absl::StatusOr<uint64_t> eta =
          SampleFillerCount(*strategy.distribution, n, t, rng);
      if (!eta.ok()) return eta.status();
      return std::min(*eta, fillers);
    }
  }
  return absl::InternalError("unhandled trim kind");
}

absl::StatusOr<MomentEstimate> MomentsOfS(const TrimStrategy& strategy,
                                          uint64_t n, uint64_t t,
                                          const MomentOptions& options) {
  if (absl::Status st = strategy.Validate(); !st.ok()) return st;
  if (t > n) return absl::InvalidArgumentError("true count exceeds N");
  const uint64_t m = n - t;
  const double md = static_cast<double>(m);
  MomentEstimate est;
  auto finish = [&](MomentEstimate e) {
    e.filler_mean = e.mean - static_cast<double>(t);
    return e;
  };

  if (strategy.kind == TrimKind::kNone) {
    est.mean = static_cast<double>(n);
    return finish(est);
  }
  const FillerDistribution& dist = *strategy.distribution;

  if (!options.force_monte_carlo) {
    if (const auto* fixed = std::get_if<FixedFractionParams>(&dist)) {
      if (strategy.kind == TrimKind::kCoinToss) {
        est.mean = static_cast<double>(t) + md * fixed->f;
        est.variance = md * fixed->f * (1 - fixed->f);
      } else {
        Stream unused(0);
        absl::StatusOr<uint64_t> eta = SampleFillerCount(dist, n, t, unused);
        if (!eta.ok()) return eta.status();
        est.mean = static_cast<double>(t + std::min(*eta, m));
      }
      return finish(est);
    }
    if (const auto* beta = std::get_if<BetaParams>(&dist);
        beta && strategy.kind == TrimKind::kCoinToss) {
      const double a = beta->alpha, b = beta->beta, s = a + b;
      est.mean = static_cast<double>(t) + md * a / s;
      est.variance = md * a * b * (s + md) / (s * s * (s + 1));
      return finish(est);
    }
    if (const auto* tlap = std::get_if<TLapParams>(&dist);
        tlap && strategy.kind != TrimKind::kCoinToss) {
      if (std::optional<MomentEstimate> exact = TLapCounterMoments(*tlap, n, t)) {
        return *exact;
      }
    }
  }

  if (options.samples < 2) {
    return absl::InvalidArgumentError("Monte-Carlo needs at least 2 samples");
  }
  Stream rng = Stream::Derive(options.seed, n ^ (t << 1), "moments");
  est.method = MomentMethod::kMonteCarlo;
  est.samples = options.samples;

  if (strategy.kind == TrimKind::kCoinToss && !options.force_monte_carlo) {
    // Var(S) = E[m p (1 - p)] + m^2 Var(p)
    MomentAccumulator p_acc, within;
    for (uint64_t i = 0; i < options.samples; ++i) {
      absl::StatusOr<double> p = SampleKeepProbability(dist, n, t, rng);
      if (!p.ok()) return p.status();
      p_acc.Add(*p);
      within.Add(md * *p * (1 - *p));
    }
    est.mean = static_cast<double>(t) + md * p_acc.Mean();
    est.variance = within.Mean() + md * md * p_acc.Variance();
    est.mean_stderr = md * std::sqrt(p_acc.Variance() / options.samples);
    const double a = std::sqrt(within.Variance() / options.samples);
    const double b = md * md * p_acc.VarianceStderr();
    est.variance_stderr = std::sqrt(a * a + b * b);
    return finish(est);
  }

  MomentAccumulator acc;
  for (uint64_t i = 0; i < options.samples; ++i) {
    absl::StatusOr<uint64_t> kept = SampleRetainedFillers(strategy, n, t, rng);
    if (!kept.ok()) return kept.status();
    acc.Add(static_cast<double>(t + *kept));
  }
  est.mean = acc.Mean();
  est.variance = acc.Variance();
  est.mean_stderr = std::sqrt(est.variance / options.samples);
  est.variance_stderr = acc.VarianceStderr();
  return finish(est);
}

}  // namespace trimsim

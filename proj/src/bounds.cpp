// Copyright 2026 The dpod Authors
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

#include "dpod/bounds.hpp"

#include <cmath>

#include "dpod/error.hpp"
#include "dpod/rng.hpp"

namespace dpod {

namespace {

void check_rate(double epsilon, int64_t cap) {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (cap < 1) throw DomainError("cap must be >= 1");
}

constexpr double kBranchPoint = -0.36787944117144233;  // -exp(-1)

}  // namespace

double prob_suppression_preserved(const TailQuery& q) {
  check_rate(q.epsilon, q.cap);
  if (q.tau < 0 || q.cell_value < 0) throw DomainError("tau, M must be >= 0");
  if (q.cell_value >= q.tau) {
    throw DomainError("cell is not suppressed (M >= tau)");
  }
  double c = q.epsilon / static_cast<double>(q.cap);
  return 1.0 - 0.5 * std::exp(-c * (static_cast<double>(q.tau) - 0.5 -
                                    static_cast<double>(q.cell_value)));
}

double prob_nonsuppression_preserved(const TailQuery& q) {
  check_rate(q.epsilon, q.cap);
  if (q.tau < 0 || q.cell_value < 0) throw DomainError("tau, M must be >= 0");
  if (q.cell_value < q.tau) throw DomainError("cell is suppressed (M < tau)");
  double c = q.epsilon / static_cast<double>(q.cap);
  return 1.0 - 0.5 * std::exp(c * (static_cast<double>(q.tau) + 0.5 -
                                   static_cast<double>(q.cell_value)));
}

double prob_error_exceeds(int64_t alpha, double epsilon, int64_t cap) {
  check_rate(epsilon, cap);
  if (alpha < 0) throw DomainError("alpha must be >= 0");
  double c = epsilon / static_cast<double>(cap);
  return std::exp(-c * (static_cast<double>(alpha) + 0.5));
}

double prob_diff_error_exceeds(int64_t alpha, double epsilon, int64_t cap) {
  check_rate(epsilon, cap);
  if (alpha < 0) throw DomainError("alpha must be >= 0");
  double c = epsilon / static_cast<double>(cap) * (static_cast<double>(alpha) + 1.0);
  return std::exp(-c) * (c + 2.0) / 2.0;
}

double lambert_w_lower(double x) {
  if (std::isnan(x) || x >= 0.0 || x < kBranchPoint - 1e-15) {
    throw DomainError("lambert_w_lower: x must lie in [-1/e, 0)");
  }
  if (x <= kBranchPoint) return -1.0;

  // g(y) = y e^y is decreasing on (-inf, -1], from 0- down to -1/e, so the
  // root is bracketed by [-745, -1]; e^-745 is still representable.
  auto g = [](double y) { return y * std::exp(y); };
  double lo = -745.0;  // g(lo) >= x
  double hi = -1.0;    // g(hi) <= x
  for (int i = 0; i < 80 && hi - lo > 1e-13; ++i) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) >= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double y = 0.5 * (lo + hi);

  // Halley polish; skipped near the branch point where f' vanishes.
  for (int i = 0; i < 4; ++i) {
    double e = std::exp(y);
    double f = y * e - x;
    double d1 = e * (y + 1.0);
    if (std::fabs(d1) < 1e-300) break;
    double d2 = e * (y + 2.0);
    double denom = d1 - 0.5 * f * d2 / d1;
    if (denom == 0.0) break;
    double step = f / denom;
    y -= step;
    if (y > -1.0) y = -1.0;
    if (std::fabs(step) < 1e-16 * std::fabs(y)) break;
  }
  return y;
}

double epsilon_for_static(const EpsilonQuery& q) {
  if (q.alpha < 0) throw DomainError("alpha must be >= 0");
  if (q.cap < 1) throw DomainError("cap must be >= 1");
  if (!(q.beta > 0.0 && q.beta < 1.0)) {
    throw DomainError("beta must lie in (0, 1)");
  }
  return -static_cast<double>(q.cap) * std::log(q.beta) /
         (static_cast<double>(q.alpha) + 0.5);
}

double epsilon_for_dynamic(const EpsilonQuery& q) {
  if (q.alpha < 0) throw DomainError("alpha must be >= 0");
  if (q.cap < 1) throw DomainError("cap must be >= 1");
  constexpr double kBetaMax = 0.18393972058572117;  // exp(-1)/2
  if (!(q.beta > 0.0 && q.beta <= kBetaMax)) {
    throw DomainError("beta must lie in (0, exp(-1)/2]");
  }
  double w = lambert_w_lower(-2.0 * q.beta * std::exp(-2.0));
  return static_cast<double>(q.cap) / (static_cast<double>(q.alpha) + 1.0) *
         (-2.0 - w);
}

double heuristic_epsilon(double alpha, int64_t cap) {
  if (!(alpha > 0)) throw DomainError("alpha must be positive");
  if (cap < 1) throw DomainError("cap must be >= 1");
  return std::sqrt(2.0) * static_cast<double>(cap) / alpha;
}

int64_t heuristic_tau(int64_t s, double epsilon, TauMode mode) {
  if (s < 0) throw DomainError("suppression standard must be >= 0");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  switch (mode) {
    case TauMode::kUnchanged:
      return s;
    case TauMode::kMinus: {
      long long v = round_half_up(static_cast<double>(s) - std::sqrt(2.0) / epsilon);
      return v < 0 ? 0 : v;
    }
    case TauMode::kPlus:
      return round_half_up(static_cast<double>(s) + std::sqrt(2.0) / epsilon);
  }
  throw ConfigError("unknown tau mode");
}

}  // namespace dpod

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

#ifndef DPOD_BOUNDS_HPP_
#define DPOD_BOUNDS_HPP_

#include <cstdint>

namespace dpod {

// Closed-form privacy/accuracy calculators for the capped, Laplace-noised,
// rounded and threshold-suppressed count release. All probabilities refer
// to a single off-diagonal cell with noise scale cap/epsilon.

struct TailQuery {
  int64_t alpha = 0;       // error bound, integer >= 0
  double epsilon = 1.0;    // privacy parameter, > 0
  int64_t cap = 1;         // per-person trip cap T, >= 1
  int64_t tau = 0;         // suppression threshold, >= 0
  int64_t cell_value = 0;  // non-private count M, >= 0
};

// P[released cell stays 0] given the thresholded non-private cell is 0,
// i.e. cell_value < tau:  1 - 0.5 exp(-eps/T (tau - 0.5 - M)).
double prob_suppression_preserved(const TailQuery& q);

// P[released cell stays nonzero] given cell_value >= tau:
//   1 - 0.5 exp(eps/T (tau + 0.5 - M)).
double prob_nonsuppression_preserved(const TailQuery& q);

// P[|released - true| > alpha] for a cell non-suppressed on both sides:
//   exp(-eps/T (alpha + 0.5)).
double prob_error_exceeds(int64_t alpha, double epsilon, int64_t cap);

// Same for the difference of two independent releases (trend estimation):
//   exp(-c) (c + 2) / 2 with c = eps/T (alpha + 1).
double prob_diff_error_exceeds(int64_t alpha, double epsilon, int64_t cap);

// Lower branch W_{-1} of the Lambert-W function on [-1/e, 0): the unique
// y <= -1 with y e^y = x. Bracketed bisection polished by Halley steps;
// residual |y e^y - x| <= 1e-12 across the domain.
double lambert_w_lower(double x);

struct EpsilonQuery {
  int64_t alpha = 0;  // tolerated error
  double beta = 0.05; // tolerated failure probability
  int64_t cap = 1;    // trip cap T
};

// Smallest epsilon with prob_error_exceeds <= beta:
//   -T ln(beta) / (alpha + 0.5), beta in (0, 1).
double epsilon_for_static(const EpsilonQuery& q);

// Smallest epsilon with prob_diff_error_exceeds <= beta:
//   T (alpha + 1)^{-1} (-2 - W_{-1}(-2 beta e^{-2})), beta in (0, e^{-1}/2].
double epsilon_for_dynamic(const EpsilonQuery& q);

// First-moment heuristic: epsilon >= sqrt(2) T / alpha.
double heuristic_epsilon(double alpha, int64_t cap);

enum class TauMode { kUnchanged, kMinus, kPlus };

// Adapts an existing suppression standard s to the noise scale:
// s, or round-half-up(s -/+ sqrt(2)/epsilon), clamped to >= 0.
int64_t heuristic_tau(int64_t s, double epsilon, TauMode mode);

}  // namespace dpod

#endif  // DPOD_BOUNDS_HPP_

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

#ifndef DPOD_SIR_HPP_
#define DPOD_SIR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpod/cdr.hpp"
#include "dpod/od_matrix.hpp"

namespace dpod {

enum class RecoveryForm {
  kPaperPrinted,  // dR = mu * I / N
  kPerCapita,     // dR = mu * I
};

struct SIRParams {
  double beta = 0.10;       // intra-region transmission rate per day
  double alpha_mix = 1.0;   // inter-region mixing ratio
  double mu = 0.04;         // recovery rate per day
  double dt = 1.0;          // Euler step, days
  double threshold = 0.20;  // prevalence trigger for decisions
  RecoveryForm recovery_form = RecoveryForm::kPaperPrinted;
};

struct SIRState {
  int day = 0;
  std::vector<double> s, i, r, n;

  int regions() const { return static_cast<int>(n.size()); }
};

// One explicit-Euler step with the day's mobility matrix. The infection
// flow couples regions through M I/N terms; dI is taken as -(dS + dR) so
// S + I + R stays exactly N per region. Compartments are clamped to
// [0, N] with any residual absorbed by I (then R, in degenerate
// parameterizations).
SIRState sir_step(const SIRState& state, const ODMatrix& m, const SIRParams& p);

// Seeds 1% of the origin region's population as infected on day 0 and
// steps through one matrix per day. Returns the full trajectory
// (length = matrices + 1).
std::vector<SIRState> simulate(int origin_region,
                               std::span<const ODMatrix> daily_matrices,
                               const PopulationVector& populations,
                               const SIRParams& params);

// Per-region, per-day binary intervention decisions.
struct DecisionSeries {
  int k = 0;
  int num_days = 0;
  std::vector<uint8_t> values;  // region-major

  DecisionSeries() = default;
  DecisionSeries(int k, int num_days)
      : k(k), num_days(num_days),
        values(static_cast<size_t>(k) * num_days, 0) {}

  uint8_t& at(int region, int day) {
    return values[static_cast<size_t>(region) * num_days + day];
  }
  uint8_t at(int region, int day) const {
    return values[static_cast<size_t>(region) * num_days + day];
  }
};

// Intervene when prevalence I/N reaches the threshold (inclusive).
DecisionSeries decide(std::span<const SIRState> trajectory, double threshold);

struct RegionScore {
  double accuracy = 0;
  std::optional<double> precision;  // absent when TP + FP == 0
  std::optional<double> recall;     // absent when TP + FN == 0
};

struct DecisionScore {
  std::vector<RegionScore> per_region;
  double accuracy_mean = 0, accuracy_std = 0;
  double precision_mean = 0, precision_std = 0;
  double recall_mean = 0, recall_std = 0;
  int precision_regions = 0;  // regions entering the precision average
  int recall_regions = 0;
};

// Scores private decisions against non-private ground truth per region;
// regions with undefined precision or recall are excluded from that
// metric's mean/std (population std).
DecisionScore score_decisions(const DecisionSeries& privatized,
                              const DecisionSeries& nonprivate);

}  // namespace dpod

#endif  // DPOD_SIR_HPP_

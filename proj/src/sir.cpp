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

#include "dpod/sir.hpp"

#include <cmath>

#include "dpod/error.hpp"

namespace dpod {

namespace {

double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

void check_state(const SIRState& state) {
  size_t k = state.n.size();
  if (state.s.size() != k || state.i.size() != k || state.r.size() != k) {
    throw DimensionError("SIR state vectors must share one length");
  }
  for (size_t j = 0; j < k; ++j) {
    if (!(state.n[j] > 0) || !std::isfinite(state.n[j])) {
      throw NumericError("region population must be positive and finite");
    }
    if (!std::isfinite(state.s[j]) || !std::isfinite(state.i[j]) ||
        !std::isfinite(state.r[j])) {
      throw NumericError("non-finite compartment value");
    }
  }
}

}  // namespace

SIRState sir_step(const SIRState& state, const ODMatrix& m, const SIRParams& p) {
  check_state(state);
  int k = state.regions();
  if (m.k != k) throw DimensionError("matrix size does not match state");
  if (!(p.dt > 0)) throw ConfigError("dt must be positive");
  if (p.beta < 0 || p.mu < 0) throw ConfigError("beta, mu must be >= 0");

  SIRState next = state;
  next.day = state.day + 1;
  for (int a = 0; a < k; ++a) {
    double coupling = 0;
    double row_sum = 0;
    for (int b = 0; b < k; ++b) {
      double flow = static_cast<double>(m.at(a, b));
      coupling += flow * state.i[b] / state.n[b];
      row_sum += flow;
    }
    double s = state.s[a], i = state.i[a], n = state.n[a];
    double ds = -p.beta * s * i / n -
                p.alpha_mix * p.beta * s * coupling / (n + row_sum);
    double dr = p.recovery_form == RecoveryForm::kPaperPrinted ? p.mu * i / n
                                                               : p.mu * i;
    double s_new = clamp(s + ds * p.dt, 0.0, n);
    double r_new = clamp(state.r[a] + dr * p.dt, 0.0, n);
    double i_new = n - s_new - r_new;
    if (i_new < 0) {  // only reachable with extreme mu * dt
      r_new += i_new;
      i_new = 0;
    }
    next.s[a] = s_new;
    next.i[a] = i_new;
    next.r[a] = r_new;
  }
  return next;
}

std::vector<SIRState> simulate(int origin_region,
                               std::span<const ODMatrix> daily_matrices,
                               const PopulationVector& populations,
                               const SIRParams& params) {
  int k = static_cast<int>(populations.counts.size());
  if (origin_region < 0 || origin_region >= k) {
    throw BoundsError("origin region out of bounds");
  }
  SIRState state;
  state.day = 0;
  state.n.resize(static_cast<size_t>(k));
  state.s.resize(static_cast<size_t>(k));
  state.i.assign(static_cast<size_t>(k), 0.0);
  state.r.assign(static_cast<size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) {
    double n = static_cast<double>(populations.counts[static_cast<size_t>(j)]);
    if (!(n > 0)) {
      throw NumericError("region " + std::to_string(j) +
                         " has non-positive population");
    }
    state.n[static_cast<size_t>(j)] = n;
    state.s[static_cast<size_t>(j)] = n;
  }
  state.i[static_cast<size_t>(origin_region)] =
      0.01 * state.n[static_cast<size_t>(origin_region)];
  state.s[static_cast<size_t>(origin_region)] -=
      state.i[static_cast<size_t>(origin_region)];

  std::vector<SIRState> trajectory;
  trajectory.reserve(daily_matrices.size() + 1);
  trajectory.push_back(state);
  for (const ODMatrix& m : daily_matrices) {
    if (m.k != k || m.level != populations.level) {
      throw DimensionError("daily matrix shape does not match populations");
    }
    trajectory.push_back(sir_step(trajectory.back(), m, params));
  }
  return trajectory;
}

DecisionSeries decide(std::span<const SIRState> trajectory, double threshold) {
  if (trajectory.empty()) throw ConfigError("decide: empty trajectory");
  int k = trajectory.front().regions();
  int days = static_cast<int>(trajectory.size());
  DecisionSeries series(k, days);
  for (int d = 0; d < days; ++d) {
    const SIRState& state = trajectory[static_cast<size_t>(d)];
    if (state.regions() != k) {
      throw DimensionError("trajectory states differ in region count");
    }
    for (int region = 0; region < k; ++region) {
      double prevalence = state.i[static_cast<size_t>(region)] /
                          state.n[static_cast<size_t>(region)];
      series.at(region, d) = prevalence >= threshold ? 1 : 0;
    }
  }
  return series;
}

namespace {

struct Moments {
  double mean = 0;
  double stddev = 0;
  int count = 0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  m.count = static_cast<int>(values.size());
  if (values.empty()) return m;
  double sum = 0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - m.mean) * (v - m.mean);
  m.stddev = std::sqrt(var / static_cast<double>(values.size()));
  return m;
}

}  // namespace

DecisionScore score_decisions(const DecisionSeries& privatized,
                              const DecisionSeries& nonprivate) {
  if (privatized.k != nonprivate.k || privatized.num_days != nonprivate.num_days) {
    throw DimensionError("decision series shapes differ");
  }
  DecisionScore score;
  std::vector<double> accuracies, precisions, recalls;
  for (int region = 0; region < privatized.k; ++region) {
    int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (int day = 0; day < privatized.num_days; ++day) {
      bool predicted = privatized.at(region, day) != 0;
      bool actual = nonprivate.at(region, day) != 0;
      if (predicted && actual) ++tp;
      else if (predicted && !actual) ++fp;
      else if (!predicted && actual) ++fn;
      else ++tn;
    }
    RegionScore rs;
    rs.accuracy = static_cast<double>(tp + tn) /
                  static_cast<double>(privatized.num_days);
    if (tp + fp > 0) {
      rs.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
      precisions.push_back(*rs.precision);
    }
    if (tp + fn > 0) {
      rs.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
      recalls.push_back(*rs.recall);
    }
    accuracies.push_back(rs.accuracy);
    score.per_region.push_back(rs);
  }
  Moments acc = moments(accuracies);
  Moments prec = moments(precisions);
  Moments rec = moments(recalls);
  score.accuracy_mean = acc.mean;
  score.accuracy_std = acc.stddev;
  score.precision_mean = prec.mean;
  score.precision_std = prec.stddev;
  score.recall_mean = rec.mean;
  score.recall_std = rec.stddev;
  score.precision_regions = prec.count;
  score.recall_regions = rec.count;
  return score;
}

}  // namespace dpod

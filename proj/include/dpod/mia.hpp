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

#ifndef DPOD_MIA_HPP_
#define DPOD_MIA_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpod/cdr.hpp"
#include "dpod/od_matrix.hpp"

namespace dpod {

// Membership inference against released daily matrices: per subscriber, a
// binary classifier predicts from the day's released counts whether that
// subscriber contributed a trip that day.

struct MiaInstance {
  int day = 0;
  std::vector<double> features;  // k*k counts, optionally + 7 weekday bits
  bool label = false;            // subscriber "in" the matrix that day
};

// First ceil(d/2) days train, the rest test.
inline int train_day_count(int num_days) { return (num_days + 1) / 2; }

// Labels come from the subscriber's raw trips; features from the released
// matrices handed in per phase (private or non-private per setting). Every
// day in [0, num_days) must be covered by its phase's span.
std::pair<std::vector<MiaInstance>, std::vector<MiaInstance>> build_instances(
    std::span<const TripRecord> trips, std::span<const ODMatrix> train_source,
    std::span<const ODMatrix> test_source, const std::string& subscriber,
    int num_days, bool weekday_features);

// Uniform sample (without replacement) of subscribers with at least
// min_trips trips in each of the train and test periods. When fewer are
// eligible than requested, returns all of them and sets *saturated.
std::vector<std::string> sample_targets(std::span<const TripRecord> trips,
                                        int count, int min_trips, int num_days,
                                        uint64_t seed, bool* saturated);

// Keeps all positives and downsamples negatives to match (all negatives if
// fewer). Returns nullopt when there are no positives (skip signal).
std::optional<std::vector<MiaInstance>> balance(
    std::span<const MiaInstance> instances, uint64_t seed);

// L1-regularized logistic regression fit by proximal gradient (FISTA),
// penalty chosen by mean validation AUC over contiguous-in-time folds.
// Features are standardized with training statistics; constant features
// are dropped. Returns nullopt when labels are degenerate.
struct LogRegModel {
  std::vector<int> kept;           // feature indices surviving variance filter
  std::vector<double> mean, scale; // per kept feature
  std::vector<double> weights;     // in the standardized space
  double intercept = 0;
  double lambda = 0;

  double score(std::span<const double> features) const;
};

struct LogRegOptions {
  int cv_folds = 3;
  std::vector<double> penalty_grid = {1e-3, 1e-2, 1e-1, 1.0};
  int max_iterations = 2000;
  double tolerance = 1e-6;
};

std::optional<LogRegModel> train_logreg_l1(std::span<const MiaInstance> train,
                                           const LogRegOptions& options);

// Rank-based (Mann-Whitney) AUC with ties counted 1/2. Returns nullopt
// when only one class is present.
std::optional<double> auc(std::span<const double> scores,
                          std::span<const uint8_t> labels);

struct MiaCorpus {
  std::vector<TripRecord> trips;     // single admin level
  std::vector<ODMatrix> nonprivate;  // one matrix per day, ascending
  int level = 2;
  int k = 0;
  int num_days = 0;
};

struct MiaConfig {
  int target_count = 100;
  int min_trips = 10;
  uint64_t seed = 0;
  int cap = 1;
  int64_t tau = 15;
  std::vector<double> epsilons;  // private-release settings to evaluate
  bool weekday_variants = true;
  LogRegOptions logreg;
};

struct MiaRow {
  std::string train_source;  // "nonprivate" or "eps=<value>"
  std::string test_source;
  bool weekday = false;
  double mean_auc = 0;
  int evaluated = 0;
  int skipped = 0;
  std::vector<double> per_subscriber_auc;
};

struct MiaResult {
  std::vector<std::string> targets;
  bool saturated = false;
  std::vector<MiaRow> rows;
};

// Runs the attack settings of the release study: train/test both
// non-private, both private at each epsilon, and non-private training with
// private testing, each with and without weekday indicators.
MiaResult run_attack(const MiaCorpus& corpus, const MiaConfig& config);

}  // namespace dpod

#endif  // DPOD_MIA_HPP_

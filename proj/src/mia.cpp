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

#include "dpod/mia.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "dpod/dp.hpp"
#include "dpod/error.hpp"
#include "dpod/rng.hpp"

namespace dpod {

namespace {

constexpr uint64_t kTagSample = 0x534du;
constexpr uint64_t kTagBalanceTrain = 0x4254u;
constexpr uint64_t kTagBalanceTest = 0x4245u;
constexpr uint64_t kTagRelease = 0x524cu;

const ODMatrix& matrix_for_day(std::span<const ODMatrix> source, int day) {
  for (const ODMatrix& m : source) {
    if (m.day == day) return m;
  }
  throw ConfigError("mia: no feature matrix for day " + std::to_string(day));
}

std::vector<double> make_features(const ODMatrix& m, int day, bool weekday) {
  std::vector<double> f;
  f.reserve(m.counts.size() + (weekday ? 7 : 0));
  for (int64_t v : m.counts) f.push_back(static_cast<double>(v));
  if (weekday) {
    for (int w = 0; w < 7; ++w) f.push_back(w == day % 7 ? 1.0 : 0.0);
  }
  return f;
}

}  // namespace

std::pair<std::vector<MiaInstance>, std::vector<MiaInstance>> build_instances(
    std::span<const TripRecord> trips, std::span<const ODMatrix> train_source,
    std::span<const ODMatrix> test_source, const std::string& subscriber,
    int num_days, bool weekday_features) {
  if (num_days < 2) throw ConfigError("mia: need at least 2 days");
  std::unordered_set<int> active;
  for (const TripRecord& t : trips) {
    if (t.subscriber == subscriber) active.insert(t.day);
  }
  int split = train_day_count(num_days);
  std::vector<MiaInstance> train, test;
  train.reserve(static_cast<size_t>(split));
  test.reserve(static_cast<size_t>(num_days - split));
  for (int day = 0; day < num_days; ++day) {
    bool is_train = day < split;
    const ODMatrix& m =
        matrix_for_day(is_train ? train_source : test_source, day);
    MiaInstance inst;
    inst.day = day;
    inst.features = make_features(m, day, weekday_features);
    inst.label = active.count(day) > 0;
    (is_train ? train : test).push_back(std::move(inst));
  }
  return {std::move(train), std::move(test)};
}

std::vector<std::string> sample_targets(std::span<const TripRecord> trips,
                                        int count, int min_trips, int num_days,
                                        uint64_t seed, bool* saturated) {
  if (count < 1) throw ConfigError("mia: target count must be >= 1");
  int split = train_day_count(num_days);
  std::unordered_map<std::string, std::pair<int64_t, int64_t>> totals;
  for (const TripRecord& t : trips) {
    auto& [train_trips, test_trips] = totals[t.subscriber];
    (t.day < split ? train_trips : test_trips) += 1;
  }
  std::vector<std::string> eligible;
  for (const auto& [subscriber, counts] : totals) {
    if (counts.first >= min_trips && counts.second >= min_trips) {
      eligible.push_back(subscriber);
    }
  }
  std::sort(eligible.begin(), eligible.end());
  if (saturated != nullptr) *saturated = false;
  if (eligible.size() <= static_cast<size_t>(count)) {
    if (saturated != nullptr && eligible.size() < static_cast<size_t>(count)) {
      *saturated = true;
    }
    return eligible;
  }
  Rng rng(derive_key({seed, kTagSample}));
  for (size_t i = 0; i < static_cast<size_t>(count); ++i) {
    size_t j = i + static_cast<size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(static_cast<size_t>(count));
  return eligible;
}

std::optional<std::vector<MiaInstance>> balance(
    std::span<const MiaInstance> instances, uint64_t seed) {
  std::vector<uint32_t> pos, neg;
  for (uint32_t i = 0; i < instances.size(); ++i) {
    (instances[i].label ? pos : neg).push_back(i);
  }
  if (pos.empty()) return std::nullopt;
  if (neg.size() > pos.size()) {
    Rng rng(seed);
    for (size_t i = 0; i < pos.size(); ++i) {
      size_t j = i + static_cast<size_t>(rng.below(neg.size() - i));
      std::swap(neg[i], neg[j]);
    }
    neg.resize(pos.size());
  }
  std::vector<uint32_t> keep;
  keep.reserve(pos.size() + neg.size());
  keep.insert(keep.end(), pos.begin(), pos.end());
  keep.insert(keep.end(), neg.begin(), neg.end());
  std::sort(keep.begin(), keep.end());  // preserve time order
  std::vector<MiaInstance> out;
  out.reserve(keep.size());
  for (uint32_t i : keep) out.push_back(instances[i]);
  return out;
}

std::optional<double> auc(std::span<const double> scores,
                          std::span<const uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw DimensionError("auc: scores and labels differ in length");
  }
  size_t n = scores.size();
  size_t n_pos = 0;
  for (uint8_t y : labels) n_pos += y ? 1 : 0;
  size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based average
    for (size_t t = i; t < j; ++t) {
      if (labels[order[t]]) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  double u = rank_sum_pos -
             static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double LogRegModel::score(std::span<const double> features) const {
  double z = intercept;
  for (size_t j = 0; j < kept.size(); ++j) {
    double x = (features[static_cast<size_t>(kept[j])] - mean[j]) / scale[j];
    z += weights[j] * x;
  }
  return z;
}

namespace {

struct Design {
  Eigen::MatrixXd x;  // n x d standardized
  Eigen::VectorXd y;  // 0/1
};

// FISTA on logistic loss + lambda * ||w||_1; intercept unpenalized.
struct FitResult {
  Eigen::VectorXd w;
  double b = 0;
};

FitResult fit_l1_logistic(const Design& d, double lambda, int max_iterations,
                          double tolerance) {
  const auto n = d.x.rows();
  const auto p = d.x.cols();
  FitResult fit;
  fit.w = Eigen::VectorXd::Zero(p);
  fit.b = 0;

  // Lipschitz bound for the logistic gradient: sigma_max^2 / (4n). The
  // intercept column of ones adds at most n to sigma_max^2.
  double sigma_sq = static_cast<double>(n);
  {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(p);
    v.normalize();
    double norm = 0.0;
    for (int it = 0; it < 20; ++it) {
      Eigen::VectorXd u = d.x.transpose() * (d.x * v);
      norm = u.norm();
      if (norm == 0) break;
      v = u / norm;
    }
    sigma_sq += norm;
  }
  double step = 4.0 * static_cast<double>(n) / sigma_sq;

  Eigen::VectorXd w_prev = fit.w;
  Eigen::VectorXd z = fit.w;
  double b_prev = fit.b, zb = fit.b;
  double t_prev = 1.0;

  auto soft = [](double v, double thr) {
    if (v > thr) return v - thr;
    if (v < -thr) return v + thr;
    return 0.0;
  };

  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::VectorXd margin = d.x * z;
    margin.array() += zb;
    Eigen::VectorXd prob =
        (1.0 / (1.0 + (-margin.array()).exp())).matrix();
    Eigen::VectorXd resid = prob - d.y;
    Eigen::VectorXd grad = d.x.transpose() * resid / static_cast<double>(n);
    double grad_b = resid.sum() / static_cast<double>(n);

    Eigen::VectorXd w_new(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      w_new[j] = soft(z[j] - step * grad[j], step * lambda);
    }
    double b_new = zb - step * grad_b;

    double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
    double momentum = (t_prev - 1.0) / t_new;
    z = w_new + momentum * (w_new - w_prev);
    zb = b_new + momentum * (b_new - b_prev);

    double move = std::max((w_new - w_prev).lpNorm<Eigen::Infinity>(),
                           std::fabs(b_new - b_prev));
    w_prev = w_new;
    b_prev = b_new;
    t_prev = t_new;
    if (move / step <= tolerance) break;
  }
  fit.w = w_prev;
  fit.b = b_prev;
  return fit;
}

Design standardize(std::span<const MiaInstance> instances,
                   const std::vector<int>& kept,
                   const std::vector<double>& mean,
                   const std::vector<double>& scale) {
  Design d;
  d.x.resize(static_cast<Eigen::Index>(instances.size()),
             static_cast<Eigen::Index>(kept.size()));
  d.y.resize(static_cast<Eigen::Index>(instances.size()));
  for (size_t i = 0; i < instances.size(); ++i) {
    const MiaInstance& inst = instances[i];
    for (size_t j = 0; j < kept.size(); ++j) {
      d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (inst.features[static_cast<size_t>(kept[j])] - mean[j]) / scale[j];
    }
    d.y[static_cast<Eigen::Index>(i)] = inst.label ? 1.0 : 0.0;
  }
  return d;
}

}  // namespace

std::optional<LogRegModel> train_logreg_l1(std::span<const MiaInstance> train,
                                           const LogRegOptions& options) {
  if (train.empty()) return std::nullopt;
  size_t n_pos = 0;
  for (const MiaInstance& inst : train) n_pos += inst.label ? 1 : 0;
  if (n_pos == 0 || n_pos == train.size()) return std::nullopt;

  size_t dim = train.front().features.size();
  for (const MiaInstance& inst : train) {
    if (inst.features.size() != dim) {
      throw DimensionError("mia: inconsistent feature lengths");
    }
  }

  // Standardization from the training split; constant features dropped.
  LogRegModel model;
  for (size_t j = 0; j < dim; ++j) {
    double sum = 0;
    for (const MiaInstance& inst : train) sum += inst.features[j];
    double mean = sum / static_cast<double>(train.size());
    double var = 0;
    for (const MiaInstance& inst : train) {
      double d = inst.features[j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(train.size());
    if (var <= 1e-18) continue;
    model.kept.push_back(static_cast<int>(j));
    model.mean.push_back(mean);
    model.scale.push_back(std::sqrt(var));
  }
  if (model.kept.empty()) return std::nullopt;

  Design full = standardize(train, model.kept, model.mean, model.scale);

  // Contiguous-in-time folds over the (day-ordered) training sequence.
  int folds = options.cv_folds;
  double best_lambda = options.penalty_grid.empty() ? 0.0 : options.penalty_grid[0];
  double best_auc = -1;
  if (options.penalty_grid.size() > 1 &&
      static_cast<int>(train.size()) >= 2 * folds) {
    for (double lambda : options.penalty_grid) {
      double auc_sum = 0;
      for (int f = 0; f < folds; ++f) {
        size_t lo = train.size() * static_cast<size_t>(f) / static_cast<size_t>(folds);
        size_t hi =
            train.size() * static_cast<size_t>(f + 1) / static_cast<size_t>(folds);
        std::vector<MiaInstance> fit_set, val_set;
        for (size_t i = 0; i < train.size(); ++i) {
          (i >= lo && i < hi ? val_set : fit_set).push_back(train[i]);
        }
        Design dfit = standardize(fit_set, model.kept, model.mean, model.scale);
        bool has_pos = (dfit.y.array() > 0.5).any();
        bool has_neg = (dfit.y.array() < 0.5).any();
        if (!has_pos || !has_neg || val_set.empty()) {
          auc_sum += 0.5;
          continue;
        }
        FitResult fr = fit_l1_logistic(dfit, lambda, options.max_iterations,
                                       options.tolerance);
        std::vector<double> scores;
        std::vector<uint8_t> labels;
        for (const MiaInstance& inst : val_set) {
          double z = fr.b;
          for (size_t j = 0; j < model.kept.size(); ++j) {
            z += fr.w[static_cast<Eigen::Index>(j)] *
                 (inst.features[static_cast<size_t>(model.kept[j])] -
                  model.mean[j]) /
                 model.scale[j];
          }
          scores.push_back(z);
          labels.push_back(inst.label ? 1 : 0);
        }
        auto fold_auc = auc(scores, labels);
        auc_sum += fold_auc.value_or(0.5);
      }
      double mean_auc = auc_sum / static_cast<double>(folds);
      // Ties prefer the larger (sparser) penalty.
      if (mean_auc > best_auc + 1e-12 ||
          (std::fabs(mean_auc - best_auc) <= 1e-12 && lambda > best_lambda)) {
        best_auc = mean_auc;
        best_lambda = lambda;
      }
    }
  }

  FitResult fr =
      fit_l1_logistic(full, best_lambda, options.max_iterations, options.tolerance);
  model.weights.assign(fr.w.data(), fr.w.data() + fr.w.size());
  model.intercept = fr.b;
  model.lambda = best_lambda;
  return model;
}

MiaResult run_attack(const MiaCorpus& corpus, const MiaConfig& config) {
  if (corpus.num_days < 4) throw ConfigError("mia: corpus must cover >= 4 days");
  if (static_cast<int>(corpus.nonprivate.size()) != corpus.num_days) {
    throw ConfigError("mia: need one matrix per day");
  }

  MiaResult result;
  result.targets = sample_targets(corpus.trips, config.target_count,
                                  config.min_trips, corpus.num_days, config.seed,
                                  &result.saturated);

  // One private release per epsilon, shared across subscribers.
  std::vector<std::vector<ODMatrix>> private_releases;
  for (size_t e = 0; e < config.epsilons.size(); ++e) {
    std::vector<ODMatrix> release;
    release.reserve(corpus.nonprivate.size());
    uint64_t release_seed = derive_key({config.seed, kTagRelease, e});
    for (const ODMatrix& m : corpus.nonprivate) {
      release.push_back(
          privatize(m, config.epsilons[e], config.cap, config.tau, release_seed)
              .matrix);
    }
    private_releases.push_back(std::move(release));
  }

  struct Setting {
    std::string train_source, test_source;
    std::span<const ODMatrix> train;
    std::span<const ODMatrix> test;
  };
  std::vector<Setting> settings;
  settings.push_back({"nonprivate", "nonprivate", corpus.nonprivate,
                      corpus.nonprivate});
  for (size_t e = 0; e < config.epsilons.size(); ++e) {
    std::string label = "eps=" + std::to_string(config.epsilons[e]);
    settings.push_back({"nonprivate", label, corpus.nonprivate,
                        private_releases[e]});
    settings.push_back({label, label, private_releases[e], private_releases[e]});
  }

  std::vector<bool> weekday_options = {false};
  if (config.weekday_variants) weekday_options.push_back(true);

  // Per-subscriber trips, once.
  std::unordered_map<std::string, std::vector<TripRecord>> by_subscriber;
  for (const TripRecord& t : corpus.trips) {
    by_subscriber[t.subscriber].push_back(t);
  }

  for (const Setting& setting : settings) {
    for (bool weekday : weekday_options) {
      MiaRow row;
      row.train_source = setting.train_source;
      row.test_source = setting.test_source;
      row.weekday = weekday;
      for (const std::string& subscriber : result.targets) {
        const auto& trips = by_subscriber[subscriber];
        auto [train_inst, test_inst] =
            build_instances(trips, setting.train, setting.test, subscriber,
                            corpus.num_days, weekday);
        uint64_t sub_key = hash_str(subscriber);
        auto train_bal =
            balance(train_inst, derive_key({config.seed, kTagBalanceTrain, sub_key}));
        auto test_bal =
            balance(test_inst, derive_key({config.seed, kTagBalanceTest, sub_key}));
        if (!train_bal || !test_bal) {
          ++row.skipped;
          continue;
        }
        auto model = train_logreg_l1(*train_bal, config.logreg);
        if (!model) {
          ++row.skipped;
          continue;
        }
        std::vector<double> scores;
        std::vector<uint8_t> labels;
        scores.reserve(test_bal->size());
        for (const MiaInstance& inst : *test_bal) {
          scores.push_back(model->score(inst.features));
          labels.push_back(inst.label ? 1 : 0);
        }
        auto test_auc = auc(scores, labels);
        if (!test_auc) {
          ++row.skipped;
          continue;
        }
        row.per_subscriber_auc.push_back(*test_auc);
        ++row.evaluated;
      }
      if (row.evaluated > 0) {
        double sum = 0;
        for (double a : row.per_subscriber_auc) sum += a;
        row.mean_auc = sum / static_cast<double>(row.evaluated);
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace dpod

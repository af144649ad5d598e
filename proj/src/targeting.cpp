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

#include "dpod/targeting.hpp"

#include <algorithm>
#include <cmath>

#include "dpod/error.hpp"

namespace dpod {

void ShockWindow::validate(int k) const {
  if (affected.empty()) throw ConfigError("shock window: no affected regions");
  if (day_last < day_first) throw ConfigError("shock window: empty day range");
  for (int region : affected) {
    if (region < 0 || region >= k) {
      throw BoundsError("affected region " + std::to_string(region) +
                        " out of bounds");
    }
  }
}

namespace {

// Matrix for a given day within the span, or an input error.
const ODMatrix& matrix_for_day(std::span<const ODMatrix> daily, int day,
                               int level) {
  for (const ODMatrix& m : daily) {
    if (m.day == day && m.level == level) return m;
  }
  throw ConfigError("no matrix for day " + std::to_string(day));
}

}  // namespace

int64_t total_out_migration(std::span<const ODMatrix> daily,
                            const ShockWindow& window) {
  if (daily.empty()) throw ConfigError("total_out_migration: no matrices");
  window.validate(daily.front().k);
  int64_t total = 0;
  for (int day = window.day_first; day <= window.day_last; ++day) {
    const ODMatrix& m = matrix_for_day(daily, day, window.level);
    for (int a : window.affected) {
      for (int b = 0; b < m.k; ++b) {
        if (window.affected.count(b)) continue;
        total += m.at(a, b);
      }
    }
  }
  return total;
}

double percent_error(double private_total, double nonprivate_total) {
  if (!(nonprivate_total > 0)) {
    throw DomainError("percent_error: nonprivate total must be positive");
  }
  return std::fabs(private_total - nonprivate_total) / nonprivate_total;
}

std::vector<int> top_k_regions(const ODMatrix& m, const ShockWindow& window,
                               int k) {
  if (k < 1) throw ConfigError("top_k_regions: k must be >= 1");
  window.validate(m.k);
  std::vector<std::pair<int64_t, int>> inflows;
  for (int b = 0; b < m.k; ++b) {
    if (window.affected.count(b)) continue;
    int64_t inflow = 0;
    for (int a : window.affected) inflow += m.at(a, b);
    if (inflow > 0) inflows.emplace_back(inflow, b);
  }
  std::sort(inflows.begin(), inflows.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  if (inflows.size() > static_cast<size_t>(k)) inflows.resize(static_cast<size_t>(k));
  std::vector<int> regions;
  regions.reserve(inflows.size());
  for (const auto& [inflow, region] : inflows) regions.push_back(region);
  return regions;
}

double topk_accuracy(std::span<const ODMatrix> privatized,
                     std::span<const ODMatrix> nonprivate,
                     const ShockWindow& window, int k) {
  if (k < 1) throw ConfigError("topk_accuracy: k must be >= 1");
  int64_t matches = 0;
  for (int day = window.day_first; day <= window.day_last; ++day) {
    const ODMatrix& mp = matrix_for_day(privatized, day, window.level);
    const ODMatrix& mn = matrix_for_day(nonprivate, day, window.level);
    if (mp.k != mn.k) throw DimensionError("matrix sizes differ");
    std::vector<int> top_p = top_k_regions(mp, window, k);
    std::vector<int> top_n = top_k_regions(mn, window, k);
    std::set<int> pset(top_p.begin(), top_p.end());
    for (int region : top_n) {
      if (pset.count(region)) ++matches;
    }
  }
  return static_cast<double>(matches) /
         (static_cast<double>(window.num_days()) * static_cast<double>(k));
}

}  // namespace dpod

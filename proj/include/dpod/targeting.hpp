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

#ifndef DPOD_TARGETING_HPP_
#define DPOD_TARGETING_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "dpod/od_matrix.hpp"

namespace dpod {

// Post-shock observation window: affected regions and the consecutive days
// over which out-migration is measured.
struct ShockWindow {
  std::set<int> affected;
  int day_first = 0;
  int day_last = 0;  // inclusive
  int level = 2;

  int num_days() const { return day_last - day_first + 1; }
  void validate(int k) const;
};

// Sum over window days of trips from affected regions to the outside.
int64_t total_out_migration(std::span<const ODMatrix> daily,
                            const ShockWindow& window);

// |private - nonprivate| / nonprivate; nonprivate must be positive.
double percent_error(double private_total, double nonprivate_total);

// Destinations outside the affected set ranked by inflow from it,
// descending, ties by ascending region id; zero-inflow destinations are
// dropped, so fewer than k entries may return.
std::vector<int> top_k_regions(const ODMatrix& m, const ShockWindow& window,
                               int k);

// Mean over window days of |top-k(private) intersect top-k(nonprivate)| / k.
double topk_accuracy(std::span<const ODMatrix> privatized,
                     std::span<const ODMatrix> nonprivate,
                     const ShockWindow& window, int k);

}  // namespace dpod

#endif  // DPOD_TARGETING_HPP_

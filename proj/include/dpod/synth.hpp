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

#ifndef DPOD_SYNTH_HPP_
#define DPOD_SYNTH_HPP_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dpod/cdr.hpp"

namespace dpod {

// Synthetic CDR corpus: k admin-2 regions, each split into two admin-3
// regions, two towers per admin-3 region. Subscribers live at a home
// region and make gravity-weighted round trips; night events stay at home
// towers so home inference recovers the ground truth.
struct SynthConfig {
  int k = 5;                 // admin-2 region count (admin-3 count is 2k)
  int num_days = 7;
  int num_subscribers = 1000;
  // Expected admin-3 inter-region trips per subscriber per day.
  double mobility_intensity = 0.5;
  uint64_t seed = 0;
};

TowerMap synth_tower_map(const SynthConfig& cfg);

// Tower CSV rows in id order, for writing alongside the events.
std::vector<std::pair<std::string, TowerMap::Region>> synth_tower_rows(
    const SynthConfig& cfg);

// Streams events grouped by subscriber, time-ordered within each
// subscriber. Bit-for-bit reproducible for a fixed config. Day 0 is
// 2020-01-01 on the local clock.
void gen_synthetic(const SynthConfig& cfg,
                   const std::function<void(const CdrEvent&)>& sink);

std::pair<std::vector<CdrEvent>, TowerMap> gen_synthetic(const SynthConfig& cfg);

}  // namespace dpod

#endif  // DPOD_SYNTH_HPP_

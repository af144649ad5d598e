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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "dpod/cdr.hpp"
#include "dpod/datetime.hpp"
#include "dpod/error.hpp"
#include "dpod/synth.hpp"

using namespace dpod;

TEST_CASE("synthetic corpus is reproducible byte for byte") {
  SynthConfig cfg;
  cfg.k = 5;
  cfg.num_days = 7;
  cfg.num_subscribers = 1000;
  cfg.mobility_intensity = 0.5;
  cfg.seed = 42;

  auto render = [&]() {
    std::ostringstream out;
    gen_synthetic(cfg, [&](const CdrEvent& ev) {
      out << ev.timestamp << ',' << ev.caller_id << ',' << ev.callee_id << ','
          << ev.duration_s << ',' << ev.tower_id << '\n';
    });
    return out.str();
  };
  std::string first = render();
  std::string second = render();
  CHECK(first == second);
  CHECK_FALSE(first.empty());

  SynthConfig other = cfg;
  other.seed = 43;
  std::ostringstream out;
  gen_synthetic(other, [&](const CdrEvent& ev) { out << ev.timestamp << ','; });
  CHECK(first != out.str());
}

TEST_CASE("synthetic events satisfy the schema invariants") {
  SynthConfig cfg;
  cfg.k = 4;
  cfg.num_days = 5;
  cfg.num_subscribers = 300;
  cfg.mobility_intensity = 1.0;
  cfg.seed = 9;
  auto [events, map] = gen_synthetic(cfg);
  CHECK(map.region_count(2) == 4);
  CHECK(map.region_count(3) == 8);
  int64_t day0 = days_from_civil(2020, 1, 1);
  for (const CdrEvent& ev : events) {
    REQUIRE(map.find(ev.tower_id) != nullptr);
    CHECK(ev.duration_s >= 0);
    CHECK_FALSE(ev.caller_id.empty());
    int64_t day = civil_day_of(ev.timestamp) - day0;
    CHECK(day >= 0);
    CHECK(day < cfg.num_days);
  }
}

TEST_CASE("zero mobility produces zero trips") {
  SynthConfig cfg;
  cfg.k = 4;
  cfg.num_days = 6;
  cfg.num_subscribers = 400;
  cfg.mobility_intensity = 0.0;
  cfg.seed = 3;
  auto [events, map] = gen_synthetic(cfg);
  CHECK(extract_trips(events, map, 2).empty());
  CHECK(extract_trips(events, map, 3).empty());
}

TEST_CASE("home inference recovers night anchors and populations sum") {
  SynthConfig cfg;
  cfg.k = 5;
  cfg.num_days = 10;
  cfg.num_subscribers = 2000;
  cfg.mobility_intensity = 0.6;
  cfg.seed = 17;
  auto [events, map] = gen_synthetic(cfg);
  auto homes = infer_homes(events, map, 3);
  // Nearly every subscriber has a night event across 10 days at p = 0.85.
  CHECK(homes.size() > 1900);
  PopulationVector pop = regional_populations(homes, map.region_count(3), 3);
  int64_t total = 0;
  for (int64_t c : pop.counts) total += c;
  CHECK(total == static_cast<int64_t>(homes.size()));
}

TEST_CASE("mean trips per subscriber tracks the configured intensity") {
  // Streaming count over the full-scale corpus; admin-3 crossings per
  // consecutive same-subscriber events, which is what extract_trips emits.
  SynthConfig cfg;
  cfg.k = 34;
  cfg.num_days = 305;
  cfg.num_subscribers = 100000;
  cfg.mobility_intensity = 0.1;
  cfg.seed = 7;
  TowerMap map = synth_tower_map(cfg);

  std::string current;
  int prev_region = -1;
  int64_t crossings = 0;
  gen_synthetic(cfg, [&](const CdrEvent& ev) {
    int region = map.find(ev.tower_id)->admin3;
    if (ev.caller_id != current) {
      current = ev.caller_id;
      prev_region = region;
      return;
    }
    if (region != prev_region) ++crossings;
    prev_region = region;
  });
  double mean_per_subscriber =
      static_cast<double>(crossings) / cfg.num_subscribers;
  double target = cfg.mobility_intensity * cfg.num_days;  // 30.5
  CHECK(mean_per_subscriber > 0.8 * target);
  CHECK(mean_per_subscriber < 1.2 * target);
}

TEST_CASE("config validation") {
  SynthConfig cfg;
  cfg.k = 1;
  CHECK_THROWS_AS(synth_tower_map(cfg), ConfigError);
  cfg.k = 3;
  cfg.num_subscribers = 0;
  CHECK_THROWS_AS(gen_synthetic(cfg, [](const CdrEvent&) {}), ConfigError);
}

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

#include "dpod/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dpod/datetime.hpp"
#include "dpod/error.hpp"
#include "dpod/rng.hpp"

namespace dpod {

namespace {

// Domain-separation tags for key derivation.
constexpr uint64_t kTagRegion = 0x5259u;     // region weights/centroids
constexpr uint64_t kTagSubscriber = 0x5355u; // per-subscriber home
constexpr uint64_t kTagDay = 0x4441u;        // per-(subscriber, day) schedule

constexpr int64_t kEpochDay = 18262;  // 2020-01-01 as days since 1970-01-01

constexpr int kMaxRoundTrips = 8;

struct Geography {
  int k3;
  std::vector<double> weight;      // population attraction per admin-3 region
  std::vector<double> cx, cy;      // centroids in the unit square
  std::vector<double> cum;         // k3 x k3 row-wise cumulative kernel
  std::vector<double> home_cum;    // cumulative home-assignment weights
};

Geography build_geography(const SynthConfig& cfg) {
  Geography g;
  g.k3 = 2 * cfg.k;
  g.weight.resize(g.k3);
  g.cx.resize(g.k3);
  g.cy.resize(g.k3);
  for (int r = 0; r < g.k3; ++r) {
    Rng rng(derive_key({cfg.seed, kTagRegion, static_cast<uint64_t>(r)}));
    // Heavy-tailed-ish weights keep some regions small, like real data.
    g.weight[r] = 0.05 - std::log(1.0 - rng.next_unit());
    g.cx[r] = rng.next_unit();
    g.cy[r] = rng.next_unit();
  }
  double wsum = 0;
  g.home_cum.resize(g.k3);
  for (int r = 0; r < g.k3; ++r) {
    wsum += g.weight[r];
    g.home_cum[r] = wsum;
  }
  for (double& v : g.home_cum) v /= wsum;

  // Gravity kernel: flow from i to j proportional to w_i w_j / d^2.
  g.cum.assign(static_cast<size_t>(g.k3) * g.k3, 0.0);
  for (int i = 0; i < g.k3; ++i) {
    double acc = 0;
    for (int j = 0; j < g.k3; ++j) {
      double f = 0;
      if (j != i) {
        double dx = g.cx[i] - g.cx[j];
        double dy = g.cy[i] - g.cy[j];
        f = g.weight[i] * g.weight[j] / (dx * dx + dy * dy + 1e-3);
      }
      acc += f;
      g.cum[static_cast<size_t>(i) * g.k3 + j] = acc;
    }
    for (int j = 0; j < g.k3; ++j) {
      g.cum[static_cast<size_t>(i) * g.k3 + j] /= acc;
    }
  }
  return g;
}

int sample_cum(const double* cum, int n, double u) {
  const double* end = cum + n;
  const double* it = std::lower_bound(cum, end, u);
  int idx = static_cast<int>(it - cum);
  return idx >= n ? n - 1 : idx;
}

std::string subscriber_id(int s) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%07d", s);
  return buf;
}

std::string tower_id(int t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "t%05d", t);
  return buf;
}

void check_config(const SynthConfig& cfg) {
  if (cfg.k < 2) throw ConfigError("synth: k must be >= 2");
  if (cfg.num_days < 1) throw ConfigError("synth: num_days must be >= 1");
  if (cfg.num_subscribers < 1) {
    throw ConfigError("synth: num_subscribers must be >= 1");
  }
  if (cfg.mobility_intensity < 0) {
    throw ConfigError("synth: mobility_intensity must be >= 0");
  }
}

}  // namespace

TowerMap synth_tower_map(const SynthConfig& cfg) {
  check_config(cfg);
  TowerMap map;
  int k3 = 2 * cfg.k;
  for (int r = 0; r < k3; ++r) {
    map.add(tower_id(2 * r), r / 2, r);
    map.add(tower_id(2 * r + 1), r / 2, r);
  }
  map.declare_counts(cfg.k, k3);
  return map;
}

std::vector<std::pair<std::string, TowerMap::Region>> synth_tower_rows(
    const SynthConfig& cfg) {
  check_config(cfg);
  std::vector<std::pair<std::string, TowerMap::Region>> rows;
  int k3 = 2 * cfg.k;
  rows.reserve(static_cast<size_t>(2) * k3);
  for (int r = 0; r < k3; ++r) {
    rows.emplace_back(tower_id(2 * r), TowerMap::Region{r / 2, r});
    rows.emplace_back(tower_id(2 * r + 1), TowerMap::Region{r / 2, r});
  }
  return rows;
}

void gen_synthetic(const SynthConfig& cfg,
                   const std::function<void(const CdrEvent&)>& sink) {
  check_config(cfg);
  Geography geo = build_geography(cfg);

  CdrEvent ev;
  auto emit = [&](int day, int sec_of_day, int subscriber, int region, Rng& rng) {
    int64_t day_abs = kEpochDay + day;
    ev.timestamp = day_abs * 86400 + sec_of_day;
    ev.caller_id = subscriber_id(subscriber);
    ev.callee_id =
        subscriber_id(static_cast<int>(rng.below(static_cast<uint64_t>(cfg.num_subscribers))));
    ev.duration_s = static_cast<int64_t>(rng.below(600));
    ev.tower_id = tower_id(2 * region + static_cast<int>(rng.below(2)));
    sink(ev);
  };

  std::vector<std::pair<int, int>> plan;  // (second of day, region)
  for (int s = 0; s < cfg.num_subscribers; ++s) {
    Rng home_rng(derive_key({cfg.seed, kTagSubscriber, static_cast<uint64_t>(s)}));
    int home = sample_cum(geo.home_cum.data(), geo.k3, home_rng.next_unit());

    for (int day = 0; day < cfg.num_days; ++day) {
      Rng rng(derive_key({cfg.seed, kTagDay, static_cast<uint64_t>(s),
                          static_cast<uint64_t>(day)}));
      plan.clear();

      // Round trips keep each day's itinerary anchored at home, so one
      // round trip is exactly two region crossings and days never leak
      // crossings into each other.
      int round_trips = rng.poisson(cfg.mobility_intensity / 2.0);
      if (round_trips > kMaxRoundTrips) round_trips = kMaxRoundTrips;

      if (round_trips == 0) {
        int n_home = rng.poisson(1.2);
        for (int e = 0; e < n_home; ++e) {
          plan.emplace_back(6 * 3600 + static_cast<int>(rng.below(14 * 3600)), home);
        }
        std::sort(plan.begin(), plan.end());
      } else {
        int n_events = 1 + 2 * round_trips;
        std::vector<int> times(static_cast<size_t>(n_events));
        for (int& t : times) {
          t = 6 * 3600 + static_cast<int>(rng.below(14 * 3600));
        }
        std::sort(times.begin(), times.end());
        plan.emplace_back(times[0], home);
        for (int r = 0; r < round_trips; ++r) {
          int dest = sample_cum(geo.cum.data() + static_cast<size_t>(home) * geo.k3,
                                geo.k3, rng.next_unit());
          if (dest == home) dest = (home + 1) % geo.k3;  // kernel zeroes i==j
          plan.emplace_back(times[1 + 2 * r], dest);
          plan.emplace_back(times[2 + 2 * r], home);
        }
      }

      // Night event at a home tower with probability 0.85; either the
      // evening of this day or its early morning. At-home placement means
      // sorting it into the itinerary cannot create a crossing.
      if (rng.next_unit() < 0.85) {
        int off = static_cast<int>(rng.below(10 * 3600));
        int sec = off < 4 * 3600 ? 20 * 3600 + off : off - 4 * 3600;
        if (sec < 6 * 3600) {
          plan.insert(plan.begin(), {sec, home});
        } else {
          plan.emplace_back(sec, home);
        }
      }

      for (const auto& [sec, region] : plan) emit(day, sec, s, region, rng);
    }
  }
}

std::pair<std::vector<CdrEvent>, TowerMap> gen_synthetic(const SynthConfig& cfg) {
  std::vector<CdrEvent> events;
  gen_synthetic(cfg, [&](const CdrEvent& ev) { events.push_back(ev); });
  return {std::move(events), synth_tower_map(cfg)};
}

}  // namespace dpod

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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "dpod/dp.hpp"
#include "dpod/error.hpp"
#include "dpod/rng.hpp"

using namespace dpod;

TEST_CASE("privatize is deterministic and structurally sound") {
  ODMatrix m(3, 2, 4);
  m.at(0, 1) = 40;
  m.at(1, 2) = 3;
  m.at(3, 0) = 100;
  PrivateODMatrix a = privatize(m, 0.5, 1, 15, 2024);
  PrivateODMatrix b = privatize(m, 0.5, 1, 15, 2024);
  CHECK(a.matrix.counts == b.matrix.counts);
  a.check_invariants();
  for (int r = 0; r < 4; ++r) {
    CHECK(a.matrix.at(r, r) == 0);
    for (int c = 0; c < 4; ++c) {
      if (r == c) continue;
      int64_t v = a.matrix.at(r, c);
      CHECK((v == 0 || v >= 15));
    }
  }
  PrivateODMatrix c = privatize(m, 0.5, 1, 15, 2025);
  CHECK(a.matrix.counts != c.matrix.counts);
}

TEST_CASE("privatize parameter validation") {
  ODMatrix m(0, 2, 2);
  CHECK_THROWS_AS(privatize(m, 0.0, 1, 15, 1), ConfigError);
  CHECK_THROWS_AS(privatize(m, -0.5, 1, 15, 1), ConfigError);
  CHECK_THROWS_AS(privatize(m, 0.5, 0, 15, 1), ConfigError);
  CHECK_THROWS_AS(privatize(m, 0.5, 1, -1, 1), ConfigError);
  ODMatrix bad(0, 2, 2);
  bad.at(0, 0) = 1;
  CHECK_THROWS_AS(privatize(bad, 0.5, 1, 15, 1), DimensionError);
}

TEST_CASE("privatize with tau = 0 still zeroes negative draws") {
  ODMatrix m(0, 2, 2);  // zero counts, heavy noise
  for (int s = 0; s < 2000; ++s) {
    PrivateODMatrix p = privatize(m, 0.2, 1, 0, static_cast<uint64_t>(s));
    CHECK(p.matrix.at(0, 1) >= 0);
    CHECK(p.matrix.at(1, 0) >= 0);
  }
}

TEST_CASE("privatize suppression frequency matches the closed form") {
  // M = 0, tau = 15, eps = 0.1, T = 1: suppressed w.p. 1 - 0.5 e^{-1.45}.
  ODMatrix m(0, 2, 2);
  const int n = 1000000;
  int suppressed = 0;
  for (int s = 0; s < n; ++s) {
    PrivateODMatrix p = privatize(m, 0.1, 1, 15, static_cast<uint64_t>(s));
    if (p.matrix.at(0, 1) == 0) ++suppressed;
  }
  double freq = static_cast<double>(suppressed) / n;
  CHECK(std::fabs(freq - 0.8827148559531012) < 0.002);
}

TEST_CASE("privatize noise stream is keyed by cell, not iteration") {
  // The same (seed, day, row, col) cell must receive the same noise no
  // matter what else the matrix holds.
  ODMatrix m1(5, 2, 3);
  m1.at(0, 1) = 50;
  ODMatrix m2(5, 2, 3);
  m2.at(0, 1) = 50;
  m2.at(2, 1) = 900;
  PrivateODMatrix p1 = privatize(m1, 1.0, 1, 0, 77);
  PrivateODMatrix p2 = privatize(m2, 1.0, 1, 0, 77);
  CHECK(p1.matrix.at(0, 1) == p2.matrix.at(0, 1));
}

TEST_CASE("privatize_population clamps to one and reproduces") {
  PopulationVector pop;
  pop.level = 2;
  pop.counts = {0, 1000000, 50};
  PopulationVector a = privatize_population(pop, 1.0, 11);
  PopulationVector b = privatize_population(pop, 1.0, 11);
  CHECK(a.counts == b.counts);
  CHECK(a.counts[0] >= 1);
  CHECK(std::llabs(a.counts[1] - 1000000) <= 30);
  for (int s = 0; s < 5000; ++s) {
    PopulationVector z = privatize_population(pop, 0.5, static_cast<uint64_t>(s));
    CHECK(z.counts[0] >= 1);
  }
  CHECK_THROWS_AS(privatize_population(pop, 0.0, 1), ConfigError);
}

TEST_CASE("population noise stays within the Laplace tail bound") {
  PopulationVector pop;
  pop.counts = {1000000};
  int within = 0;
  const int n = 20000;
  for (int s = 0; s < n; ++s) {
    PopulationVector z = privatize_population(pop, 1.0, static_cast<uint64_t>(s));
    if (std::llabs(z.counts[0] - 1000000) <= 30) ++within;
  }
  // P(|eta| > 30) = e^{-30}; essentially everything lands inside.
  CHECK(within == n);
}

TEST_CASE("ledger composition arithmetic") {
  PrivacyLedger ledger;
  ledger.append({"r1", 0.5, 1, 2, 0, {}});
  CHECK(ledger.total_epsilon() == doctest::Approx(0.5));
  ledger.append({"r2", 0.1, 1, 2, 1, {}});
  ledger.append({"r3", 1.0, 1, 2, 2, {}});
  CHECK(ledger.total_epsilon() == doctest::Approx(1.6));
  CHECK_THROWS_AS(ledger.append({"r2", 0.2, 1, 2, 3, {}}), ConflictError);
  CHECK(ledger.size() == 3);
}

TEST_CASE("individual loss: trip level and individual level") {
  PrivacyLedger ledger;
  // 305 releases at eps = 0.5; subscriber "s" contributes 14 trips total.
  for (int day = 0; day < 305; ++day) {
    ReleaseRecord r;
    r.id = "day" + std::to_string(day);
    r.epsilon = 0.5;
    r.cap = 1;
    r.level = 2;
    r.day = day;
    if (day < 14) r.contributed["s"] = 1;
    ledger.append(std::move(r));
  }
  CHECK(ledger.individual_loss("s", PrivacyLedger::Protection::kTripLevel) ==
        doctest::Approx(7.0).epsilon(1e-12));
  CHECK(ledger.individual_loss("s", PrivacyLedger::Protection::kIndividualLevel) ==
        doctest::Approx(152.5).epsilon(1e-12));
  CHECK(ledger.individual_loss("ghost", PrivacyLedger::Protection::kTripLevel) == 0);
  CHECK(ledger.individual_loss("ghost",
                               PrivacyLedger::Protection::kIndividualLevel) == 0);
}

TEST_CASE("ledger JSON-lines round trip") {
  PrivacyLedger ledger;
  ReleaseRecord r;
  r.id = "rel-1";
  r.epsilon = 0.25;
  r.cap = 3;
  r.level = 3;
  r.day = 9;
  r.contributed["alice"] = 2;
  r.contributed["bob"] = 5;
  ledger.append(r);
  std::ostringstream out;
  ledger.save_jsonl(out);
  std::istringstream in(out.str());
  PrivacyLedger loaded = PrivacyLedger::load_jsonl(in);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded.releases()[0].epsilon == doctest::Approx(0.25));
  CHECK(loaded.releases()[0].contributed.at("bob") == 5);
  CHECK(loaded.individual_loss("bob", PrivacyLedger::Protection::kTripLevel) ==
        doctest::Approx(1.25));
}

TEST_CASE("empirical DP likelihood ratio witness (small)") {
  // Neighboring single-cell inputs m and m + T; output frequency ratios
  // bounded by e^eps within Monte-Carlo slack.
  const double eps = 0.5;
  const int cap = 1;
  const int n = 200000;
  std::unordered_map<int64_t, int> hist_lo, hist_hi;
  ODMatrix lo(0, 2, 2), hi(0, 2, 2);
  lo.at(0, 1) = 5;
  hi.at(0, 1) = 5 + cap;
  for (int s = 0; s < n; ++s) {
    hist_lo[privatize(lo, eps, cap, 15, static_cast<uint64_t>(s)).matrix.at(0, 1)] += 1;
    hist_hi[privatize(hi, eps, cap, 15, static_cast<uint64_t>(s) + 1000000).matrix.at(0, 1)] += 1;
  }
  double bound = std::exp(eps);
  for (const auto& [value, count_lo] : hist_lo) {
    auto it = hist_hi.find(value);
    if (it == hist_hi.end() || count_lo < 50 || it->second < 50) continue;
    double c1 = count_lo, c2 = it->second;
    double slack = 1.0 + 5.0 * (1.0 / std::sqrt(c1) + 1.0 / std::sqrt(c2));
    double ratio = std::max(c1 / c2, c2 / c1);
    CHECK(ratio <= bound * slack);
  }
}

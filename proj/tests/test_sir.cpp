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

#include <cmath>

#include "dpod/error.hpp"
#include "dpod/rng.hpp"
#include "dpod/sir.hpp"

using namespace dpod;

namespace {

SIRState make_state(std::vector<double> s, std::vector<double> i,
                    std::vector<double> r, std::vector<double> n) {
  SIRState st;
  st.s = std::move(s);
  st.i = std::move(i);
  st.r = std::move(r);
  st.n = std::move(n);
  return st;
}

std::vector<ODMatrix> random_matrices(int k, int days, uint64_t seed,
                                      int64_t max_flow) {
  std::vector<ODMatrix> ms;
  Rng rng(seed);
  for (int d = 0; d < days; ++d) {
    ODMatrix m(d, 2, k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a != b) m.at(a, b) = static_cast<int64_t>(rng.below(max_flow));
      }
    }
    ms.push_back(std::move(m));
  }
  return ms;
}

}  // namespace

TEST_CASE("disease-free state is a fixed point") {
  SIRState st = make_state({100, 200}, {0, 0}, {0, 0}, {100, 200});
  ODMatrix m(0, 2, 2);
  m.at(0, 1) = 50;
  m.at(1, 0) = 10;
  SIRParams p;
  SIRState next = sir_step(st, m, p);
  CHECK(next.s == st.s);
  CHECK(next.i == st.i);
  CHECK(next.r == st.r);
}

TEST_CASE("single region, no mobility: classic SIR step (per capita)") {
  SIRState st = make_state({900}, {100}, {0}, {1000});
  ODMatrix m(0, 2, 1);
  SIRParams p;
  p.beta = 0.3;
  p.mu = 0.1;
  p.recovery_form = RecoveryForm::kPerCapita;
  SIRState next = sir_step(st, m, p);
  double ds = -0.3 * 900 * 100 / 1000;
  double dr = 0.1 * 100;
  CHECK(next.s[0] == doctest::Approx(900 + ds));
  CHECK(next.r[0] == doctest::Approx(0 + dr));
  CHECK(next.i[0] == doctest::Approx(100 - ds - dr));
  CHECK(next.s[0] + next.i[0] + next.r[0] == doctest::Approx(1000).epsilon(1e-12));
}

TEST_CASE("paper-printed recovery normalizes by N") {
  SIRState st = make_state({900}, {100}, {0}, {1000});
  ODMatrix m(0, 2, 1);
  SIRParams p;
  p.beta = 0.0;
  p.mu = 0.5;
  p.recovery_form = RecoveryForm::kPaperPrinted;
  SIRState next = sir_step(st, m, p);
  CHECK(next.r[0] == doctest::Approx(0.5 * 100 / 1000));
}

TEST_CASE("two symmetric regions stay symmetric") {
  SIRState st = make_state({990, 990}, {10, 10}, {0, 0}, {1000, 1000});
  ODMatrix m(0, 2, 2);
  m.at(0, 1) = 40;
  m.at(1, 0) = 40;
  SIRParams p;
  SIRState cur = st;
  for (int t = 0; t < 50; ++t) {
    cur = sir_step(cur, m, p);
    CHECK(cur.s[0] == doctest::Approx(cur.s[1]).epsilon(1e-12));
    CHECK(cur.i[0] == doctest::Approx(cur.i[1]).epsilon(1e-12));
    CHECK(cur.r[0] == doctest::Approx(cur.r[1]).epsilon(1e-12));
  }
}

TEST_CASE("simulate: initial seeding and empty runs") {
  PopulationVector pop;
  pop.level = 2;
  pop.counts = {1000, 2000};
  SIRParams p;
  auto traj = simulate(1, {}, pop, p);
  REQUIRE(traj.size() == 1);
  CHECK(traj[0].i[1] == doctest::Approx(20.0));
  CHECK(traj[0].s[1] == doctest::Approx(1980.0));
  CHECK(traj[0].i[0] == 0);
  CHECK(traj[0].r[0] == 0);
  CHECK_THROWS_AS(simulate(5, {}, pop, p), BoundsError);
}

TEST_CASE("simulate: beta = 0 decays infection monotonically") {
  PopulationVector pop;
  pop.counts = {5000, 4000, 3000};
  auto ms = random_matrices(3, 30, 4, 100);
  SIRParams p;
  p.beta = 0.0;
  auto traj = simulate(0, ms, pop, p);
  REQUIRE(traj.size() == 31);
  for (size_t t = 1; t < traj.size(); ++t) {
    CHECK(traj[t].i[0] <= traj[t - 1].i[0] + 1e-12);
  }
}

TEST_CASE("simulate: determinism, conservation, non-negativity, monotone R") {
  PopulationVector pop;
  Rng rng(12);
  const int k = 8;
  for (int j = 0; j < k; ++j) pop.counts.push_back(1000 + static_cast<int64_t>(rng.below(20000)));
  auto ms = random_matrices(k, 120, 5, 400);
  SIRParams p;
  auto t1 = simulate(2, ms, pop, p);
  auto t2 = simulate(2, ms, pop, p);
  REQUIRE(t1.size() == t2.size());
  for (size_t t = 0; t < t1.size(); ++t) {
    CHECK(t1[t].s == t2[t].s);
    for (int j = 0; j < k; ++j) {
      double total = t1[t].s[j] + t1[t].i[j] + t1[t].r[j];
      CHECK(std::fabs(total - t1[t].n[j]) / t1[t].n[j] <= 1e-6);
      CHECK(t1[t].s[j] >= 0);
      CHECK(t1[t].i[j] >= 0);
      CHECK(t1[t].r[j] >= 0);
      if (t > 0) CHECK(t1[t].r[j] >= t1[t - 1].r[j] - 1e-12);
    }
  }
}

TEST_CASE("simulate: permutation equivariance") {
  const int k = 4;
  PopulationVector pop;
  pop.counts = {4000, 9000, 2500, 6000};
  auto ms = random_matrices(k, 40, 77, 300);
  SIRParams p;
  auto base = simulate(1, ms, pop, p);

  // Relabel regions with the cycle perm(j) = (j+1) % k.
  auto perm = [&](int j) { return (j + 1) % k; };
  PopulationVector pop2;
  pop2.counts.resize(k);
  for (int j = 0; j < k; ++j) pop2.counts[perm(j)] = pop.counts[j];
  std::vector<ODMatrix> ms2;
  for (const ODMatrix& m : ms) {
    ODMatrix m2(m.day, m.level, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (a != b) m2.at(perm(a), perm(b)) = m.at(a, b);
    ms2.push_back(std::move(m2));
  }
  auto permuted = simulate(perm(1), ms2, pop2, p);
  REQUIRE(permuted.size() == base.size());
  for (size_t t = 0; t < base.size(); ++t) {
    for (int j = 0; j < k; ++j) {
      CHECK(permuted[t].i[perm(j)] == doctest::Approx(base[t].i[j]).epsilon(1e-12));
      CHECK(permuted[t].s[perm(j)] == doctest::Approx(base[t].s[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("simulate rejects shape mismatches and bad populations") {
  PopulationVector pop;
  pop.counts = {100, 100};
  auto ms = random_matrices(3, 2, 1, 10);
  SIRParams p;
  CHECK_THROWS_AS(simulate(0, ms, pop, p), DimensionError);
  PopulationVector zero;
  zero.counts = {100, 0};
  CHECK_THROWS_AS(simulate(0, {}, zero, p), NumericError);
}

TEST_CASE("decide: inclusive threshold boundary") {
  SIRState a = make_state({81, 80, 79}, {19, 20, 21}, {0, 0, 0}, {100, 100, 100});
  DecisionSeries d = decide(std::vector<SIRState>{a}, 0.20);
  CHECK(d.at(0, 0) == 0);  // 0.19
  CHECK(d.at(1, 0) == 1);  // 0.20
  CHECK(d.at(2, 0) == 1);  // 0.21
}

TEST_CASE("decide: monotone crossing flips once") {
  std::vector<SIRState> traj;
  for (int t = 0; t <= 10; ++t) {
    double i = 5.0 * t;  // prevalence 0, .05, ... crosses 0.2 at t = 4
    traj.push_back(make_state({100 - i}, {i}, {0}, {100}));
  }
  DecisionSeries d = decide(traj, 0.20);
  for (int t = 0; t <= 10; ++t) {
    CHECK(d.at(0, t) == (t >= 4 ? 1 : 0));
  }
  std::vector<SIRState> flat(3, make_state({100}, {0}, {0}, {100}));
  DecisionSeries z = decide(flat, 0.2);
  for (int t = 0; t < 3; ++t) CHECK(z.at(0, t) == 0);
}

TEST_CASE("score_decisions: identity and degenerate regions") {
  DecisionSeries a(2, 10);
  for (int t = 3; t < 7; ++t) a.at(0, t) = 1;
  DecisionScore s = score_decisions(a, a);
  CHECK(s.accuracy_mean == doctest::Approx(1.0));
  CHECK(s.accuracy_std == doctest::Approx(0.0));
  CHECK(s.precision_mean == doctest::Approx(1.0));
  CHECK(s.recall_mean == doctest::Approx(1.0));
  // Region 1 is all-zero on both sides: excluded from precision/recall.
  CHECK(s.precision_regions == 1);
  CHECK(s.recall_regions == 1);
  CHECK(s.per_region[1].accuracy == doctest::Approx(1.0));
  CHECK_FALSE(s.per_region[1].precision.has_value());
  CHECK_FALSE(s.per_region[1].recall.has_value());
}

TEST_CASE("score_decisions: confusion-matrix arithmetic") {
  // 305 days: 50 TP, 10 FP, 5 FN, 240 TN.
  DecisionSeries priv(1, 305), nonpriv(1, 305);
  int t = 0;
  for (int i = 0; i < 50; ++i, ++t) { priv.at(0, t) = 1; nonpriv.at(0, t) = 1; }
  for (int i = 0; i < 10; ++i, ++t) { priv.at(0, t) = 1; nonpriv.at(0, t) = 0; }
  for (int i = 0; i < 5; ++i, ++t) { priv.at(0, t) = 0; nonpriv.at(0, t) = 1; }
  DecisionScore s = score_decisions(priv, nonpriv);
  CHECK(s.accuracy_mean == doctest::Approx(290.0 / 305.0).epsilon(1e-12));
  CHECK(s.precision_mean == doctest::Approx(50.0 / 60.0).epsilon(1e-12));
  CHECK(s.recall_mean == doctest::Approx(50.0 / 55.0).epsilon(1e-12));
  DecisionSeries other(2, 305);
  CHECK_THROWS_AS(score_decisions(priv, other), DimensionError);
}

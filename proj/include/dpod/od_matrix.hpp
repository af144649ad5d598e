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

#ifndef DPOD_OD_MATRIX_HPP_
#define DPOD_OD_MATRIX_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "dpod/cdr.hpp"

namespace dpod {

// Daily k x k trip-count matrix with a structurally zero diagonal.
struct ODMatrix {
  int day = 0;
  int level = 2;
  int k = 0;
  std::vector<int64_t> counts;  // row-major, k*k

  ODMatrix() = default;
  ODMatrix(int day, int level, int k)
      : day(day), level(level), k(k), counts(static_cast<size_t>(k) * k, 0) {}

  int64_t& at(int a, int b) { return counts[static_cast<size_t>(a) * k + b]; }
  int64_t at(int a, int b) const { return counts[static_cast<size_t>(a) * k + b]; }

  int64_t total() const;
  void check_invariants() const;  // diagonal zero, entries >= 0
};

// Counts trips a->b for one (day, level) slice. Region ids must be < k.
ODMatrix build_od(std::span<const TripRecord> trips, int day, int level, int k);

// Keeps at most `cap` uniformly chosen trips per subscriber. Input must be
// one (day, level) slice; kept trips preserve their input order.
// Deterministic per (seed, subscriber).
std::vector<TripRecord> cap_trips(std::span<const TripRecord> trips, int cap,
                                  uint64_t seed);

// Capping across a multi-day span: each (day, level) slice is capped with
// an independently derived seed.
std::vector<TripRecord> cap_trips_by_day(std::span<const TripRecord> trips,
                                         int cap, uint64_t seed);

// Nearest-rank percentile of the per-subscriber daily trip-count
// distribution (only days with at least one trip enter it). p in (0, 100].
int t_from_percentile(std::span<const TripRecord> trips, double p);

struct ErrorStats {
  double median_abs_error = 0;
  double median_rel_error = 0;
  std::vector<double> per_cell_abs;  // off-diagonal cells in row-major order
  std::vector<double> per_cell_rel;
};

// Per-cell |private - nonprivate| and symmetric relative error
// 2|a-b|/(a+b) (0 when both counts are 0); medians are lower medians.
ErrorStats error_stats(const ODMatrix& nonprivate, const ODMatrix& privatized);

// Fraction of off-diagonal cells strictly below `threshold`.
double suppressed_share(const ODMatrix& m, int64_t threshold);

// Long-form matrix CSV: header "day,level,origin,destination,count", zero
// cells omitted. A file may carry many days of one level.
void write_matrix_csv(std::ostream& out, std::span<const ODMatrix> matrices);
std::vector<ODMatrix> load_matrix_csv(std::istream& in, int k, int level);

}  // namespace dpod

#endif  // DPOD_OD_MATRIX_HPP_

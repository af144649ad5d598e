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

#include "dpod/od_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "dpod/csv.hpp"
#include "dpod/error.hpp"
#include "dpod/rng.hpp"

namespace dpod {

int64_t ODMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), int64_t{0});
}

void ODMatrix::check_invariants() const {
  if (counts.size() != static_cast<size_t>(k) * k) {
    throw DimensionError("matrix storage does not match k");
  }
  for (int a = 0; a < k; ++a) {
    if (at(a, a) != 0) throw DimensionError("matrix diagonal must be zero");
  }
  for (int64_t v : counts) {
    if (v < 0) throw DimensionError("matrix entries must be non-negative");
  }
}

ODMatrix build_od(std::span<const TripRecord> trips, int day, int level, int k) {
  if (k < 1) throw ConfigError("build_od: k must be >= 1");
  ODMatrix m(day, level, k);
  for (const TripRecord& t : trips) {
    if (t.day != day || t.level != level) {
      throw ConfigError("build_od: trips must be filtered to the slice");
    }
    if (t.origin < 0 || t.origin >= k || t.destination < 0 || t.destination >= k) {
      throw BoundsError("trip region id out of bounds for k=" + std::to_string(k));
    }
    if (t.origin == t.destination) {
      throw BoundsError("trip with origin == destination");
    }
    m.at(t.origin, t.destination) += 1;
  }
  return m;
}

std::vector<TripRecord> cap_trips(std::span<const TripRecord> trips, int cap,
                                  uint64_t seed) {
  if (cap < 1) throw ConfigError("cap_trips: cap must be >= 1");
  if (trips.empty()) return {};
  int day = trips.front().day;
  int level = trips.front().level;

  // Indices per subscriber, in input order.
  std::unordered_map<std::string, std::vector<uint32_t>> by_subscriber;
  for (uint32_t i = 0; i < trips.size(); ++i) {
    const TripRecord& t = trips[i];
    if (t.day != day || t.level != level) {
      throw ConfigError("cap_trips: input must be a single (day, level) slice");
    }
    by_subscriber[t.subscriber].push_back(i);
  }

  std::vector<bool> keep(trips.size(), true);
  for (auto& [subscriber, idx] : by_subscriber) {
    size_t n = idx.size();
    if (n <= static_cast<size_t>(cap)) continue;
    Rng rng(derive_key({seed, hash_str(subscriber)}));
    // Partial Fisher-Yates: the first `cap` slots are a uniform subset.
    for (size_t i = 0; i < static_cast<size_t>(cap); ++i) {
      size_t j = i + static_cast<size_t>(rng.below(n - i));
      std::swap(idx[i], idx[j]);
    }
    for (size_t i = static_cast<size_t>(cap); i < n; ++i) keep[idx[i]] = false;
  }

  std::vector<TripRecord> kept;
  for (uint32_t i = 0; i < trips.size(); ++i) {
    if (keep[i]) kept.push_back(trips[i]);
  }
  return kept;
}

std::vector<TripRecord> cap_trips_by_day(std::span<const TripRecord> trips,
                                         int cap, uint64_t seed) {
  if (cap < 1) throw ConfigError("cap_trips: cap must be >= 1");
  std::map<std::pair<int, int>, std::vector<TripRecord>> slices;
  for (const TripRecord& t : trips) {
    slices[{t.day, t.level}].push_back(t);
  }
  std::vector<TripRecord> out;
  out.reserve(trips.size());
  for (auto& [key, slice] : slices) {
    uint64_t slice_seed = derive_key({seed, static_cast<uint64_t>(key.first),
                                      static_cast<uint64_t>(key.second)});
    auto kept = cap_trips(slice, cap, slice_seed);
    out.insert(out.end(), kept.begin(), kept.end());
  }
  return out;
}

int t_from_percentile(std::span<const TripRecord> trips, double p) {
  if (!(p > 0 && p <= 100)) throw ConfigError("percentile must be in (0, 100]");
  if (trips.empty()) throw ConfigError("t_from_percentile: no trips");
  std::unordered_map<std::string, std::unordered_map<int, int64_t>> per_day;
  for (const TripRecord& t : trips) {
    per_day[t.subscriber][t.day] += 1;
  }
  std::vector<int64_t> daily_counts;
  for (const auto& [subscriber, days] : per_day) {
    for (const auto& [day, count] : days) daily_counts.push_back(count);
  }
  std::sort(daily_counts.begin(), daily_counts.end());
  size_t n = daily_counts.size();
  size_t rank = static_cast<size_t>(
      std::ceil(p * static_cast<double>(n) / 100.0));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  int64_t value = daily_counts[rank - 1];
  return value < 1 ? 1 : static_cast<int>(value);
}

namespace {

double lower_median(std::vector<double> v) {
  if (v.empty()) return 0;
  size_t idx = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<ptrdiff_t>(idx), v.end());
  return v[idx];
}

}  // namespace

ErrorStats error_stats(const ODMatrix& nonprivate, const ODMatrix& privatized) {
  if (nonprivate.k != privatized.k || nonprivate.level != privatized.level ||
      nonprivate.day != privatized.day) {
    throw DimensionError("error_stats: matrices must share day, level, k");
  }
  ErrorStats stats;
  int k = nonprivate.k;
  stats.per_cell_abs.reserve(static_cast<size_t>(k) * (k - 1));
  stats.per_cell_rel.reserve(static_cast<size_t>(k) * (k - 1));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      double m = static_cast<double>(nonprivate.at(a, b));
      double mh = static_cast<double>(privatized.at(a, b));
      double abs_err = std::fabs(mh - m);
      double rel_err = (m + mh) == 0 ? 0.0 : 2.0 * abs_err / (m + mh);
      stats.per_cell_abs.push_back(abs_err);
      stats.per_cell_rel.push_back(rel_err);
    }
  }
  stats.median_abs_error = lower_median(stats.per_cell_abs);
  stats.median_rel_error = lower_median(stats.per_cell_rel);
  return stats;
}

double suppressed_share(const ODMatrix& m, int64_t threshold) {
  if (threshold < 0) throw ConfigError("threshold must be >= 0");
  if (m.k < 2) return 0.0;
  int64_t below = 0;
  int64_t cells = 0;
  for (int a = 0; a < m.k; ++a) {
    for (int b = 0; b < m.k; ++b) {
      if (a == b) continue;
      ++cells;
      if (m.at(a, b) < threshold) ++below;
    }
  }
  return static_cast<double>(below) / static_cast<double>(cells);
}

void write_matrix_csv(std::ostream& out, std::span<const ODMatrix> matrices) {
  out << "day,level,origin,destination,count\n";
  for (const ODMatrix& m : matrices) {
    for (int a = 0; a < m.k; ++a) {
      for (int b = 0; b < m.k; ++b) {
        int64_t v = m.at(a, b);
        if (v == 0) continue;
        out << m.day << ',' << m.level << ',' << a << ',' << b << ',' << v
            << '\n';
      }
    }
  }
}

std::vector<ODMatrix> load_matrix_csv(std::istream& in, int k, int level) {
  CsvReader reader(in);
  std::vector<std::string_view> fields;
  if (!reader.next(fields) || fields.size() != 5 || fields[0] != "day") {
    throw ParseError("matrix file: expected header day,level,origin,destination,count");
  }
  std::map<int, ODMatrix> by_day;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    size_t line = reader.line_number();
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(line) + ": expected 5 fields");
    }
    int day = static_cast<int>(parse_i64_field(fields[0], line, "day"));
    int row_level = static_cast<int>(parse_i64_field(fields[1], line, "level"));
    int a = static_cast<int>(parse_i64_field(fields[2], line, "origin"));
    int b = static_cast<int>(parse_i64_field(fields[3], line, "destination"));
    int64_t v = parse_i64_field(fields[4], line, "count");
    if (row_level != level) continue;
    if (a < 0 || a >= k || b < 0 || b >= k) {
      throw ParseError("line " + std::to_string(line) + ": region id out of bounds");
    }
    if (a == b) {
      throw ParseError("line " + std::to_string(line) + ": diagonal entry");
    }
    if (v < 0) {
      throw ParseError("line " + std::to_string(line) + ": negative count");
    }
    auto it = by_day.find(day);
    if (it == by_day.end()) {
      it = by_day.emplace(day, ODMatrix(day, level, k)).first;
    }
    it->second.at(a, b) += v;
  }
  std::vector<ODMatrix> out;
  out.reserve(by_day.size());
  for (auto& [day, m] : by_day) out.push_back(std::move(m));
  return out;
}

}  // namespace dpod

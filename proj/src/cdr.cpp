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

#include "dpod/cdr.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "dpod/csv.hpp"
#include "dpod/datetime.hpp"
#include "dpod/error.hpp"

namespace dpod {

void TowerMap::add(const std::string& tower_id, int admin2, int admin3) {
  if (admin2 < 0 || admin3 < 0) {
    throw ConfigError("tower '" + tower_id + "': negative region id");
  }
  auto [it, inserted] = entries_.emplace(tower_id, Region{admin2, admin3});
  if (!inserted) throw ConfigError("duplicate tower id '" + tower_id + "'");
  if (admin2 + 1 > k2_) k2_ = admin2 + 1;
  if (admin3 + 1 > k3_) k3_ = admin3 + 1;
}

const TowerMap::Region* TowerMap::find(const std::string& tower_id) const {
  auto it = entries_.find(tower_id);
  return it == entries_.end() ? nullptr : &it->second;
}

int TowerMap::region_of(const Region& r, int level) const {
  if (level == 2) return r.admin2;
  if (level == 3) return r.admin3;
  throw ConfigError("admin level must be 2 or 3");
}

int TowerMap::region_count(int level) const {
  if (level == 2) return k2_;
  if (level == 3) return k3_;
  throw ConfigError("admin level must be 2 or 3");
}

void TowerMap::declare_counts(int k2, int k3) {
  if (k2 < k2_ || k3 < k3_) {
    throw ConfigError("declared region counts below observed tower ids");
  }
  k2_ = k2;
  k3_ = k3;
}

TowerMap load_tower_map(std::istream& in) {
  TowerMap map;
  CsvReader reader(in);
  std::vector<std::string_view> fields;
  int declared_k2 = -1, declared_k3 = -1;
  if (!reader.next(fields)) throw ParseError("tower file is empty");
  // Optional count line: "# admin2=K2 admin3=K3".
  if (!fields.empty() && !fields[0].empty() && fields[0][0] == '#') {
    const std::string& line = reader.raw_line();
    size_t p2 = line.find("admin2=");
    size_t p3 = line.find("admin3=");
    if (p2 != std::string::npos) declared_k2 = std::atoi(line.c_str() + p2 + 7);
    if (p3 != std::string::npos) declared_k3 = std::atoi(line.c_str() + p3 + 7);
    if (!reader.next(fields)) throw ParseError("tower file has no header");
  }
  if (fields.size() != 3 || fields[0] != "tower_id") {
    throw ParseError("tower file: expected header tower_id,admin2_id,admin3_id");
  }
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank
    if (fields.size() != 3) {
      throw ParseError("line " + std::to_string(reader.line_number()) +
                       ": expected 3 fields");
    }
    int64_t a2 = parse_i64_field(fields[1], reader.line_number(), "admin2_id");
    int64_t a3 = parse_i64_field(fields[2], reader.line_number(), "admin3_id");
    map.add(std::string(fields[0]), static_cast<int>(a2), static_cast<int>(a3));
  }
  if (map.empty()) throw ParseError("tower file lists no towers");
  if (declared_k2 > 0 && declared_k3 > 0) {
    map.declare_counts(declared_k2, declared_k3);
  }
  return map;
}

void save_tower_map(const TowerMap& map, std::ostream& out,
                    std::span<const std::pair<std::string, TowerMap::Region>> rows) {
  out << "# admin2=" << map.region_count(2) << " admin3=" << map.region_count(3)
      << "\n";
  out << "tower_id,admin2_id,admin3_id\n";
  for (const auto& [id, region] : rows) {
    out << id << ',' << region.admin2 << ',' << region.admin3 << '\n';
  }
}

ParseStats parse_cdr(std::istream& in, const TowerMap& towers,
                     const std::function<void(CdrEvent&&)>& sink) {
  if (towers.empty()) throw ConfigError("tower map is empty");
  CsvReader reader(in);
  std::vector<std::string_view> fields;
  if (!reader.next(fields)) throw ParseError("CDR file is empty");
  if (fields.size() != 5 || fields[0] != "timestamp") {
    throw ParseError(
        "CDR file: expected header timestamp,caller_id,callee_id,duration_s,"
        "tower_id");
  }
  ParseStats stats;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    size_t line = reader.line_number();
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(line) + ": expected 5 fields");
    }
    CivilDateTime ts;
    try {
      ts = parse_civil(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    if (fields[1].empty()) {
      throw ParseError("line " + std::to_string(line) + ": empty caller_id");
    }
    int64_t duration = parse_i64_field(fields[3], line, "duration_s");
    if (duration < 0) {
      throw ParseError("line " + std::to_string(line) + ": negative duration");
    }
    std::string tower(fields[4]);
    if (towers.find(tower) == nullptr) {
      ++stats.skipped_unknown;
      continue;
    }
    CdrEvent ev;
    ev.timestamp = to_seconds(ts);
    ev.caller_id = std::string(fields[1]);
    ev.callee_id = std::string(fields[2]);
    ev.duration_s = duration;
    ev.tower_id = std::move(tower);
    ++stats.rows;
    sink(std::move(ev));
  }
  return stats;
}

std::pair<std::vector<CdrEvent>, uint64_t> parse_cdr(std::istream& in,
                                                     const TowerMap& towers) {
  std::vector<CdrEvent> events;
  ParseStats stats =
      parse_cdr(in, towers, [&](CdrEvent&& ev) { events.push_back(std::move(ev)); });
  return {std::move(events), stats.skipped_unknown};
}

std::unordered_map<std::string, int> infer_homes(std::span<const CdrEvent> events,
                                                 const TowerMap& towers,
                                                 int level) {
  // subscriber -> tower -> night-event count
  std::unordered_map<std::string, std::unordered_map<std::string, int64_t>> night;
  for (const CdrEvent& ev : events) {
    if (!is_night(ev.timestamp)) continue;
    night[ev.caller_id][ev.tower_id] += 1;
  }
  std::unordered_map<std::string, int> homes;
  homes.reserve(night.size());
  for (const auto& [subscriber, counts] : night) {
    const std::string* best_tower = nullptr;
    int64_t best_count = 0;
    for (const auto& [tower, count] : counts) {
      if (count > best_count ||
          (count == best_count && best_tower != nullptr && tower < *best_tower)) {
        best_tower = &tower;
        best_count = count;
      }
    }
    const TowerMap::Region* region = towers.find(*best_tower);
    if (region == nullptr) {
      throw BoundsError("night event at unmapped tower '" + *best_tower + "'");
    }
    homes.emplace(subscriber, towers.region_of(*region, level));
  }
  return homes;
}

PopulationVector regional_populations(
    const std::unordered_map<std::string, int>& homes, int k, int level) {
  PopulationVector pop;
  pop.level = level;
  pop.counts.assign(static_cast<size_t>(k), 0);
  for (const auto& [subscriber, region] : homes) {
    if (region < 0 || region >= k) {
      throw BoundsError("home region " + std::to_string(region) +
                        " out of bounds for k=" + std::to_string(k));
    }
    pop.counts[static_cast<size_t>(region)] += 1;
  }
  return pop;
}

std::vector<TripRecord> extract_trips(std::span<const CdrEvent> events,
                                      const TowerMap& towers, int level) {
  if (events.empty()) return {};

  int64_t first_day = std::numeric_limits<int64_t>::max();
  for (const CdrEvent& ev : events) {
    first_day = std::min(first_day, civil_day_of(ev.timestamp));
  }

  // Sort an index per subscriber by (timestamp, input order).
  std::vector<uint32_t> order(events.size());
  for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const CdrEvent& ea = events[a];
    const CdrEvent& eb = events[b];
    if (ea.caller_id != eb.caller_id) return ea.caller_id < eb.caller_id;
    if (ea.timestamp != eb.timestamp) return ea.timestamp < eb.timestamp;
    return a < b;
  });

  std::vector<TripRecord> trips;
  const std::string* current_subscriber = nullptr;
  int prev_region = -1;
  for (uint32_t idx : order) {
    const CdrEvent& ev = events[idx];
    const TowerMap::Region* region_entry = towers.find(ev.tower_id);
    if (region_entry == nullptr) {
      throw BoundsError("event at unmapped tower '" + ev.tower_id + "'");
    }
    int region = towers.region_of(*region_entry, level);
    if (current_subscriber == nullptr || ev.caller_id != *current_subscriber) {
      current_subscriber = &ev.caller_id;
      prev_region = region;
      continue;
    }
    if (region != prev_region) {
      TripRecord t;
      t.subscriber = ev.caller_id;
      t.day = static_cast<int>(civil_day_of(ev.timestamp) - first_day);
      t.origin = prev_region;
      t.destination = region;
      t.level = level;
      trips.push_back(std::move(t));
    }
    prev_region = region;
  }
  return trips;
}

void write_trips_header(std::ostream& out) {
  out << "subscriber,day,origin,destination,level\n";
}

void write_trip_row(std::ostream& out, const TripRecord& t) {
  out << t.subscriber << ',' << t.day << ',' << t.origin << ',' << t.destination
      << ',' << t.level << '\n';
}

std::vector<TripRecord> load_trips(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string_view> fields;
  if (!reader.next(fields) || fields.size() != 5 || fields[0] != "subscriber") {
    throw ParseError("trips file: expected header subscriber,day,origin,destination,level");
  }
  std::vector<TripRecord> trips;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    size_t line = reader.line_number();
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(line) + ": expected 5 fields");
    }
    TripRecord t;
    t.subscriber = std::string(fields[0]);
    t.day = static_cast<int>(parse_i64_field(fields[1], line, "day"));
    t.origin = static_cast<int>(parse_i64_field(fields[2], line, "origin"));
    t.destination = static_cast<int>(parse_i64_field(fields[3], line, "destination"));
    t.level = static_cast<int>(parse_i64_field(fields[4], line, "level"));
    if (t.origin == t.destination) {
      throw ParseError("line " + std::to_string(line) + ": origin equals destination");
    }
    trips.push_back(std::move(t));
  }
  return trips;
}

}  // namespace dpod

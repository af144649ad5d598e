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

#ifndef DPOD_CDR_HPP_
#define DPOD_CDR_HPP_

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dpod {

// One transaction row. The caller is the locating party; callee location is
// never inferred. Timestamps are local-clock seconds (see datetime.hpp).
struct CdrEvent {
  int64_t timestamp = 0;
  std::string caller_id;
  std::string callee_id;
  int64_t duration_s = 0;
  std::string tower_id;
};

// Tower geolocation at the two administrative levels. Region ids are dense
// integers 0..k-1 per level.
class TowerMap {
 public:
  struct Region {
    int admin2 = 0;
    int admin3 = 0;
  };

  void add(const std::string& tower_id, int admin2, int admin3);
  const Region* find(const std::string& tower_id) const;
  int region_of(const Region& r, int level) const;

  // k for a level; derived from the data unless a header declared it.
  int region_count(int level) const;
  void declare_counts(int k2, int k3);

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::unordered_map<std::string, Region> entries_;
  int k2_ = 0;
  int k3_ = 0;
};

// One subscriber movement between two regions on one day; origin differs
// from destination by construction. This is the unit of privacy accounting.
struct TripRecord {
  std::string subscriber;
  int day = 0;
  int origin = 0;
  int destination = 0;
  int level = 2;
};

struct PopulationVector {
  int level = 2;
  std::vector<int64_t> counts;
};

struct ParseStats {
  uint64_t rows = 0;             // valid events delivered
  uint64_t skipped_unknown = 0;  // rows dropped for an unlisted tower
};

// Tower CSV: optional "# admin2=K2 admin3=K3" line, then header
// "tower_id,admin2_id,admin3_id".
TowerMap load_tower_map(std::istream& in);
void save_tower_map(const TowerMap& map, std::ostream& out,
                    std::span<const std::pair<std::string, TowerMap::Region>> rows);

// CDR CSV: header "timestamp,caller_id,callee_id,duration_s,tower_id".
// Valid events are handed to `sink` in file order. Rows whose tower is not
// in the map are counted and skipped; malformed rows raise ParseError
// naming the line.
ParseStats parse_cdr(std::istream& in, const TowerMap& towers,
                     const std::function<void(CdrEvent&&)>& sink);
std::pair<std::vector<CdrEvent>, uint64_t> parse_cdr(std::istream& in,
                                                     const TowerMap& towers);

// Home region per subscriber: the modal tower of their night events
// ([20:00, 06:00) local clock), ties broken by lexicographically smallest
// tower id. Subscribers with no night events are absent from the result.
std::unordered_map<std::string, int> infer_homes(std::span<const CdrEvent> events,
                                                 const TowerMap& towers,
                                                 int level);

PopulationVector regional_populations(
    const std::unordered_map<std::string, int>& homes, int k, int level);

// Consecutive-event scan per subscriber (sorted by timestamp, ties in input
// order): each pair whose regions differ yields one trip dated by the later
// event's calendar day, indexed from the earliest event day in `events`.
std::vector<TripRecord> extract_trips(std::span<const CdrEvent> events,
                                      const TowerMap& towers, int level);

// Trips CSV: header "subscriber,day,origin,destination,level".
void write_trips_header(std::ostream& out);
void write_trip_row(std::ostream& out, const TripRecord& t);
std::vector<TripRecord> load_trips(std::istream& in);

}  // namespace dpod

#endif  // DPOD_CDR_HPP_

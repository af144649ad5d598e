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

#ifndef DPOD_DATETIME_HPP_
#define DPOD_DATETIME_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace dpod {

// Timestamps are stored as seconds on a continuous local-clock axis
// (86400 s per civil day, no timezone or DST handling). Day boundaries and
// the night window are evaluated on this same clock.

struct CivilDateTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

// Days since 1970-01-01 for a proleptic Gregorian civil date.
int64_t days_from_civil(int year, int month, int day);
CivilDateTime civil_from_days(int64_t days);

int64_t to_seconds(const CivilDateTime& c);
CivilDateTime from_seconds(int64_t seconds);

// Strict parse of "YYYY-MM-DDThh:mm:ss"; a trailing 'Z' is tolerated and
// ignored (the clock is treated as local either way). Invalid calendar
// dates and clock values are rejected.
CivilDateTime parse_civil(std::string_view s);

std::string format_civil(const CivilDateTime& c);

inline int64_t civil_day_of(int64_t seconds) {
  return seconds >= 0 ? seconds / 86400 : (seconds - 86399) / 86400;
}

inline int hour_of(int64_t seconds) {
  int64_t day = civil_day_of(seconds);
  return static_cast<int>((seconds - day * 86400) / 3600);
}

// Night window used for home inference: [20:00, 24:00) union [00:00, 06:00).
inline bool is_night(int64_t seconds) {
  int h = hour_of(seconds);
  return h >= 20 || h < 6;
}

}  // namespace dpod

#endif  // DPOD_DATETIME_HPP_

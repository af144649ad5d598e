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

#include "dpod/rng.hpp"

#include <cmath>

#include "dpod/error.hpp"

namespace dpod {

uint64_t derive_key(std::initializer_list<uint64_t> parts) {
  uint64_t h = 0x6a09e667f3bcc909ULL;
  for (uint64_t p : parts) {
    h = mix64(h ^ (p + 0x9e3779b97f4a7c15ULL));
  }
  return h;
}

uint64_t hash_bytes(const void* data, size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t hash_str(const std::string& s) { return hash_bytes(s.data(), s.size()); }

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw ConfigError("Rng::below: bound must be positive");
  // Reject the tail that would bias the modulus.
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

int Rng::poisson(double mean) {
  if (mean < 0) throw ConfigError("Rng::poisson: mean must be non-negative");
  if (mean == 0) return 0;
  double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= next_unit();
  } while (p > limit);
  return k - 1;
}

double laplace_from_u64(uint64_t bits, double scale) {
  if (!(scale > 0)) throw ConfigError("laplace: scale must be positive");
  double v = (bits >> 11) * 0x1.0p-53;  // [0, 1)
  double u = 0.5 - v;                   // (-1/2, 1/2]
  double t = 1.0 - 2.0 * std::fabs(u);
  if (t <= 0.0) t = 0x1.0p-53;  // u == 1/2 exactly; keep the draw finite
  double sgn = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  return -scale * sgn * std::log(t);
}

double laplace_sample(double scale, Rng& rng) {
  return laplace_from_u64(rng.next_u64(), scale);
}

long long round_half_up(double x) {
  double f = std::floor(x);
  // x - floor(x) is exact for the magnitudes seen here, so the tie test
  // does not suffer the classic floor(x + 0.5) double-rounding defect.
  return (x - f >= 0.5) ? static_cast<long long>(f) + 1
                        : static_cast<long long>(f);
}

}  // namespace dpod

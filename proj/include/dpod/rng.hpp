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

#ifndef DPOD_RNG_HPP_
#define DPOD_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace dpod {

// SplitMix64 finalizer; full-avalanche mix of a 64-bit word.
constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Collapses (seed, day, row, col, ...) into one well-mixed key. Noise and
// sampling decisions are keyed this way so results do not depend on
// iteration order or thread schedule.
uint64_t derive_key(std::initializer_list<uint64_t> parts);

// Stable 64-bit hash of a byte string (FNV-1a), for keying by subscriber id.
uint64_t hash_bytes(const void* data, size_t len);
uint64_t hash_str(const std::string& s);

// Small deterministic generator over a SplitMix64 stream. Not
// cryptographic; reproducibility across platforms is the requirement here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1).
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); rejection sampling keeps it unbiased.
  uint64_t below(uint64_t bound);

  // Knuth's product-of-uniforms method; fine for the small means used here.
  int poisson(double mean);

  // Fisher-Yates using this generator (std::shuffle is not portable).
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

// Inverse-CDF Laplace draw from one 64-bit word: u uniform on (-1/2, 1/2],
// sample = -scale * sgn(u) * ln(1 - 2|u|). Consumes exactly one word, so a
// keyed word gives a schedule-independent draw.
double laplace_from_u64(uint64_t bits, double scale);

// Draws one Laplace(scale) sample from the generator. scale <= 0 is a
// parameter error.
double laplace_sample(double scale, Rng& rng);

// Round to nearest integer; exact halves round toward +infinity
// (2.5 -> 3, -2.5 -> -2).
long long round_half_up(double x);

}  // namespace dpod

#endif  // DPOD_RNG_HPP_

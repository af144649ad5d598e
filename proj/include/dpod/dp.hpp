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

#ifndef DPOD_DP_HPP_
#define DPOD_DP_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpod/cdr.hpp"
#include "dpod/od_matrix.hpp"

namespace dpod {

// A released matrix plus everything needed to reproduce it. Off-diagonal
// entries are 0 or >= tau; the diagonal stays 0.
struct PrivateODMatrix {
  ODMatrix matrix;
  double epsilon = 0;
  int cap = 1;       // trip threshold T used for the noise scale
  int64_t tau = 0;   // suppression threshold
  uint64_t seed = 0;

  void check_invariants() const;
};

// The Laplace release: adds Laplace(cap/epsilon) noise to each off-diagonal
// cell, rounds half toward +infinity, and zeroes values below tau. Noise is
// keyed by (seed, day, row, col), so the result is independent of iteration
// order and thread schedule. For individual-level protection the input must
// already be capped (cap_trips).
PrivateODMatrix privatize(const ODMatrix& m, double epsilon, int cap,
                          int64_t tau, uint64_t seed);

// Population counts with Laplace(1/epsilon) noise (sensitivity one home),
// rounded half-up and clamped to >= 1 so downstream rates stay defined.
PopulationVector privatize_population(const PopulationVector& pop,
                                      double epsilon, uint64_t seed);

// error_stats against the released counts (post-processing view).
ErrorStats error_stats(const ODMatrix& nonprivate, const PrivateODMatrix& priv);

struct ReleaseRecord {
  std::string id;
  double epsilon = 0;
  int cap = 1;
  int level = 2;
  int day = 0;
  // Post-capping contributed trips per subscriber (n_j); subscribers that
  // contributed nothing may be omitted.
  std::unordered_map<std::string, int64_t> contributed;
};

// Append-only record of releases supporting cumulative-loss queries under
// sequential composition. Appends must be serialized by the caller.
class PrivacyLedger {
 public:
  enum class Protection { kTripLevel, kIndividualLevel };

  // Throws ConflictError on a duplicate release id.
  void append(ReleaseRecord record);

  // Sum of epsilons across releases (composition).
  double total_epsilon() const;

  // Trip-level: sum of epsilon_r * n_r over releases (group privacy over
  // the subscriber's released trips). Individual-level: sum of epsilon_r
  // over all releases. Subscribers absent from every release return 0.
  double individual_loss(const std::string& subscriber, Protection p) const;

  const std::vector<ReleaseRecord>& releases() const { return releases_; }
  size_t size() const { return releases_.size(); }

  // JSON-lines persistence, one release per line.
  static PrivacyLedger load_jsonl(std::istream& in);
  static void write_record_jsonl(std::ostream& out, const ReleaseRecord& r);
  void save_jsonl(std::ostream& out) const;

 private:
  std::vector<ReleaseRecord> releases_;
  std::unordered_map<std::string, size_t> ids_;
};

}  // namespace dpod

#endif  // DPOD_DP_HPP_

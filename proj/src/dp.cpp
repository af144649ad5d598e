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

#include "dpod/dp.hpp"

#include <json.hpp>

#include "dpod/error.hpp"
#include "dpod/rng.hpp"

namespace dpod {

namespace {

// Domain-separation tags so matrix and population draws never collide.
constexpr uint64_t kTagMatrixNoise = 0x4d58u;
constexpr uint64_t kTagPopulationNoise = 0x504fu;

void check_release_params(double epsilon, int cap, int64_t tau) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  if (cap < 1) throw ConfigError("cap must be >= 1");
  if (tau < 0) throw ConfigError("tau must be >= 0");
}

}  // namespace

void PrivateODMatrix::check_invariants() const {
  matrix.check_invariants();
  for (int a = 0; a < matrix.k; ++a) {
    for (int b = 0; b < matrix.k; ++b) {
      if (a == b) continue;
      int64_t v = matrix.at(a, b);
      if (v != 0 && v < tau) {
        throw DimensionError("released entry between 0 and tau");
      }
    }
  }
}

PrivateODMatrix privatize(const ODMatrix& m, double epsilon, int cap,
                          int64_t tau, uint64_t seed) {
  check_release_params(epsilon, cap, tau);
  m.check_invariants();

  PrivateODMatrix out;
  out.matrix = ODMatrix(m.day, m.level, m.k);
  out.epsilon = epsilon;
  out.cap = cap;
  out.tau = tau;
  out.seed = seed;

  const double scale = static_cast<double>(cap) / epsilon;
  for (int a = 0; a < m.k; ++a) {
    for (int b = 0; b < m.k; ++b) {
      if (a == b) continue;
      uint64_t bits = derive_key({seed, kTagMatrixNoise,
                                  static_cast<uint64_t>(m.day),
                                  static_cast<uint64_t>(a),
                                  static_cast<uint64_t>(b)});
      double noisy = static_cast<double>(m.at(a, b)) + laplace_from_u64(bits, scale);
      long long rounded = round_half_up(noisy);
      out.matrix.at(a, b) = rounded < tau ? 0 : rounded;
    }
  }
  return out;
}

PopulationVector privatize_population(const PopulationVector& pop,
                                      double epsilon, uint64_t seed) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  PopulationVector out;
  out.level = pop.level;
  out.counts.resize(pop.counts.size());
  const double scale = 1.0 / epsilon;
  for (size_t r = 0; r < pop.counts.size(); ++r) {
    uint64_t bits =
        derive_key({seed, kTagPopulationNoise, static_cast<uint64_t>(r)});
    double noisy =
        static_cast<double>(pop.counts[r]) + laplace_from_u64(bits, scale);
    long long rounded = round_half_up(noisy);
    out.counts[r] = rounded < 1 ? 1 : rounded;
  }
  return out;
}

ErrorStats error_stats(const ODMatrix& nonprivate, const PrivateODMatrix& priv) {
  return error_stats(nonprivate, priv.matrix);
}

void PrivacyLedger::append(ReleaseRecord record) {
  if (!(record.epsilon > 0)) throw ConfigError("ledger: epsilon must be positive");
  if (record.id.empty()) throw ConfigError("ledger: release id must be non-empty");
  auto [it, inserted] = ids_.emplace(record.id, releases_.size());
  if (!inserted) {
    throw ConflictError("ledger: duplicate release id '" + record.id + "'");
  }
  releases_.push_back(std::move(record));
}

double PrivacyLedger::total_epsilon() const {
  double total = 0;
  for (const ReleaseRecord& r : releases_) total += r.epsilon;
  return total;
}

double PrivacyLedger::individual_loss(const std::string& subscriber,
                                      Protection p) const {
  bool known = false;
  double trip_loss = 0;
  for (const ReleaseRecord& r : releases_) {
    auto it = r.contributed.find(subscriber);
    if (it == r.contributed.end()) continue;
    known = true;
    trip_loss += r.epsilon * static_cast<double>(it->second);
  }
  if (!known) return 0;
  if (p == Protection::kTripLevel) return trip_loss;
  return total_epsilon();
}

void PrivacyLedger::write_record_jsonl(std::ostream& out,
                                       const ReleaseRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["epsilon"] = r.epsilon;
  j["cap"] = r.cap;
  j["level"] = r.level;
  j["day"] = r.day;
  nlohmann::json contrib = nlohmann::json::object();
  for (const auto& [subscriber, n] : r.contributed) contrib[subscriber] = n;
  j["contrib"] = std::move(contrib);
  out << j.dump() << '\n';
}

void PrivacyLedger::save_jsonl(std::ostream& out) const {
  for (const ReleaseRecord& r : releases_) write_record_jsonl(out, r);
}

PrivacyLedger PrivacyLedger::load_jsonl(std::istream& in) {
  PrivacyLedger ledger;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("ledger line " + std::to_string(line_no) + ": " + e.what());
    }
    ReleaseRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      r.epsilon = j.at("epsilon").get<double>();
      r.cap = j.at("cap").get<int>();
      r.level = j.at("level").get<int>();
      r.day = j.at("day").get<int>();
      for (const auto& [key, value] : j.at("contrib").items()) {
        r.contributed[key] = value.get<int64_t>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("ledger line " + std::to_string(line_no) + ": " + e.what());
    }
    ledger.append(std::move(r));
  }
  return ledger;
}

}  // namespace dpod

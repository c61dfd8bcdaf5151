// Copyright 2026 The lossmon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Loss injection: the randomized dropped-count injector and deterministic
// filters given by explicit segmentations.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "automata.hpp"
#include "lossmodel.hpp"

namespace lossmon {

struct LossConfig {
  double rho = 0.1;
  double eta = 3.0;
  unsigned bound_n = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  // Uniform on [0, 1).
  virtual double uniform() = 0;
};

// mt19937_64; uniform() takes the top 53 bits of one draw.
class Mt64Source final : public RandomSource {
 public:
  explicit Mt64Source(std::uint64_t seed) : engine_(seed) {}
  double uniform() override;
  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
// Independent seed for trace `index` of stream `stream`.
std::uint64_t subseed(std::uint64_t seed, std::uint64_t index,
                      std::uint64_t stream = 0);

bool bernoulli(RandomSource& rng, double p);
// Exponential with mean `mean`, by inverse CDF.
double exponential(RandomSource& rng, double mean);

// Count symbols replacing a skip of m events: (m mod n) if nonzero, then
// floor(m / n) copies of n.
std::vector<unsigned> skip_symbols(std::size_t m, unsigned bound_n);

struct InjectStats {
  std::size_t creation = 0;  // replicated creation events
  std::size_t kept = 0;      // events copied verbatim after the prefix
  std::size_t skipped = 0;
  std::size_t emitted = 0;   // count symbols written
};

struct InjectResult {
  std::vector<std::string> output;
  InjectStats stats;
};

// Count symbols are written as "1".."bound_n", the names used by
// dropped_count(sigma, bound_n).
InjectResult inject_dropped_count(const std::vector<std::string>& trace,
                                  std::size_t creation_prefix_len,
                                  const LossConfig& cfg, RandomSource& rng);

// One segment per entry: (length, replacement gamma).
using Segmentation = std::vector<std::pair<std::size_t, Symbol>>;

// Concatenated replacements; each segment must lie in R^-1 of its gamma.
std::vector<Symbol> apply_filter(const LossModel& model,
                                 const std::vector<Symbol>& trace,
                                 const Segmentation& segmentation);

}  // namespace lossmon

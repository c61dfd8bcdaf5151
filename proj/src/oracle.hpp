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

// Brute-force ground truth: completion sets by factor enumeration, verdict
// classification, and exhaustive monitor checks. Test oracle only.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "automata.hpp"
#include "lossmodel.hpp"
#include "synthesis.hpp"

namespace lossmon {

struct OracleLimits {
  std::size_t max_completions = 200000;
  std::size_t max_factor_strings = 200000;
  // Factor strings are enumerated up to max(min_factor_len, |Q| * |Q_lang|).
  std::size_t min_factor_len = 6;
};

using Word = std::vector<Symbol>;

// Strings of R^-1(gamma) of length <= max_len, in length-lexicographic order.
// Throws Error(kUnsupported) for state maps.
std::vector<Word> factor_strings(const LossModel& model, Symbol gamma,
                                 std::size_t max_len,
                                 const OracleLimits& limits = {});

// R^-1(y1) ... R^-1(yk) with every factor enumerated to max_len.
std::vector<Word> completions(const LossModel& model, const Word& y,
                              std::size_t max_len,
                              const OracleLimits& limits = {});

enum class Classification { kAllViolate, kNoneViolate, kMixed };
const char* to_string(Classification c);

// A completion violates when the property ends in the error state (for NFA
// properties: when no non-error state is reached). Each completion is
// followed separately; factor languages are enumerated far enough that the
// answer is exact for DFA properties.
Classification classify(const Nfa& property, const LossModel& model,
                        const Word& y, const OracleLimits& limits = {});
Classification classify(const Dfa& property, const LossModel& model,
                        const Word& y, const OracleLimits& limits = {});

// All images f(x) of `trace` under filters whose segments are non-empty.
std::vector<Word> filter_images(const LossModel& model, const Word& trace);

struct Counterexample {
  Word y;
  Classification expected;
  bool monitor_rejects;
};

struct OracleReport {
  std::size_t checked = 0;
  std::vector<Counterexample> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

// Every y over Gamma with |y| <= max_y_len. Complete monitors must reject
// exactly the AllViolate strings; sound monitors exactly those that are not
// NoneViolate. Approximated monitors are only required never to reject a
// string that is not AllViolate.
OracleReport check_monitor_against_oracle(const Nfa& property,
                                          const LossModel& model,
                                          const AlternateMonitor& monitor,
                                          std::size_t max_y_len,
                                          const OracleLimits& limits = {});
OracleReport check_monitor_against_oracle(const Dfa& property,
                                          const LossModel& model,
                                          const AlternateMonitor& monitor,
                                          std::size_t max_y_len,
                                          const OracleLimits& limits = {});

}  // namespace lossmon

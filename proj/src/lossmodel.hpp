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

// Loss models R, a subset of Sigma* x Gamma, given by one inverse
// specification per alternate symbol.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "automata.hpp"

namespace lossmon {

// R^-1(gamma) = {sigma}.
struct SingletonInverse {
  Symbol sigma;
};

// R^-1(gamma) as a regular language over Sigma.
struct RegularInverse {
  Nfa language;
  std::string description;
};

// delta(q, R^-1(gamma)) supplied directly per property state. Bypasses the
// oracle, so reports mark it as user-asserted.
struct StateMapInverse {
  std::vector<StateSet> map;
  bool user_asserted = true;
};

// All strings with exactly counts[i] occurrences of Sigma symbol i.
struct ParikhInverse {
  std::vector<unsigned> counts;
};

using InverseSpec = std::variant<SingletonInverse, RegularInverse,
                                 StateMapInverse, ParikhInverse>;

class LossModel {
 public:
  LossModel(Alphabet sigma, Alphabet gamma, std::vector<InverseSpec> inverse,
            std::string descriptor);

  const Alphabet& sigma() const noexcept { return sigma_; }
  const Alphabet& gamma() const noexcept { return gamma_; }
  const InverseSpec& inverse(Symbol gamma) const { return inverse_.at(gamma); }
  const std::string& descriptor() const noexcept { return descriptor_; }
  bool uses_state_maps() const;

  // Same relation with Sigma re-indexed to `sigma`'s order.
  LossModel aligned_to(const Alphabet& sigma) const;

 private:
  Alphabet sigma_;
  Alphabet gamma_;
  std::vector<InverseSpec> inverse_;
  std::string descriptor_;
};

// Gamma = Sigma, R^-1(sigma) = {sigma}.
LossModel identity_loss(const Alphabet& sigma);

// Gamma = Sigma + {"1".."n"}; R^-1(k) = Sigma^k.
LossModel dropped_count(const Alphabet& sigma, unsigned n);

// Gamma = {"b'" | b in Sigma}; R^-1(b') = Delta* b.
LossModel silent_drop(const Alphabet& sigma,
                      const std::vector<std::string>& dropped);

// Gamma = Sigma + count vectors "(c1,...,ck)" with 0 < sum <= n, in Sigma
// order. Throws Error(kCapExceeded) when Gamma would exceed max_gamma.
LossModel frequency_count(const Alphabet& sigma, unsigned n,
                          std::size_t max_gamma = 4096);

// Sigma = {e<o> | e parametric, o in 1..objects} + unparameterized events;
// Gamma = events; R^-1(e) = {e1, ..., e<objects>}.
LossModel merged_objects(const std::vector<std::string>& events,
                         const std::vector<std::string>& parametric,
                         unsigned objects);

// Sigma passes through; `summary` uses `region_map` directly.
LossModel loop_summary(const Dfa& property, const std::string& summary,
                       std::vector<StateSet> region_map);

// delta(q, R^-1(gamma)) on `property`.
StateSet inverse_reach(const LossModel& model, const Dfa& property, State q,
                       Symbol gamma);

// inverse_reach for every (state, gamma), row-major by state.
std::vector<StateSet> inverse_reach_table(const LossModel& model,
                                          const Dfa& property);

// Checks alphabets and state maps against `property`.
void check_compatible(const LossModel& model, const Dfa& property);

// Membership of a Sigma-string (symbols of model.sigma()) in R^-1(gamma).
// Throws Error(kUnsupported) for state maps.
bool inverse_contains(const LossModel& model, Symbol gamma,
                      const std::vector<Symbol>& segment);

// JSON forms: {"type":"identity"} | {"type":"dropped_count","n":5} |
// {"type":"silent_drop","delta":["n"]} | {"type":"frequency_count","n":3} |
// {"type":"merged_objects","objects":2,"parametric":["c","n"]} |
// {"type":"custom"|"custom_statemap","gamma":{"k":{"regex":".."}|
//   {"map":{"0":[2,3]}}|{"symbol":"a"}}}.
LossModel loss_model_from_json(const nlohmann::json& spec, const Dfa& property);
// Accepts JSON text or the shorthand "dropped_count:2", "silent_drop:n,u",
// "frequency_count:3", "merged_objects:2:c,n", "identity".
LossModel loss_model_from_string(const std::string& text, const Dfa& property);

}  // namespace lossmon

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

// Alternate monitor synthesis: the optimal complete monitor, the sound
// variant, monitorability, and state-budgeted over-approximations.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "automata.hpp"
#include "lossmodel.hpp"

namespace lossmon {

enum class MonitorMode { kComplete, kSound };

const char* to_string(MonitorMode mode);
MonitorMode monitor_mode_from_string(const std::string& text);

struct SynthesisOptions {
  std::size_t max_states = std::size_t{1} << 20;
  std::string property_name;
};

// A monitor over Gamma whose states carry subsets of the property's states.
struct AlternateMonitor {
  MonitorMode mode = MonitorMode::kComplete;
  std::string property_name;
  std::string loss_descriptor;
  bool user_asserted = false;  // built from a state-map inverse
  bool approximated = false;   // output of approximate(); complete, not optimal

  std::vector<std::string> property_state_names;
  State property_error = 0;

  // NFA psi over Gamma on the property's states.
  Nfa alternate;
  // Subset DFA before minimization, and its merge classes.
  LabeledDfa subset;
  std::vector<State> class_of;
  // Minimized monitor; dfa.error is the rejecting state, labelled {q_err}.
  LabeledDfa minimal;

  const Alphabet& gamma() const { return minimal.dfa.alphabet; }
  std::optional<State> rejecting() const { return minimal.dfa.error; }
  std::string label_text(const SubsetLabel& label) const;
};

// psi with delta_psi(q, gamma) = delta(q, R^-1(gamma)).
Nfa alternate_nfa(const Dfa& property, const LossModel& model);

AlternateMonitor synthesize_optimal(const Dfa& property, const LossModel& model,
                                    const SynthesisOptions& options = {});

// Any subset successor that contains q_err is collapsed to {q_err}.
AlternateMonitor synthesize_sound(const Dfa& property, const LossModel& model,
                                  const SynthesisOptions& options = {});

// Monitor for an NFA property observed without loss: the NFA itself plays the
// role of psi. Requires a trap error state that is the only rejecting state.
// Both modes give the same automaton.
AlternateMonitor monitor_from_nfa(const Nfa& property, MonitorMode mode,
                                  const SynthesisOptions& options = {});

// The rejecting {q_err} state is reachable from the initial state.
bool monitorable(const AlternateMonitor& monitor);

// Keeps only the labels in `keep` (which must contain the full state set)
// and sends every transition, and the initial state, whose exact subset is not
// kept to the smallest kept superset (ties: lexicographically smallest).
AlternateMonitor approximate(const AlternateMonitor& monitor,
                             std::vector<SubsetLabel> keep);

// Initial label, {q_err} when reachable, the full state set, then the
// smallest reachable labels in breadth-first order until `budget` labels.
// When every reachable label fits, returns all of them plus the full set.
std::vector<SubsetLabel> default_keep_heuristic(const AlternateMonitor& monitor,
                                                std::size_t budget);

}  // namespace lossmon

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

// JSON and Graphviz forms of automata and monitors.

#pragma once

#include <string>

#include "automata.hpp"
#include "json.hpp"
#include "synthesis.hpp"

namespace lossmon {

// {"alphabet":[..],"states":N,"initial":i,"error":e,
//  "delta":[[state,"symbol",target],..],"labels":[[..]],"state_names":[..]}
nlohmann::json dfa_to_json(const Dfa& dfa);
nlohmann::json labeled_dfa_to_json(const LabeledDfa& dfa);
// NFA rows are [state,"symbol",target,target,..].
nlohmann::json nfa_to_json(const Nfa& nfa);

// Accepts both forms; NFA documents must mark "nfa":true. Missing DFA
// transitions go to "error"; "accepting" defaults to all but "error".
Dfa dfa_from_json(const nlohmann::json& j);
Nfa nfa_from_json(const nlohmann::json& j);
LabeledDfa labeled_dfa_from_json(const nlohmann::json& j);

// Automaton JSON plus "mode", "gamma", "labels" (rendered with property
// state names under "label_names"), "property", "loss", "user_asserted".
nlohmann::json monitor_to_json(const AlternateMonitor& monitor);

std::string dfa_to_dot(const Dfa& dfa, const std::string& title = "dfa");
std::string nfa_to_dot(const Nfa& nfa, const std::string& title = "nfa");
std::string monitor_to_dot(const AlternateMonitor& monitor);

}  // namespace lossmon

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

// Property specification files and the bundled example automata.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "automata.hpp"
#include "json.hpp"

namespace lossmon {

enum class VerdictMode { kFailIsViolation, kMatchIsViolation };

struct PropertySpec {
  std::string name;
  std::vector<std::string> events;
  std::vector<std::string> creation_events;
  std::string regex;
  VerdictMode verdict = VerdictMode::kFailIsViolation;

  bool operator==(const PropertySpec&) const = default;
};

// JSON: {"name":..,"events":[..],"creation_events":[..],"regex":..,
//        "verdict":"fail"|"match"}. Errors are Error(kSchema) naming the
// offending field.
PropertySpec spec_from_json(const nlohmann::json& j);
PropertySpec parse_spec(const std::string& text);
nlohmann::json spec_to_json(const PropertySpec& spec);
std::string serialize_spec(const PropertySpec& spec);

struct BuiltProperty {
  Dfa dfa;
  // The error state is unreachable or initial; such properties are never
  // or always violated.
  bool trivial = false;
};

// fail: x violates when no extension of x matches the pattern.
// match: x violates when some prefix of x matches.
// The result is minimal and total, with states q0.. and a trap q_err.
BuiltProperty build_property(const PropertySpec& spec);

// Explicit property from an edge list; missing transitions go to a trap
// error state named `error_name` (added when absent from `states`).
struct Edge {
  std::string from;
  std::string symbol;
  std::string to;
};
Dfa dfa_from_edges(const std::vector<std::string>& alphabet,
                   std::vector<std::string> states, const std::string& initial,
                   const std::vector<Edge>& edges,
                   const std::string& error_name = "q_err");
// Same for an NFA property; missing transitions stay empty.
Nfa nfa_from_edges(const std::vector<std::string>& alphabet,
                   std::vector<std::string> states, const std::string& initial,
                   const std::vector<Edge>& edges,
                   const std::string& error_name = "q_err");

struct BundledExample {
  std::string name;
  std::string description;
  std::optional<PropertySpec> spec;
  std::optional<Dfa> dfa;
  std::optional<Nfa> nfa;  // NFA properties
  std::vector<std::string> creation_events;
  // Suggested loss model JSON.
  nlohmann::json loss;
};

// safeiter, safeiter2 (two-iterator composite), nfa7 (artificial NFA
// property), loop8 (loop property with its summary map).
std::vector<BundledExample> bundled_examples();
std::optional<BundledExample> find_bundled(const std::string& name);

Dfa safeiter_property();
Dfa safeiter_composite_property();
Nfa artificial_nfa_property();
Dfa loop_property();
// Region map of the loop summary symbol "k" over loop_property() states.
nlohmann::json loop_region_map();

}  // namespace lossmon

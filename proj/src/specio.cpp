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

#include "specio.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "error.hpp"

namespace lossmon {

using nlohmann::json;

namespace {

std::string string_field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kSchema, std::string(key) + ": missing");
  if (!j[key].is_string()) {
    throw Error(ErrorCode::kSchema, std::string(key) + ": expected string");
  }
  return j[key].get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) throw Error(ErrorCode::kSchema, std::string(key) + ": missing");
    return {};
  }
  const json& arr = j[key];
  if (!arr.is_array()) {
    throw Error(ErrorCode::kSchema, std::string(key) + ": expected array of strings");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      throw Error(ErrorCode::kSchema,
                  std::string(key) + "[" + std::to_string(i) + "]: expected string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

}  // namespace

PropertySpec spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "property spec: expected object");
  PropertySpec s;
  s.name = string_field(j, "name");
  s.events = string_list(j, "events", true);
  s.creation_events = string_list(j, "creation_events", false);
  s.regex = string_field(j, "regex");
  const std::string verdict = j.contains("verdict") ? string_field(j, "verdict") : "fail";
  if (verdict == "fail") {
    s.verdict = VerdictMode::kFailIsViolation;
  } else if (verdict == "match") {
    s.verdict = VerdictMode::kMatchIsViolation;
  } else {
    throw Error(ErrorCode::kSchema, "verdict: expected \"fail\" or \"match\"");
  }
  if (s.events.empty()) throw Error(ErrorCode::kSchema, "events: must not be empty");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    if (!seen.insert(s.events[i]).second) {
      throw Error(ErrorCode::kSchema,
                  "events[" + std::to_string(i) + "]: duplicate '" + s.events[i] + "'");
    }
  }
  for (std::size_t i = 0; i < s.creation_events.size(); ++i) {
    if (!seen.count(s.creation_events[i])) {
      throw Error(ErrorCode::kSchema, "creation_events[" + std::to_string(i) +
                                          "]: '" + s.creation_events[i] +
                                          "' is not in events");
    }
  }
  try {
    compile_regex(s.regex, Alphabet(s.events));
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchema, std::string("regex: ") + e.what());
  }
  return s;
}

PropertySpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("property spec JSON: ") + e.what());
  }
  return spec_from_json(j);
}

json spec_to_json(const PropertySpec& spec) {
  return json{{"name", spec.name},
              {"events", spec.events},
              {"creation_events", spec.creation_events},
              {"regex", spec.regex},
              {"verdict", spec.verdict == VerdictMode::kFailIsViolation ? "fail" : "match"}};
}

std::string serialize_spec(const PropertySpec& spec) {
  return spec_to_json(spec).dump(2) + "\n";
}

namespace {

// Names states q0, q1, ... in order with the error state last as q_err.
Dfa name_property_states(Dfa dfa) {
  dfa.state_names.assign(dfa.num_states, "");
  std::size_t next = 0;
  for (State s = 0; s < dfa.num_states; ++s) {
    dfa.state_names[s] =
        dfa.error && s == *dfa.error ? "q_err" : "q" + std::to_string(next++);
  }
  return dfa;
}

}  // namespace

BuiltProperty build_property(const PropertySpec& spec) {
  const Alphabet sigma(spec.events);
  const std::size_t k = sigma.size();
  LabeledDfa det = determinize(compile_regex(spec.regex, sigma));
  const Dfa& d = det.dfa;

  // One extra state for the trap.
  const State err = static_cast<State>(d.num_states);
  Dfa prop(sigma, d.num_states + 1);
  prop.error = err;
  prop.accepting.assign(prop.num_states, true);
  prop.accepting[err] = false;
  for (Symbol a = 0; a < k; ++a) prop.next(err, a) = err;

  if (spec.verdict == VerdictMode::kFailIsViolation) {
    std::vector<bool> live = coreachable(d, d.accepting);
    auto map = [&](State s) { return live[s] ? s : err; };
    for (State s = 0; s < d.num_states; ++s) {
      for (Symbol a = 0; a < k; ++a) prop.next(s, a) = map(d.next(s, a));
    }
    prop.initial = map(d.initial);
  } else {
    auto map = [&](State s) { return d.accepting[s] ? err : s; };
    for (State s = 0; s < d.num_states; ++s) {
      for (Symbol a = 0; a < k; ++a) prop.next(s, a) = map(d.next(s, a));
    }
    prop.initial = map(d.initial);
  }
  Dfa minimal = minimize(prop).result.dfa;
  BuiltProperty out;
  out.dfa = name_property_states(std::move(minimal));
  out.trivial = out.dfa.initial == *out.dfa.error ||
                !reachable_states(out.dfa)[*out.dfa.error];
  return out;
}

namespace {

std::vector<std::string> with_error(std::vector<std::string> states,
                                    const std::string& error_name) {
  if (std::find(states.begin(), states.end(), error_name) == states.end()) {
    states.push_back(error_name);
  }
  return states;
}

State state_index(const std::vector<std::string>& states, const std::string& name) {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown state '" + name + "'");
  }
  return static_cast<State>(it - states.begin());
}

}  // namespace

Dfa dfa_from_edges(const std::vector<std::string>& alphabet,
                   std::vector<std::string> states, const std::string& initial,
                   const std::vector<Edge>& edges, const std::string& error_name) {
  states = with_error(std::move(states), error_name);
  Alphabet sigma(alphabet);
  Dfa dfa(sigma, states.size());
  const State err = state_index(states, error_name);
  std::fill(dfa.delta.begin(), dfa.delta.end(), err);
  dfa.accepting.assign(states.size(), true);
  dfa.accepting[err] = false;
  dfa.error = err;
  dfa.initial = state_index(states, initial);
  std::vector<bool> set(dfa.delta.size(), false);
  for (const auto& e : edges) {
    State from = state_index(states, e.from);
    Symbol a = sigma.at(e.symbol);
    std::size_t slot = from * sigma.size() + a;
    if (set[slot]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate transition from '" + e.from + "' on '" + e.symbol + "'");
    }
    set[slot] = true;
    dfa.delta[slot] = state_index(states, e.to);
  }
  dfa.state_names = std::move(states);
  dfa.validate();
  return dfa;
}

Nfa nfa_from_edges(const std::vector<std::string>& alphabet,
                   std::vector<std::string> states, const std::string& initial,
                   const std::vector<Edge>& edges, const std::string& error_name) {
  states = with_error(std::move(states), error_name);
  Alphabet sigma(alphabet);
  Nfa nfa(sigma, states.size());
  const State err = state_index(states, error_name);
  nfa.accepting.assign(states.size(), true);
  nfa.accepting[err] = false;
  nfa.error = err;
  nfa.initial = state_index(states, initial);
  for (Symbol a = 0; a < sigma.size(); ++a) nfa.add(err, a, err);
  for (const auto& e : edges) {
    nfa.add(state_index(states, e.from), sigma.at(e.symbol), state_index(states, e.to));
  }
  nfa.state_names = std::move(states);
  nfa.validate();
  return nfa;
}

Dfa safeiter_property() {
  return dfa_from_edges({"c", "n", "u"}, {"q0", "q1", "q2"}, "q0",
                        {{"q0", "c", "q1"},
                         {"q1", "n", "q1"},
                         {"q1", "u", "q2"},
                         {"q2", "u", "q2"}});
}

Dfa safeiter_composite_property() {
  return dfa_from_edges(
      {"c1", "c2", "n1", "n2", "u"},
      {"(1,1)", "(2,1)", "(2,2)", "(3,3)", "(3,1)", "(3,2)"}, "(1,1)",
      {{"(1,1)", "c1", "(2,1)"},
       {"(2,1)", "n1", "(2,1)"},
       {"(2,1)", "c2", "(2,2)"},
       {"(2,1)", "u", "(3,1)"},
       {"(2,2)", "n1", "(2,2)"},
       {"(2,2)", "n2", "(2,2)"},
       {"(2,2)", "u", "(3,3)"},
       {"(3,3)", "u", "(3,3)"},
       {"(3,1)", "c2", "(3,2)"},
       {"(3,1)", "u", "(3,1)"},
       {"(3,2)", "n2", "(3,2)"},
       {"(3,2)", "u", "(3,3)"}},
      "err");
}

Nfa artificial_nfa_property() {
  return nfa_from_edges({"a", "b", "c"}, {"q0", "q1", "q2"}, "q0",
                        {{"q0", "a", "q1"},
                         {"q0", "a", "q2"},
                         {"q0", "b", "q2"},
                         {"q0", "c", "q0"},
                         {"q1", "a", "q2"},
                         {"q1", "b", "q_err"},
                         {"q1", "c", "q1"},
                         {"q1", "c", "q2"},
                         {"q2", "a", "q0"},
                         {"q2", "b", "q_err"},
                         {"q2", "c", "q1"}});
}

Dfa loop_property() {
  return dfa_from_edges({"a", "b", "c"}, {"q0", "q1", "q2", "q3"}, "q0",
                        {{"q0", "a", "q1"},
                         {"q1", "a", "q1"},
                         {"q1", "b", "q2"},
                         {"q2", "c", "q1"},
                         {"q0", "b", "q3"},
                         {"q3", "c", "q0"}});
}

json loop_region_map() {
  return json{{"q0", {"q2", "q3"}}, {"q1", {"q2"}}, {"q2", {"q_err"}}, {"q3", {"q_err"}}};
}

std::vector<BundledExample> bundled_examples() {
  std::vector<BundledExample> out;
  {
    BundledExample e;
    e.name = "safeiter";
    e.description = "safe iterator: no update while next elements remain";
    e.spec = PropertySpec{"SafeIter", {"c", "n", "u"}, {"c"}, "c n* (u u*)?",
                          VerdictMode::kFailIsViolation};
    e.dfa = safeiter_property();
    e.creation_events = {"c"};
    e.loss = json{{"type", "dropped_count"}, {"n", 2}};
    out.push_back(std::move(e));
  }
  {
    BundledExample e;
    e.name = "safeiter2";
    e.description = "composite safe iterator monitor over two iterators";
    e.dfa = safeiter_composite_property();
    e.creation_events = {"c1"};
    e.loss = json{{"type", "merged_objects"}, {"objects", 2}, {"parametric", {"c", "n"}}};
    out.push_back(std::move(e));
  }
  {
    BundledExample e;
    e.name = "nfa7";
    e.description = "artificial NFA property with an 8-state minimal determinization";
    e.nfa = artificial_nfa_property();
    e.loss = json{{"type", "identity"}};
    out.push_back(std::move(e));
  }
  {
    BundledExample e;
    e.name = "loop8";
    e.description = "loop property whose skipped iterations are summarized by k";
    e.dfa = loop_property();
    e.loss = json{{"type", "custom_statemap"},
                  {"gamma",
                   {{"a", {{"symbol", "a"}}},
                    {"b", {{"symbol", "b"}}},
                    {"c", {{"symbol", "c"}}},
                    {"k", {{"map", loop_region_map()}}}}}};
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<BundledExample> find_bundled(const std::string& name) {
  for (auto& e : bundled_examples()) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

}  // namespace lossmon

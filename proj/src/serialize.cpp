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

#include "serialize.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "error.hpp"

namespace lossmon {

using nlohmann::json;

json dfa_to_json(const Dfa& dfa) {
  json j;
  j["alphabet"] = dfa.alphabet.symbols();
  j["states"] = dfa.num_states;
  j["initial"] = dfa.initial;
  if (dfa.error) j["error"] = *dfa.error;
  json rows = json::array();
  for (State s = 0; s < dfa.num_states; ++s) {
    for (Symbol a = 0; a < dfa.alphabet.size(); ++a) {
      rows.push_back(json::array({s, dfa.alphabet[a], dfa.next(s, a)}));
    }
  }
  j["delta"] = std::move(rows);
  bool property_shape = true;
  for (State s = 0; s < dfa.num_states; ++s) {
    if (dfa.accepting[s] != !(dfa.error && s == *dfa.error)) property_shape = false;
  }
  if (!property_shape) {
    json acc = json::array();
    for (State s = 0; s < dfa.num_states; ++s) {
      if (dfa.accepting[s]) acc.push_back(s);
    }
    j["accepting"] = std::move(acc);
  }
  if (!dfa.state_names.empty()) j["state_names"] = dfa.state_names;
  return j;
}

json labeled_dfa_to_json(const LabeledDfa& dfa) {
  json j = dfa_to_json(dfa.dfa);
  j["labels"] = dfa.labels;
  return j;
}

json nfa_to_json(const Nfa& nfa) {
  json j;
  j["nfa"] = true;
  j["alphabet"] = nfa.alphabet.symbols();
  j["states"] = nfa.num_states;
  j["initial"] = nfa.initial;
  if (nfa.error) j["error"] = *nfa.error;
  json rows = json::array();
  for (State s = 0; s < nfa.num_states; ++s) {
    for (Symbol a = 0; a < nfa.alphabet.size(); ++a) {
      const StateSet& t = nfa.next(s, a);
      if (t.empty()) continue;
      json row = json::array({s, nfa.alphabet[a]});
      for (State x : t) row.push_back(x);
      rows.push_back(std::move(row));
    }
  }
  j["delta"] = std::move(rows);
  json acc = json::array();
  for (State s = 0; s < nfa.num_states; ++s) {
    if (nfa.accepting[s]) acc.push_back(s);
  }
  j["accepting"] = std::move(acc);
  if (!nfa.state_names.empty()) j["state_names"] = nfa.state_names;
  return j;
}

namespace {

struct Header {
  Alphabet alphabet;
  std::size_t states = 0;
  State initial = 0;
  std::optional<State> error;
  std::vector<bool> accepting;
  std::vector<std::string> names;
};

Header read_header(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "automaton: expected object");
  Header h;
  try {
    h.alphabet = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
    h.states = j.at("states").get<std::size_t>();
    h.initial = j.at("initial").get<State>();
    if (j.contains("error") && !j["error"].is_null()) h.error = j["error"].get<State>();
    if (h.states == 0 || h.initial >= h.states || (h.error && *h.error >= h.states)) {
      throw Error(ErrorCode::kSchema, "automaton: state ids out of range");
    }
    h.accepting.assign(h.states, true);
    if (j.contains("accepting")) {
      h.accepting.assign(h.states, false);
      for (State s : j["accepting"].get<std::vector<State>>()) {
        if (s >= h.states) throw Error(ErrorCode::kSchema, "accepting: state out of range");
        h.accepting[s] = true;
      }
    } else if (h.error) {
      h.accepting[*h.error] = false;
    }
    if (j.contains("state_names")) {
      h.names = j["state_names"].get<std::vector<std::string>>();
      if (h.names.size() != h.states) {
        throw Error(ErrorCode::kSchema, "state_names: one name per state required");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("automaton: ") + e.what());
  }
  return h;
}

template <typename F>
void read_rows(const json& j, const Header& h, F&& on_target) {
  if (!j.contains("delta") || !j["delta"].is_array()) {
    throw Error(ErrorCode::kSchema, "delta: expected array");
  }
  try {
    for (const auto& row : j["delta"]) {
      if (!row.is_array() || row.size() < 3) {
        throw Error(ErrorCode::kSchema, "delta: rows are [state, symbol, target..]");
      }
      State s = row[0].get<State>();
      Symbol a = h.alphabet.at(row[1].get<std::string>());
      if (s >= h.states) throw Error(ErrorCode::kSchema, "delta: state out of range");
      for (std::size_t i = 2; i < row.size(); ++i) {
        State t = row[i].get<State>();
        if (t >= h.states) throw Error(ErrorCode::kSchema, "delta: target out of range");
        on_target(s, a, t);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("delta: ") + e.what());
  }
}

}  // namespace

Dfa dfa_from_json(const json& j) {
  Header h = read_header(j);
  Dfa dfa(h.alphabet, h.states);
  dfa.initial = h.initial;
  dfa.error = h.error;
  dfa.accepting = h.accepting;
  dfa.state_names = h.names;
  std::vector<bool> set(dfa.delta.size(), false);
  read_rows(j, h, [&](State s, Symbol a, State t) {
    std::size_t slot = s * h.alphabet.size() + a;
    if (set[slot]) throw Error(ErrorCode::kSchema, "delta: DFA row with two targets");
    set[slot] = true;
    dfa.delta[slot] = t;
  });
  for (std::size_t slot = 0; slot < set.size(); ++slot) {
    if (set[slot]) continue;
    if (!h.error) throw Error(ErrorCode::kSchema, "delta: partial DFA without error state");
    dfa.delta[slot] = *h.error;
  }
  dfa.validate();
  return dfa;
}

Nfa nfa_from_json(const json& j) {
  Header h = read_header(j);
  Nfa nfa(h.alphabet, h.states);
  nfa.initial = h.initial;
  nfa.error = h.error;
  nfa.accepting = h.accepting;
  nfa.state_names = h.names;
  read_rows(j, h, [&](State s, Symbol a, State t) { nfa.add(s, a, t); });
  if (h.error) {
    for (Symbol a = 0; a < h.alphabet.size(); ++a) nfa.add(*h.error, a, *h.error);
  }
  nfa.validate();
  return nfa;
}

LabeledDfa labeled_dfa_from_json(const json& j) {
  LabeledDfa out;
  out.dfa = dfa_from_json(j);
  try {
    out.labels = j.at("labels").get<std::vector<SubsetLabel>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("labels: ") + e.what());
  }
  if (out.labels.size() != out.dfa.num_states) {
    throw Error(ErrorCode::kSchema, "labels: one label per state required");
  }
  for (auto& l : out.labels) set_normalize(l);
  return out;
}

json monitor_to_json(const AlternateMonitor& monitor) {
  json j = labeled_dfa_to_json(monitor.minimal);
  j["mode"] = to_string(monitor.mode);
  j["gamma"] = monitor.gamma().symbols();
  json names = json::array();
  for (const auto& l : monitor.minimal.labels) names.push_back(monitor.label_text(l));
  j["label_names"] = std::move(names);
  j["property"] = monitor.property_name;
  j["property_states"] = monitor.property_state_names;
  j["loss"] = monitor.loss_descriptor;
  j["user_asserted"] = monitor.user_asserted;
  j["approximated"] = monitor.approximated;
  j["monitorable"] = monitorable(monitor);
  return j;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Edges between the same pair of states share one arrow.
template <typename Targets>
void write_edges(std::ostringstream& out, std::size_t n, const Alphabet& sigma,
                 Targets&& targets) {
  for (State s = 0; s < n; ++s) {
    std::map<State, std::string> merged;
    for (Symbol a = 0; a < sigma.size(); ++a) {
      for (State t : targets(s, a)) {
        std::string& l = merged[t];
        if (!l.empty()) l += ",";
        l += sigma[a];
      }
    }
    for (const auto& [t, label] : merged) {
      out << "  s" << s << " -> s" << t << " [label=" << quote(label) << "];\n";
    }
  }
}

std::string render(const std::string& title, std::size_t n, State initial,
                   const std::vector<bool>& accepting,
                   const std::function<std::string(State)>& name,
                   const std::function<void(std::ostringstream&)>& edges) {
  std::ostringstream out;
  out << "digraph " << quote(title) << " {\n  rankdir=LR;\n";
  out << "  start [shape=point];\n";
  for (State s = 0; s < n; ++s) {
    out << "  s" << s << " [label=" << quote(name(s)) << ", shape="
        << (accepting[s] ? "doublecircle" : "circle") << "];\n";
  }
  out << "  start -> s" << initial << ";\n";
  edges(out);
  out << "}\n";
  return out.str();
}

}  // namespace

std::string dfa_to_dot(const Dfa& dfa, const std::string& title) {
  return render(
      title, dfa.num_states, dfa.initial, dfa.accepting,
      [&](State s) { return dfa.state_name(s); },
      [&](std::ostringstream& out) {
        write_edges(out, dfa.num_states, dfa.alphabet, [&](State s, Symbol a) {
          return std::vector<State>{dfa.next(s, a)};
        });
      });
}

std::string nfa_to_dot(const Nfa& nfa, const std::string& title) {
  return render(
      title, nfa.num_states, nfa.initial, nfa.accepting,
      [&](State s) {
        return s < nfa.state_names.size() ? nfa.state_names[s] : std::to_string(s);
      },
      [&](std::ostringstream& out) {
        write_edges(out, nfa.num_states, nfa.alphabet,
                    [&](State s, Symbol a) { return nfa.next(s, a); });
      });
}

std::string monitor_to_dot(const AlternateMonitor& monitor) {
  const Dfa& dfa = monitor.minimal.dfa;
  std::string title = monitor.property_name.empty() ? "monitor" : monitor.property_name;
  return render(
      title + " " + to_string(monitor.mode), dfa.num_states, dfa.initial,
      dfa.accepting,
      [&](State s) { return monitor.label_text(monitor.minimal.labels[s]); },
      [&](std::ostringstream& out) {
        write_edges(out, dfa.num_states, dfa.alphabet, [&](State s, Symbol a) {
          return std::vector<State>{dfa.next(s, a)};
        });
      });
}

}  // namespace lossmon

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

#include "synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include "error.hpp"

namespace lossmon {

const char* to_string(MonitorMode mode) {
  return mode == MonitorMode::kComplete ? "complete" : "sound";
}

MonitorMode monitor_mode_from_string(const std::string& text) {
  if (text == "complete") return MonitorMode::kComplete;
  if (text == "sound") return MonitorMode::kSound;
  throw Error(ErrorCode::kInvalidArgument,
              "mode must be 'complete' or 'sound', got '" + text + "'");
}

std::string AlternateMonitor::label_text(const SubsetLabel& label) const {
  std::string out = "{";
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i) out += ",";
    State s = label[i];
    out += s < property_state_names.size() ? property_state_names[s]
                                           : std::to_string(s);
  }
  return out + "}";
}

Nfa alternate_nfa(const Dfa& property, const LossModel& model) {
  const std::vector<StateSet> table = inverse_reach_table(model, property);
  Nfa psi = Nfa::property_shell(property, model.gamma());
  const std::size_t k = model.gamma().size();
  for (State q = 0; q < property.num_states; ++q) {
    if (q == *property.error) continue;
    for (Symbol g = 0; g < k; ++g) psi.next(q, g) = table[q * k + g];
  }
  return psi;
}

namespace {

AlternateMonitor build(const Nfa& psi, MonitorMode mode,
                       const SynthesisOptions& options) {
  psi.validate();
  if (!psi.error) {
    throw Error(ErrorCode::kInvalidArgument,
                "alternate NFA needs a trap error state");
  }
  for (State s = 0; s < psi.num_states; ++s) {
    if (psi.accepting[s] != (s != *psi.error)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "alternate NFA: the error state must be the only rejecting state");
    }
  }
  AlternateMonitor m;
  m.mode = mode;
  m.property_name = options.property_name;
  m.property_state_names = psi.state_names;
  m.property_error = *psi.error;
  m.alternate = psi;
  DeterminizeOptions det;
  det.max_states = options.max_states;
  det.collapse_error = mode == MonitorMode::kSound;
  m.subset = determinize(psi, det);
  Minimized min = minimize(m.subset);
  m.minimal = std::move(min.result);
  m.class_of = std::move(min.class_of);
  return m;
}

Nfa named(Nfa psi, const Dfa& property) {
  if (psi.state_names.empty()) {
    psi.state_names.resize(property.num_states);
    for (State s = 0; s < property.num_states; ++s) {
      psi.state_names[s] = property.state_name(s);
    }
  }
  return psi;
}

AlternateMonitor synthesize(const Dfa& property, const LossModel& model,
                            MonitorMode mode, const SynthesisOptions& options) {
  AlternateMonitor m = build(named(alternate_nfa(property, model), property),
                             mode, options);
  m.loss_descriptor = model.descriptor();
  m.user_asserted = model.uses_state_maps();
  return m;
}

}  // namespace

AlternateMonitor synthesize_optimal(const Dfa& property, const LossModel& model,
                                    const SynthesisOptions& options) {
  return synthesize(property, model, MonitorMode::kComplete, options);
}

AlternateMonitor synthesize_sound(const Dfa& property, const LossModel& model,
                                  const SynthesisOptions& options) {
  return synthesize(property, model, MonitorMode::kSound, options);
}

AlternateMonitor monitor_from_nfa(const Nfa& property, MonitorMode mode,
                                  const SynthesisOptions& options) {
  // Without loss no string is Mixed, so the sound monitor is the complete
  // one. Collapsing on q_err would wrongly reject on a single failed branch.
  AlternateMonitor m = build(property, MonitorMode::kComplete, options);
  m.mode = mode;
  m.loss_descriptor = "identity";
  return m;
}

bool monitorable(const AlternateMonitor& monitor) {
  auto rej = monitor.rejecting();
  if (!rej) return false;
  return reachable_states(monitor.minimal.dfa)[*rej];
}

// ---------------------------------------------------------------------------
// Approximation

namespace {

bool label_less(const SubsetLabel& a, const SubsetLabel& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

AlternateMonitor approximate(const AlternateMonitor& monitor,
                             std::vector<SubsetLabel> keep) {
  if (monitor.mode != MonitorMode::kComplete) {
    throw Error(ErrorCode::kInvalidArgument,
                "approximation requires a complete monitor");
  }
  const Nfa& psi = monitor.alternate;
  const std::size_t n = psi.num_states;
  SubsetLabel full(n);
  for (State s = 0; s < n; ++s) full[s] = s;
  for (auto& label : keep) {
    set_normalize(label);
    if (label.empty() || label.back() >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "keep-set label is empty or out of range");
    }
  }
  // Candidate targets ordered by (cardinality, lexicographic).
  std::sort(keep.begin(), keep.end(), label_less);
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (!std::binary_search(keep.begin(), keep.end(), full, label_less)) {
    throw Error(ErrorCode::kInvalidArgument,
                "keep-set must contain the full state set");
  }
  auto redirect = [&](const SubsetLabel& exact) -> const SubsetLabel& {
    for (const auto& k : keep) {
      if (set_includes(k, exact)) return k;
    }
    return keep.back();  // unreachable: full set is kept
  };

  const std::size_t k = psi.alphabet.size();
  std::map<SubsetLabel, State> ids;
  std::vector<SubsetLabel> labels;
  std::vector<State> delta;
  auto intern = [&](const SubsetLabel& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<State>(labels.size()));
    if (inserted) {
      labels.push_back(label);
      delta.resize(labels.size() * k, 0);
    }
    return it->second;
  };
  intern(redirect(StateSet{psi.initial}));
  for (State cur = 0; cur < labels.size(); ++cur) {
    for (Symbol g = 0; g < k; ++g) {
      StateSet exact = psi.step(labels[cur], g);
      if (exact.empty()) exact = {*psi.error};
      delta[cur * k + g] = intern(redirect(exact));
    }
  }

  AlternateMonitor out;
  out.mode = MonitorMode::kComplete;
  out.property_name = monitor.property_name;
  out.loss_descriptor = monitor.loss_descriptor;
  out.user_asserted = monitor.user_asserted;
  out.approximated = true;
  out.property_state_names = monitor.property_state_names;
  out.property_error = monitor.property_error;
  out.alternate = psi;
  Dfa& dfa = out.subset.dfa;
  dfa.alphabet = psi.alphabet;
  dfa.num_states = labels.size();
  dfa.delta = std::move(delta);
  dfa.initial = 0;
  dfa.accepting.assign(labels.size(), true);
  for (State s = 0; s < labels.size(); ++s) {
    if (labels[s] == StateSet{*psi.error}) {
      dfa.accepting[s] = false;
      dfa.error = s;
    }
  }
  out.subset.labels = std::move(labels);
  Minimized min = minimize(out.subset);
  out.minimal = std::move(min.result);
  out.class_of = std::move(min.class_of);
  return out;
}

std::vector<SubsetLabel> default_keep_heuristic(const AlternateMonitor& monitor,
                                                std::size_t budget) {
  if (budget < 2) {
    throw Error(ErrorCode::kInvalidArgument, "budget must be at least 2");
  }
  const std::size_t n = monitor.alternate.num_states;
  SubsetLabel full(n);
  for (State s = 0; s < n; ++s) full[s] = s;
  const auto& labels = monitor.subset.labels;  // BFS order from determinize

  std::vector<SubsetLabel> keep;
  auto add = [&](const SubsetLabel& label) {
    if (std::find(keep.begin(), keep.end(), label) == keep.end()) {
      keep.push_back(label);
    }
  };
  if (budget >= labels.size()) {
    for (const auto& l : labels) add(l);
    add(full);
    return keep;
  }
  add(labels[monitor.subset.dfa.initial]);
  if (monitor.subset.dfa.error) add(labels[*monitor.subset.dfa.error]);
  add(full);
  if (keep.size() > budget) {
    throw Error(ErrorCode::kInvalidArgument,
                "budget " + std::to_string(budget) + " is below the " +
                    std::to_string(keep.size()) + " mandatory labels");
  }
  std::vector<SubsetLabel> candidates(labels.begin(), labels.end());
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (const auto& c : candidates) {
    if (keep.size() >= budget) break;
    add(c);
  }
  return keep;
}

}  // namespace lossmon

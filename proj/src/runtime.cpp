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

#include "runtime.hpp"

#include <sstream>
#include <utility>

#include "error.hpp"

namespace lossmon {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kTrue:
      return "true";
    case Verdict::kFalse:
      return "false";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

Monitor Monitor::from_property(const Dfa& property) {
  std::vector<SubsetLabel> labels(property.num_states);
  std::vector<std::string> names(property.num_states);
  for (State s = 0; s < property.num_states; ++s) {
    labels[s] = {s};
    names[s] = property.state_name(s);
  }
  Monitor m(property, std::move(labels));
  m.set_reference_names(std::move(names));
  return m;
}

Monitor Monitor::from_alternate(const AlternateMonitor& monitor) {
  Monitor m(monitor.minimal.dfa, monitor.minimal.labels);
  m.set_reference_names(monitor.property_state_names);
  return m;
}

Monitor::Monitor(Dfa dfa, std::vector<SubsetLabel> labels)
    : dfa_(std::move(dfa)), labels_(std::move(labels)) {
  dfa_.validate();
  if (labels_.size() != dfa_.num_states) {
    throw Error(ErrorCode::kInvalidArgument, "monitor: one label per state required");
  }
  safe_.assign(dfa_.num_states, true);
  if (dfa_.error) {
    std::vector<bool> target(dfa_.num_states, false);
    target[*dfa_.error] = true;
    std::vector<bool> live = coreachable(dfa_, target);
    for (State s = 0; s < dfa_.num_states; ++s) safe_[s] = !live[s];
  }
}

Verdict Monitor::verdict(State s) const {
  if (dfa_.error && s == *dfa_.error) return Verdict::kFalse;
  return safe_[s] ? Verdict::kTrue : Verdict::kInconclusive;
}

std::string Monitor::label_text(State s) const {
  std::string out = "{";
  const SubsetLabel& l = labels_[s];
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += ",";
    out += l[i] < reference_names_.size() ? reference_names_[l[i]]
                                          : std::to_string(l[i]);
  }
  return out + "}";
}

MonitorSession::MonitorSession(const Monitor& monitor)
    : monitor_(&monitor),
      current_(monitor.dfa().initial),
      verdict_(monitor.verdict(monitor.dfa().initial)) {}

Verdict MonitorSession::step(Symbol symbol) {
  if (poisoned_) {
    throw Error(ErrorCode::kSessionPoisoned, "session is poisoned by an earlier error");
  }
  if (symbol >= monitor_->alphabet().size()) {
    poisoned_ = true;
    throw Error(ErrorCode::kUnknownSymbol,
                "symbol id " + std::to_string(symbol) + " is outside the alphabet");
  }
  current_ = monitor_->dfa().next(current_, symbol);
  verdict_ = monitor_->verdict(current_);
  ++events_;
  return verdict_;
}

Verdict MonitorSession::step(const std::string& symbol) {
  if (poisoned_) {
    throw Error(ErrorCode::kSessionPoisoned, "session is poisoned by an earlier error");
  }
  auto id = monitor_->alphabet().find(symbol);
  if (!id) {
    poisoned_ = true;
    throw Error(ErrorCode::kUnknownSymbol, "unknown symbol '" + symbol + "'");
  }
  return step(*id);
}

namespace {

template <typename T>
RunResult run_impl(const Monitor& monitor, const std::vector<T>& stream) {
  MonitorSession session(monitor);
  RunResult r;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    Verdict v = session.step(stream[i]);
    if (v == Verdict::kFalse && !r.first_violation) r.first_violation = i;
  }
  r.verdict = session.verdict();
  r.state = session.current();
  r.events = session.events_processed();
  return r;
}

}  // namespace

RunResult run(const Monitor& monitor, const std::vector<Symbol>& stream) {
  return run_impl(monitor, stream);
}

RunResult run(const Monitor& monitor, const std::vector<std::string>& stream) {
  return run_impl(monitor, stream);
}

std::vector<std::string> tokenize_stream(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace lossmon

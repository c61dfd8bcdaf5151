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

// Incremental monitor execution with three-valued verdicts.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "automata.hpp"
#include "synthesis.hpp"

namespace lossmon {

enum class Verdict { kTrue, kFalse, kInconclusive };

const char* to_string(Verdict v);

// Immutable monitor view: a DFA whose `error` is the rejecting state, plus a
// label per state. Verdict True marks states from which rejection is
// unreachable.
class Monitor {
 public:
  // Property DFA monitor; labels are the singletons {q}.
  static Monitor from_property(const Dfa& property);
  static Monitor from_alternate(const AlternateMonitor& monitor);

  Monitor(Dfa dfa, std::vector<SubsetLabel> labels);

  const Dfa& dfa() const { return dfa_; }
  const Alphabet& alphabet() const { return dfa_.alphabet; }
  const SubsetLabel& label(State s) const { return labels_[s]; }
  Verdict verdict(State s) const;
  bool is_safe(State s) const { return safe_[s]; }

  // Label rendered with the reference automaton's state names.
  std::string label_text(State s) const;
  void set_reference_names(std::vector<std::string> names) {
    reference_names_ = std::move(names);
  }

 private:
  Dfa dfa_;
  std::vector<SubsetLabel> labels_;
  std::vector<bool> safe_;
  std::vector<std::string> reference_names_;
};

class MonitorSession {
 public:
  explicit MonitorSession(const Monitor& monitor);

  // Throws Error(kUnknownSymbol) for symbols outside the alphabet, after
  // which the session is poisoned and every further step throws.
  Verdict step(Symbol symbol);
  Verdict step(const std::string& symbol);

  State current() const { return current_; }
  Verdict verdict() const { return verdict_; }
  std::size_t events_processed() const { return events_; }
  bool poisoned() const { return poisoned_; }
  const Monitor& monitor() const { return *monitor_; }

 private:
  const Monitor* monitor_;
  State current_;
  Verdict verdict_;
  std::size_t events_ = 0;
  bool poisoned_ = false;
};

struct RunResult {
  Verdict verdict = Verdict::kInconclusive;
  State state = 0;
  // Zero-based index of the symbol that produced verdict False.
  std::optional<std::size_t> first_violation;
  std::size_t events = 0;
};

RunResult run(const Monitor& monitor, const std::vector<Symbol>& stream);
RunResult run(const Monitor& monitor, const std::vector<std::string>& stream);

// Splits on whitespace.
std::vector<std::string> tokenize_stream(const std::string& text);

}  // namespace lossmon

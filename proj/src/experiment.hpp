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

// Simulation harness: random traces, dropped-count injection, primary versus
// alternate verdicts, and CSV output.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "automata.hpp"
#include "injector.hpp"
#include "json.hpp"
#include "synthesis.hpp"

namespace lossmon {

// Uniform trace: when `creation` is non-empty the first event comes from it
// and the rest from the remaining events; otherwise every event is uniform.
std::vector<std::string> generate_trace(const std::vector<std::string>& events,
                                        const std::vector<std::string>& creation,
                                        std::size_t length, Mt64Source& rng);

struct ExperimentProperty {
  std::string name;
  Dfa property;
  std::vector<std::string> creation_events;
};

// DFA property equivalent to an NFA property (minimized determinization).
Dfa property_from_nfa(const Nfa& nfa);

// Bundled example by name, as an experiment property.
ExperimentProperty experiment_property(const std::string& bundled_name);

struct ExperimentConfig {
  std::vector<ExperimentProperty> properties;
  std::vector<double> rho{0.1, 0.3};
  std::vector<double> eta{3.0, 6.0};
  std::vector<std::size_t> lengths;  // defaults to 3..25
  std::size_t traces_per_length = 1000;
  unsigned bound_n = 5;
  std::uint64_t seed = 1;
  MonitorMode mode = MonitorMode::kComplete;
  bool trace_log = false;

  ExperimentConfig();
  void validate() const;
};

// JSON: {"properties":["safeiter", "file.json", {inline spec}], "rho":[..],
// "eta":[..], "lengths":[..] | {"min":3,"max":25}, "traces_per_length":1000,
// "bound_n":5, "seed":1, "mode":"complete", "trace_log":false}.
// Relative spec paths resolve against `base_dir`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir = {});

struct ResultRow {
  std::string property;
  double rho = 0;
  double eta = 0;
  std::string length;  // a length, or a bucket such as "5-10"
  std::size_t traces = 0;
  std::size_t violating = 0;
  std::size_t detected = 0;
  std::size_t false_positives = 0;
  std::size_t events = 0;
  std::size_t events_kept = 0;

  // Empty when no trace violated.
  std::optional<double> detection_pct() const;
  double events_kept_pct() const;
  void add(const ResultRow& other);
};

struct TraceRecord {
  std::string property;
  double rho = 0;
  double eta = 0;
  std::size_t length = 0;
  std::size_t index = 0;
  std::string trace;
  std::string lossy;
  bool violating = false;
  bool detected = false;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;     // per length
  std::vector<ResultRow> buckets;  // [5,10), [10,15), [15,20)
  std::vector<TraceRecord> traces;  // when trace_log is set
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// "5-10" style bucket of a length, or empty when outside the buckets.
std::string length_bucket(std::size_t length);

// Writes results.csv, curves.csv, buckets.csv and, with a trace log,
// traces.csv. Row order follows the configuration.
void write_experiment(const ExperimentResult& result,
                      const std::filesystem::path& out_dir);

// Runs and writes; on failure, whatever finished is written with a
// "#failed" line appended to results.csv before rethrowing.
ExperimentResult run_and_write_experiment(const ExperimentConfig& cfg,
                                          const std::filesystem::path& out_dir);

std::string format_number(double v);

}  // namespace lossmon

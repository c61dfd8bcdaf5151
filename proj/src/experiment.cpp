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

#include "experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "lossmodel.hpp"
#include "runtime.hpp"
#include "specio.hpp"

namespace lossmon {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> generate_trace(const std::vector<std::string>& events,
                                        const std::vector<std::string>& creation,
                                        std::size_t length, Mt64Source& rng) {
  if (length == 0) throw Error(ErrorCode::kInvalidArgument, "trace length must be >= 1");
  if (events.empty()) throw Error(ErrorCode::kInvalidArgument, "no events");
  std::vector<std::string> trace;
  trace.reserve(length);
  if (creation.empty()) {
    for (std::size_t i = 0; i < length; ++i) trace.push_back(events[rng.below(events.size())]);
    return trace;
  }
  std::vector<std::string> rest;
  for (const auto& e : events) {
    if (std::find(creation.begin(), creation.end(), e) == creation.end()) rest.push_back(e);
  }
  if (rest.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "every event is a creation event; no events remain for the trace body");
  }
  trace.push_back(creation[rng.below(creation.size())]);
  for (std::size_t i = 1; i < length; ++i) trace.push_back(rest[rng.below(rest.size())]);
  return trace;
}

Dfa property_from_nfa(const Nfa& nfa) {
  LabeledDfa det = determinize(nfa);
  Minimized min = minimize(det);
  Dfa dfa = std::move(min.result.dfa);
  if (!dfa.error) {
    throw Error(ErrorCode::kInvalidArgument, "NFA property has no error state");
  }
  dfa.state_names.clear();
  for (const auto& label : min.result.labels) {
    std::string name = "{";
    for (std::size_t i = 0; i < label.size(); ++i) {
      if (i) name += ",";
      name += label[i] < nfa.state_names.size() ? nfa.state_names[label[i]]
                                                : std::to_string(label[i]);
    }
    dfa.state_names.push_back(name + "}");
  }
  return dfa;
}

ExperimentProperty experiment_property(const std::string& bundled_name) {
  auto e = find_bundled(bundled_name);
  if (!e) throw Error(ErrorCode::kInvalidArgument, "no bundled property '" + bundled_name + "'");
  ExperimentProperty p;
  p.name = e->name;
  p.property = e->dfa ? *e->dfa : property_from_nfa(*e->nfa);
  p.creation_events = e->creation_events;
  return p;
}

ExperimentConfig::ExperimentConfig() {
  for (std::size_t n = 3; n <= 25; ++n) lengths.push_back(n);
}

void ExperimentConfig::validate() const {
  if (properties.empty()) throw Error(ErrorCode::kInvalidArgument, "no properties");
  if (rho.empty() || eta.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rho and eta lists must be non-empty");
  }
  if (lengths.empty()) throw Error(ErrorCode::kInvalidArgument, "lengths must be non-empty");
  if (traces_per_length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "traces_per_length must be >= 1");
  }
  for (std::size_t n : lengths) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "lengths must be >= 1");
  }
  for (double r : rho) {
    for (double e : eta) LossConfig{r, e, bound_n, seed}.validate();
  }
}

namespace {

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string(key) + ": " + e.what());
  }
}

ExperimentProperty property_entry(const json& entry, const fs::path& base_dir,
                                  std::size_t index) {
  const std::string path = "properties[" + std::to_string(index) + "]";
  PropertySpec spec;
  if (entry.is_string()) {
    const std::string text = entry.get<std::string>();
    if (find_bundled(text)) return experiment_property(text);
    fs::path file = fs::path(text).is_absolute() ? fs::path(text) : base_dir / text;
    std::ifstream in(file);
    if (!in) {
      throw Error(ErrorCode::kIo, path + ": neither a bundled property nor a readable file: " +
                                      file.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    spec = parse_spec(ss.str());
  } else if (entry.is_object()) {
    spec = spec_from_json(entry);
  } else {
    throw Error(ErrorCode::kSchema, path + ": expected name, path or inline spec");
  }
  ExperimentProperty p;
  p.name = spec.name;
  p.property = build_property(spec).dfa;
  p.creation_events = spec.creation_events;
  return p;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "experiment config: expected object");
  ExperimentConfig cfg;
  const json props = j.value("properties", json::array({"safeiter"}));
  if (!props.is_array()) throw Error(ErrorCode::kSchema, "properties: expected array");
  for (std::size_t i = 0; i < props.size(); ++i) {
    cfg.properties.push_back(property_entry(props[i], base_dir, i));
  }
  cfg.rho = field(j, "rho", cfg.rho);
  cfg.eta = field(j, "eta", cfg.eta);
  if (j.contains("lengths")) {
    const json& l = j["lengths"];
    if (l.is_object()) {
      std::size_t lo = field<std::size_t>(l, "min", 3), hi = field<std::size_t>(l, "max", 25);
      if (lo > hi) throw Error(ErrorCode::kSchema, "lengths: min exceeds max");
      cfg.lengths.clear();
      for (std::size_t n = lo; n <= hi; ++n) cfg.lengths.push_back(n);
    } else {
      cfg.lengths = field(j, "lengths", cfg.lengths);
    }
  }
  cfg.traces_per_length = field(j, "traces_per_length", cfg.traces_per_length);
  cfg.bound_n = field(j, "bound_n", cfg.bound_n);
  cfg.seed = field(j, "seed", cfg.seed);
  cfg.mode = monitor_mode_from_string(field<std::string>(j, "mode", "complete"));
  cfg.trace_log = field(j, "trace_log", cfg.trace_log);
  cfg.validate();
  return cfg;
}

std::optional<double> ResultRow::detection_pct() const {
  if (violating == 0) return std::nullopt;
  return 100.0 * static_cast<double>(detected) / static_cast<double>(violating);
}

double ResultRow::events_kept_pct() const {
  if (events == 0) return 0.0;
  return 100.0 * static_cast<double>(events_kept) / static_cast<double>(events);
}

void ResultRow::add(const ResultRow& o) {
  traces += o.traces;
  violating += o.violating;
  detected += o.detected;
  false_positives += o.false_positives;
  events += o.events;
  events_kept += o.events_kept;
}

std::string length_bucket(std::size_t length) {
  if (length >= 5 && length < 10) return "5-10";
  if (length >= 10 && length < 15) return "10-15";
  if (length >= 15 && length < 20) return "15-20";
  return "";
}

namespace {

constexpr std::uint64_t kTraceStream = 1;
constexpr std::uint64_t kInjectStream = 2;

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += v[i];
  }
  return out;
}

void run_into(const ExperimentConfig& cfg, ExperimentResult& out) {
  cfg.validate();
  for (std::size_t pi = 0; pi < cfg.properties.size(); ++pi) {
    const ExperimentProperty& p = cfg.properties[pi];
    LossModel model = dropped_count(p.property.alphabet, cfg.bound_n);
    SynthesisOptions opts;
    opts.property_name = p.name;
    AlternateMonitor alt = cfg.mode == MonitorMode::kComplete
                               ? synthesize_optimal(p.property, model, opts)
                               : synthesize_sound(p.property, model, opts);
    const Monitor primary = Monitor::from_property(p.property);
    const Monitor alternate = Monitor::from_alternate(alt);
    const std::size_t prefix = p.creation_events.empty() ? 0 : 1;
    const std::uint64_t property_seed = subseed(cfg.seed, pi, kTraceStream);

    for (std::size_t ri = 0; ri < cfg.rho.size(); ++ri) {
      for (std::size_t ei = 0; ei < cfg.eta.size(); ++ei) {
        const std::uint64_t combo = ri * cfg.eta.size() + ei;
        LossConfig loss{cfg.rho[ri], cfg.eta[ei], cfg.bound_n, cfg.seed};
        std::vector<ResultRow> buckets;
        for (std::size_t length : cfg.lengths) {
          ResultRow row;
          row.property = p.name;
          row.rho = loss.rho;
          row.eta = loss.eta;
          row.length = std::to_string(length);
          const std::uint64_t length_seed = subseed(property_seed, length);
          for (std::size_t i = 0; i < cfg.traces_per_length; ++i) {
            const std::uint64_t trace_seed = subseed(length_seed, i);
            Mt64Source trace_rng(trace_seed);
            std::vector<std::string> trace =
                generate_trace(p.property.alphabet.symbols(), p.creation_events,
                               length, trace_rng);
            Mt64Source inject_rng(subseed(trace_seed, combo, kInjectStream));
            InjectResult lossy = inject_dropped_count(trace, prefix, loss, inject_rng);
            const bool violating = run(primary, trace).verdict == Verdict::kFalse;
            const bool flagged = run(alternate, lossy.output).verdict == Verdict::kFalse;
            ++row.traces;
            row.events += trace.size();
            row.events_kept += lossy.stats.creation + lossy.stats.kept;
            if (violating) ++row.violating;
            if (violating && flagged) ++row.detected;
            if (flagged && !violating) ++row.false_positives;
            if (cfg.trace_log) {
              out.traces.push_back({p.name, loss.rho, loss.eta, length, i, join(trace),
                                    join(lossy.output), violating, flagged});
            }
          }
          const std::string bucket = length_bucket(length);
          if (!bucket.empty()) {
            auto it = std::find_if(buckets.begin(), buckets.end(),
                                   [&](const ResultRow& b) { return b.length == bucket; });
            if (it == buckets.end()) {
              ResultRow b = row;
              b.length = bucket;
              buckets.push_back(b);
            } else {
              it->add(row);
            }
          }
          out.rows.push_back(std::move(row));
        }
        for (auto& b : buckets) out.buckets.push_back(std::move(b));
      }
    }
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::string pct(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string rows_csv(const std::vector<ResultRow>& rows, const char* length_header) {
  std::ostringstream out;
  out << "property,rho,eta," << length_header
      << ",violating,detected,detection_pct,events_kept_pct,false_positives\n";
  for (const auto& r : rows) {
    out << csv_field(r.property) << ',' << format_number(r.rho) << ','
        << format_number(r.eta) << ',' << r.length << ',' << r.violating << ','
        << r.detected << ',' << pct(r.detection_pct()) << ','
        << format_number(r.events_kept_pct()) << ',' << r.false_positives << '\n';
  }
  return out.str();
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult out;
  run_into(cfg, out);
  return out;
}

void write_experiment(const ExperimentResult& result, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "results.csv", rows_csv(result.rows, "length"));
  write_file(out_dir / "buckets.csv", rows_csv(result.buckets, "bucket"));
  std::ostringstream curves;
  curves << "property,rho,eta,length,traces,violating,detected,detection_pct\n";
  for (const auto& r : result.rows) {
    curves << csv_field(r.property) << ',' << format_number(r.rho) << ','
           << format_number(r.eta) << ',' << r.length << ',' << r.traces << ','
           << r.violating << ',' << r.detected << ',' << pct(r.detection_pct()) << '\n';
  }
  write_file(out_dir / "curves.csv", curves.str());
  if (!result.traces.empty()) {
    std::ostringstream t;
    t << "property,rho,eta,length,index,trace,lossy,violating,detected\n";
    for (const auto& r : result.traces) {
      t << csv_field(r.property) << ',' << format_number(r.rho) << ','
        << format_number(r.eta) << ',' << r.length << ',' << r.index << ','
        << csv_field(r.trace) << ',' << csv_field(r.lossy) << ',' << r.violating
        << ',' << r.detected << '\n';
    }
    write_file(out_dir / "traces.csv", t.str());
  }
}

ExperimentResult run_and_write_experiment(const ExperimentConfig& cfg,
                                          const fs::path& out_dir) {
  ExperimentResult out;
  try {
    run_into(cfg, out);
  } catch (const std::exception& e) {
    write_experiment(out, out_dir);
    std::ofstream f(out_dir / "results.csv", std::ios::app);
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    f << "#failed," << csv_field(msg) << '\n';
    throw;
  }
  write_experiment(out, out_dir);
  return out;
}

}  // namespace lossmon

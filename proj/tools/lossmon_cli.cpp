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

// Command-line front end. Uses only the C interface in lossmon/lossmon.h.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lossmon/lossmon.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCounterexample = 3;

struct Failure {
  lm_status status;
  std::string message;
};

void check(lm_status s) {
  if (s != LM_OK) throw Failure{s, lm_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { lm_string_free(s); }
};
using Owned = std::unique_ptr<char, StringDeleter>;

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Property = std::unique_ptr<lm_property, Deleter<lm_property, lm_property_free>>;
using Loss = std::unique_ptr<lm_loss, Deleter<lm_loss, lm_loss_free>>;
using MonitorPtr = std::unique_ptr<lm_monitor, Deleter<lm_monitor, lm_monitor_free>>;
using Session = std::unique_ptr<lm_session, Deleter<lm_session, lm_session_free>>;

std::string take(char* s) { return Owned(s).get(); }

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{LM_ERR_IO, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{LM_ERR_IO, "cannot write " + path};
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

Property load_property(const std::string& spec) {
  lm_property* p = nullptr;
  check(lm_property_load_file(spec.c_str(), &p));
  return Property(p);
}

// `text` is a shorthand, inline JSON, or a path to a JSON file.
Loss load_loss(const lm_property* p, const std::string& text) {
  lm_loss* l = nullptr;
  if (text.empty()) {
    check(lm_loss_default(p, &l));
  } else if (text.front() != '{' && std::filesystem::is_regular_file(text)) {
    check(lm_loss_parse(p, read_input(text).c_str(), &l));
  } else {
    check(lm_loss_parse(p, text.c_str(), &l));
  }
  return Loss(l);
}

lm_mode parse_mode(const std::string& m) { return m == "sound" ? LM_MODE_SOUND : LM_MODE_COMPLETE; }

struct MonitorOptions {
  std::string property;
  std::string loss;
  std::string mode = "complete";
  std::size_t max_states = 0;
  std::size_t budget = 0;
  std::string keep;
};

void add_monitor_options(CLI::App* cmd, MonitorOptions& o, bool property_required) {
  auto* prop = cmd->add_option("-p,--property", o.property,
                               "Property: bundled name (safeiter, safeiter2, nfa7, loop8) or JSON file");
  if (property_required) prop->required();
  cmd->add_option("-l,--loss", o.loss,
                  "Loss model: identity, dropped_count:N, silent_drop:a,b, frequency_count:N, "
                  "merged_objects:N:e,f, inline JSON or a JSON file (default: the bundled "
                  "example's model, else identity)");
  cmd->add_option("-m,--mode", o.mode, "Monitor mode")
      ->check(CLI::IsMember({"complete", "sound"}))
      ->capture_default_str();
  cmd->add_option("--max-states", o.max_states, "Cap on subset-construction states (0: default)");
  auto* budget = cmd->add_option("--budget", o.budget,
                                 "Approximate with the default heuristic keeping this many labels");
  cmd->add_option("--keep", o.keep,
                  "Approximate keeping these labels: JSON array of arrays of state names")
      ->excludes(budget);
}

MonitorPtr build_monitor(const lm_property* p, const lm_loss* l, const MonitorOptions& o) {
  lm_monitor* m = nullptr;
  check(lm_monitor_synthesize(p, l, parse_mode(o.mode), o.max_states, &m));
  MonitorPtr exact(m);
  if (o.budget == 0 && o.keep.empty()) return exact;
  lm_monitor* a = nullptr;
  if (o.budget != 0) {
    check(lm_monitor_approximate(exact.get(), o.budget, &a));
  } else {
    check(lm_monitor_approximate_keep(exact.get(), o.keep.c_str(), &a));
  }
  return MonitorPtr(a);
}

void describe(const lm_monitor* m) {
  lm_monitor_info info{};
  check(lm_monitor_info_get(m, &info));
  std::cerr << "monitor: " << info.num_states << " states over " << info.gamma_size
            << " symbols, " << (info.mode == LM_MODE_SOUND ? "sound" : "complete")
            << (info.monitorable ? "" : ", not monitorable (never reports a violation)")
            << (info.user_asserted ? ", relies on a user-asserted state map" : "") << "\n";
}

int cmd_synth(const MonitorOptions& o, const std::string& out, const std::string& format) {
  Property p = load_property(o.property);
  Loss l = load_loss(p.get(), o.loss);
  MonitorPtr m = build_monitor(p.get(), l.get(), o);
  char* text = nullptr;
  check(format == "dot" ? lm_monitor_to_dot(m.get(), &text) : lm_monitor_to_json(m.get(), &text));
  write_output(out, take(text));
  describe(m.get());
  return 0;
}

int cmd_run(const MonitorOptions& o, const std::string& monitor_file, const std::string& trace) {
  MonitorPtr m;
  if (!monitor_file.empty()) {
    lm_monitor* raw = nullptr;
    check(lm_monitor_from_json(read_input(monitor_file).c_str(), &raw));
    m.reset(raw);
  } else {
    Property p = load_property(o.property);
    Loss l = load_loss(p.get(), o.loss);
    m = build_monitor(p.get(), l.get(), o);
  }
  lm_session* raw = nullptr;
  check(lm_session_new(m.get(), &raw));
  Session s(raw);
  std::istringstream in(read_input(trace));
  std::cout << "step\tsymbol\tstate\tlabel\tverdict\n";
  std::string symbol;
  for (std::size_t step = 1; in >> symbol; ++step) {
    lm_verdict v{};
    check(lm_session_step(s.get(), symbol.c_str(), &v));
    char* label = nullptr;
    check(lm_session_label(s.get(), &label));
    std::cout << step << '\t' << symbol << '\t' << lm_session_state(s.get()) << '\t'
              << take(label) << '\t' << lm_verdict_name(v) << '\n';
  }
  std::cerr << "verdict: " << lm_verdict_name(lm_session_verdict(s.get())) << " after "
            << lm_session_events(s.get()) << " events\n";
  return 0;
}

int cmd_inject(const std::string& trace, const lm_inject_config& cfg, const std::string& out) {
  char* lossy = nullptr;
  lm_inject_stats stats{};
  check(lm_inject(read_input(trace).c_str(), &cfg, &lossy, &stats));
  write_output(out, take(lossy));
  std::cerr << "stats: creation=" << stats.creation << " kept=" << stats.kept
            << " skipped=" << stats.skipped << " emitted=" << stats.emitted << "\n";
  return 0;
}

int cmd_verify(const MonitorOptions& o, std::size_t max_len) {
  Property p = load_property(o.property);
  Loss l = load_loss(p.get(), o.loss);
  MonitorPtr m = build_monitor(p.get(), l.get(), o);
  lm_verify_result r{};
  char* report = nullptr;
  check(lm_verify(p.get(), l.get(), m.get(), max_len, &r, &report));
  std::cout << take(report);
  std::cout << (r.counterexamples == 0 ? "PASS" : "FAIL") << ": " << r.checked
            << " lossy strings up to length " << max_len << ", " << r.counterexamples
            << " counterexamples (" << o.mode << " mode)\n";
  return r.counterexamples == 0 ? 0 : kExitCounterexample;
}

int cmd_experiment(const std::string& config, const std::string& out) {
  const std::string base = std::filesystem::path(config).parent_path().string();
  char* summary = nullptr;
  check(lm_experiment_run(read_input(config).c_str(), base.c_str(), out.c_str(), &summary));
  std::cout << take(summary) << "\n";
  return 0;
}

int cmd_export_dot(const MonitorOptions& o, const std::string& monitor_file,
                   const std::string& out) {
  char* dot = nullptr;
  if (!monitor_file.empty()) {
    lm_monitor* raw = nullptr;
    check(lm_monitor_from_json(read_input(monitor_file).c_str(), &raw));
    MonitorPtr m(raw);
    check(lm_monitor_to_dot(m.get(), &dot));
  } else {
    Property p = load_property(o.property);
    if (o.loss.empty() && o.budget == 0 && o.keep.empty()) {
      check(lm_property_to_dot(p.get(), &dot));
    } else {
      Loss l = load_loss(p.get(), o.loss);
      MonitorPtr m = build_monitor(p.get(), l.get(), o);
      check(lm_monitor_to_dot(m.get(), &dot));
    }
  }
  write_output(out, take(dot));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monitors for safety properties over lossy event streams"};
  app.set_version_flag("--version", lm_version());
  app.require_subcommand(1, 1);

  auto* bundled = app.add_subcommand("bundled", "List the bundled example properties as JSON");

  MonitorOptions synth_o;
  std::string synth_out, synth_format = "json";
  auto* synth = app.add_subcommand("synth", "Synthesize an alternate monitor");
  add_monitor_options(synth, synth_o, true);
  synth->add_option("-o,--out", synth_out, "Output file (default: stdout)");
  synth->add_option("--format", synth_format, "Output format")
      ->check(CLI::IsMember({"json", "dot"}))
      ->capture_default_str();

  MonitorOptions run_o;
  std::string run_monitor, run_trace = "-";
  auto* run = app.add_subcommand(
      "run", "Run a monitor over whitespace separated symbols; prints one TSV row per step");
  add_monitor_options(run, run_o, false);
  run->add_option("--monitor", run_monitor, "Monitor JSON written by synth");
  run->add_option("-t,--trace", run_trace, "Trace file, or - for stdin")->capture_default_str();
  run->callback([&] {
    if (run_monitor.empty() == run_o.property.empty()) {
      throw CLI::ValidationError("run", "give exactly one of --monitor or --property");
    }
  });

  lm_inject_config inject_cfg = lm_inject_config_default();
  std::string inject_trace = "-", inject_out;
  auto* inject = app.add_subcommand(
      "inject", "Drop events from a trace, replacing runs with dropped-count symbols");
  inject->add_option("-t,--trace", inject_trace, "Trace file, or - for stdin")->capture_default_str();
  inject->add_option("--rho", inject_cfg.rho, "Probability of disabling monitoring per event")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  inject->add_option("--eta", inject_cfg.eta, "Mean length of a disabled stretch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  inject->add_option("--bound-n", inject_cfg.bound_n, "Largest count symbol")
      ->check(CLI::Range(1u, 1000000u))
      ->capture_default_str();
  inject->add_option("--seed", inject_cfg.seed, "Random seed")->capture_default_str();
  inject->add_option("--prefix", inject_cfg.prefix, "Leading events that are never dropped")
      ->check(CLI::Range(0, 1))
      ->capture_default_str();
  inject->add_option("-o,--out", inject_out, "Output file (default: stdout)");

  MonitorOptions verify_o;
  std::size_t verify_len = 4;
  auto* verify = app.add_subcommand(
      "verify", "Check a monitor against brute-force completions of every short lossy string");
  add_monitor_options(verify, verify_o, true);
  verify->add_option("--max-len", verify_len, "Longest lossy string to check")
      ->capture_default_str();

  std::string exp_config, exp_out = "results";
  auto* experiment = app.add_subcommand("experiment", "Run the loss-injection simulation");
  experiment->add_option("-c,--config", exp_config, "Experiment JSON")->required();
  experiment->add_option("-o,--out", exp_out, "Output directory")->capture_default_str();

  MonitorOptions dot_o;
  std::string dot_monitor, dot_out;
  auto* dot = app.add_subcommand(
      "export-dot", "Graphviz description of a property, or of its monitor when --loss is given");
  add_monitor_options(dot, dot_o, false);
  dot->add_option("--monitor", dot_monitor, "Monitor JSON written by synth");
  dot->add_option("-o,--out", dot_out, "Output file (default: stdout)");
  dot->callback([&] {
    if (dot_monitor.empty() == dot_o.property.empty()) {
      throw CLI::ValidationError("export-dot", "give exactly one of --monitor or --property");
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bundled) {
      char* text = nullptr;
      check(lm_bundled_list(&text));
      std::cout << take(text) << "\n";
      return 0;
    }
    if (*synth) return cmd_synth(synth_o, synth_out, synth_format);
    if (*run) return cmd_run(run_o, run_monitor, run_trace);
    if (*inject) return cmd_inject(inject_trace, inject_cfg, inject_out);
    if (*verify) return cmd_verify(verify_o, verify_len);
    if (*experiment) return cmd_experiment(exp_config, exp_out);
    if (*dot) return cmd_export_dot(dot_o, dot_monitor, dot_out);
  } catch (const Failure& f) {
    std::cerr << "error: " << lm_status_name(f.status) << ": " << f.message << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

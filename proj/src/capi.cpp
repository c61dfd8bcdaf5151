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

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "error.hpp"
#include "experiment.hpp"
#include "injector.hpp"
#include "json.hpp"
#include "lossmodel.hpp"
#include "lossmon/lossmon.h"
#include "oracle.hpp"
#include "runtime.hpp"
#include "serialize.hpp"
#include "specio.hpp"
#include "synthesis.hpp"

using nlohmann::json;
using namespace lossmon;

struct lm_property {
  std::string name;
  Dfa dfa;                 // for NFA properties, the minimized determinization
  std::optional<Nfa> nfa;  // the original NFA, when there is one
  std::optional<PropertySpec> spec;
  std::vector<std::string> creation_events;
  std::optional<json> suggested_loss;
  bool trivial = false;
};

struct lm_loss {
  LossModel model;
};

struct lm_monitor {
  std::shared_ptr<const Monitor> runtime;
  std::optional<AlternateMonitor> alt;
  json stored;  // the source document of monitors loaded from JSON
  MonitorMode mode = MonitorMode::kComplete;
};

struct lm_session {
  std::shared_ptr<const Monitor> runtime;
  MonitorSession session;
};

namespace {

thread_local std::string g_last_error;

lm_status fail(lm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
lm_status guarded(F&& f) {
  try {
    f();
    return LM_OK;
  } catch (const Error& e) {
    return fail(static_cast<lm_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail(LM_ERR_SCHEMA, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(LM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LM_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool trivial_dfa(const Dfa& dfa) {
  return Monitor::from_property(dfa).verdict(dfa.initial) == Verdict::kTrue;
}

std::unique_ptr<lm_property> from_bundled(const BundledExample& e) {
  auto p = std::make_unique<lm_property>();
  p->name = e.name;
  p->spec = e.spec;
  if (e.nfa) p->nfa = *e.nfa;
  p->dfa = e.dfa ? *e.dfa : property_from_nfa(*e.nfa);
  p->creation_events = e.creation_events;
  p->suggested_loss = e.loss;
  p->trivial = trivial_dfa(p->dfa);
  return p;
}

std::unique_ptr<lm_property> from_document(const std::string& text) {
  if (auto e = find_bundled(text)) return from_bundled(*e);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("property: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "property: expected a JSON object");
  auto p = std::make_unique<lm_property>();
  if (j.contains("regex")) {
    PropertySpec spec = spec_from_json(j);
    BuiltProperty built = build_property(spec);
    p->name = spec.name;
    p->dfa = std::move(built.dfa);
    p->trivial = built.trivial;
    p->creation_events = spec.creation_events;
    p->spec = std::move(spec);
    return p;
  }
  if (!j.contains("delta")) {
    throw Error(ErrorCode::kSchema, "property: expected \"regex\" or \"delta\"");
  }
  p->name = j.value("name", std::string("property"));
  if (j.value("nfa", false)) {
    p->nfa = nfa_from_json(j);
    p->dfa = property_from_nfa(*p->nfa);
  } else {
    p->dfa = dfa_from_json(j);
    if (!p->dfa.is_property()) {
      throw Error(ErrorCode::kSchema, "property automaton needs an error trap state");
    }
  }
  if (j.contains("creation_events")) {
    p->creation_events = j.at("creation_events").get<std::vector<std::string>>();
  }
  p->trivial = trivial_dfa(p->dfa);
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<lm_monitor> wrap(AlternateMonitor alt) {
  auto m = std::make_unique<lm_monitor>();
  m->mode = alt.mode;
  m->runtime = std::make_shared<const Monitor>(Monitor::from_alternate(alt));
  m->alt = std::move(alt);
  return m;
}

const AlternateMonitor& construction(const lm_monitor* m) {
  require(m, "monitor");
  if (!m->alt) {
    throw Error(ErrorCode::kUnsupported,
                "monitor was loaded from JSON and has no construction to work from");
  }
  return *m->alt;
}

template <typename T>
void emit(T** out, std::unique_ptr<T> value) {
  *out = value.release();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += v[i];
  }
  return s;
}

}  // namespace

extern "C" {

const char* lm_version(void) { return "0.1.0"; }

const char* lm_last_error(void) { return g_last_error.c_str(); }

const char* lm_status_name(lm_status status) {
  switch (status) {
    case LM_OK: return "ok";
    case LM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LM_ERR_PARSE: return "parse error";
    case LM_ERR_UNKNOWN_SYMBOL: return "unknown symbol";
    case LM_ERR_ALPHABET_MISMATCH: return "alphabet mismatch";
    case LM_ERR_CAP_EXCEEDED: return "cap exceeded";
    case LM_ERR_SCHEMA: return "schema error";
    case LM_ERR_IO: return "i/o error";
    case LM_ERR_UNSUPPORTED: return "unsupported";
    case LM_ERR_SESSION_POISONED: return "session poisoned";
    case LM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void lm_string_free(char* s) { std::free(s); }

lm_status lm_property_load(const char* text, lm_property** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    emit(out, from_document(text));
  });
}

lm_status lm_property_load_file(const char* path, lm_property** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    if (!std::filesystem::exists(path)) {
      if (auto e = find_bundled(path)) {
        emit(out, from_bundled(*e));
        return;
      }
    }
    try {
      emit(out, from_document(read_file(path)));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(path) + ": " + e.what());
    }
  });
}

void lm_property_free(lm_property* p) { delete p; }

lm_status lm_bundled_list(char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    json list = json::array();
    for (const auto& e : bundled_examples()) {
      list.push_back({{"name", e.name}, {"description", e.description}, {"loss", e.loss}});
    }
    *out_json = dup(list.dump(2));
  });
}

lm_status lm_property_name(const lm_property* p, char** out) {
  return guarded([&] {
    require(p, "property");
    require(out, "out");
    *out = dup(p->name);
  });
}

int lm_property_trivial(const lm_property* p) { return p != nullptr && p->trivial ? 1 : 0; }

lm_status lm_property_to_json(const lm_property* p, char** out_json) {
  return guarded([&] {
    require(p, "property");
    require(out_json, "out_json");
    json j = p->nfa ? nfa_to_json(*p->nfa) : dfa_to_json(p->dfa);
    j["name"] = p->name;
    if (!p->creation_events.empty()) j["creation_events"] = p->creation_events;
    if (p->spec) j["spec"] = spec_to_json(*p->spec);
    *out_json = dup(j.dump(2));
  });
}

lm_status lm_property_to_dot(const lm_property* p, char** out_dot) {
  return guarded([&] {
    require(p, "property");
    require(out_dot, "out_dot");
    *out_dot = dup(p->nfa ? nfa_to_dot(*p->nfa, p->name) : dfa_to_dot(p->dfa, p->name));
  });
}

lm_status lm_loss_parse(const lm_property* p, const char* text, lm_loss** out) {
  return guarded([&] {
    require(p, "property");
    require(text, "text");
    require(out, "out");
    emit(out, std::make_unique<lm_loss>(lm_loss{loss_model_from_string(text, p->dfa)}));
  });
}

lm_status lm_loss_default(const lm_property* p, lm_loss** out) {
  return guarded([&] {
    require(p, "property");
    require(out, "out");
    LossModel model = p->suggested_loss ? loss_model_from_json(*p->suggested_loss, p->dfa)
                                        : identity_loss(p->dfa.alphabet);
    emit(out, std::make_unique<lm_loss>(lm_loss{std::move(model)}));
  });
}

void lm_loss_free(lm_loss* l) { delete l; }

lm_status lm_loss_descriptor(const lm_loss* l, char** out) {
  return guarded([&] {
    require(l, "loss");
    require(out, "out");
    *out = dup(l->model.descriptor());
  });
}

lm_status lm_monitor_synthesize(const lm_property* p, const lm_loss* l, lm_mode mode,
                                size_t max_states, lm_monitor** out) {
  return guarded([&] {
    require(p, "property");
    require(l, "loss");
    require(out, "out");
    if (mode != LM_MODE_COMPLETE && mode != LM_MODE_SOUND) {
      throw Error(ErrorCode::kInvalidArgument, "unknown monitor mode");
    }
    SynthesisOptions opts;
    if (max_states != 0) opts.max_states = max_states;
    opts.property_name = p->name;
    const MonitorMode m = mode == LM_MODE_SOUND ? MonitorMode::kSound : MonitorMode::kComplete;
    // Lossless NFA properties keep their own state names in the labels.
    if (p->nfa && l->model.descriptor() == "identity") {
      emit(out, wrap(monitor_from_nfa(*p->nfa, m, opts)));
      return;
    }
    emit(out, wrap(m == MonitorMode::kSound ? synthesize_sound(p->dfa, l->model, opts)
                                            : synthesize_optimal(p->dfa, l->model, opts)));
  });
}

lm_status lm_monitor_from_json(const char* text, lm_monitor** out) {
  return guarded([&] {
    require(text, "json");
    require(out, "out");
    json j = json::parse(text);
    LabeledDfa l = labeled_dfa_from_json(j);
    if (!l.dfa.error) throw Error(ErrorCode::kSchema, "monitor: missing rejecting state");
    auto m = std::make_unique<lm_monitor>();
    Monitor runtime(l.dfa, l.labels);
    if (j.contains("property_states")) {
      runtime.set_reference_names(j.at("property_states").get<std::vector<std::string>>());
    }
    m->runtime = std::make_shared<const Monitor>(std::move(runtime));
    m->mode = monitor_mode_from_string(j.value("mode", std::string("complete")));
    m->stored = std::move(j);
    emit(out, std::move(m));
  });
}

lm_status lm_monitor_approximate(const lm_monitor* m, size_t budget, lm_monitor** out) {
  return guarded([&] {
    const AlternateMonitor& alt = construction(m);
    require(out, "out");
    emit(out, wrap(approximate(alt, default_keep_heuristic(alt, budget))));
  });
}

lm_status lm_monitor_approximate_keep(const lm_monitor* m, const char* keep_json,
                                      lm_monitor** out) {
  return guarded([&] {
    const AlternateMonitor& alt = construction(m);
    require(keep_json, "keep_json");
    require(out, "out");
    json j = json::parse(keep_json);
    if (!j.is_array()) throw Error(ErrorCode::kSchema, "keep: expected an array of arrays");
    std::vector<SubsetLabel> keep;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_array()) {
        throw Error(ErrorCode::kSchema, "keep[" + std::to_string(i) + "]: expected an array");
      }
      SubsetLabel label;
      for (const auto& name : j[i]) {
        const std::string s = name.get<std::string>();
        const auto& names = alt.property_state_names;
        auto it = std::find(names.begin(), names.end(), s);
        if (it == names.end()) {
          throw Error(ErrorCode::kInvalidArgument,
                      "keep[" + std::to_string(i) + "]: unknown state '" + s + "'");
        }
        label.push_back(static_cast<State>(it - names.begin()));
      }
      std::sort(label.begin(), label.end());
      label.erase(std::unique(label.begin(), label.end()), label.end());
      keep.push_back(std::move(label));
    }
    emit(out, wrap(approximate(alt, std::move(keep))));
  });
}

void lm_monitor_free(lm_monitor* m) { delete m; }

lm_status lm_monitor_info_get(const lm_monitor* m, lm_monitor_info* out) {
  return guarded([&] {
    require(m, "monitor");
    require(out, "out");
    const Dfa& d = m->runtime->dfa();
    out->num_states = d.num_states;
    out->gamma_size = d.alphabet.size();
    out->monitorable = m->alt ? monitorable(*m->alt)
                              : (d.error && reachable_states(d)[*d.error]);
    out->user_asserted = m->alt ? m->alt->user_asserted : m->stored.value("user_asserted", false);
    out->has_construction = m->alt ? 1 : 0;
    out->mode = m->mode == MonitorMode::kSound ? LM_MODE_SOUND : LM_MODE_COMPLETE;
  });
}

lm_status lm_monitor_to_json(const lm_monitor* m, char** out_json) {
  return guarded([&] {
    require(m, "monitor");
    require(out_json, "out_json");
    *out_json = dup((m->alt ? monitor_to_json(*m->alt) : m->stored).dump(2));
  });
}

lm_status lm_monitor_to_dot(const lm_monitor* m, char** out_dot) {
  return guarded([&] {
    require(m, "monitor");
    require(out_dot, "out_dot");
    *out_dot = dup(m->alt ? monitor_to_dot(*m->alt) : dfa_to_dot(m->runtime->dfa(), "monitor"));
  });
}

lm_status lm_monitor_includes(const lm_monitor* a, const lm_monitor* b, int* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = includes(a->runtime->dfa(), b->runtime->dfa()) ? 1 : 0;
  });
}

lm_status lm_session_new(const lm_monitor* m, lm_session** out) {
  return guarded([&] {
    require(m, "monitor");
    require(out, "out");
    emit(out, std::make_unique<lm_session>(lm_session{m->runtime, MonitorSession(*m->runtime)}));
  });
}

void lm_session_free(lm_session* s) { delete s; }

static lm_verdict to_c(Verdict v) {
  switch (v) {
    case Verdict::kTrue: return LM_VERDICT_TRUE;
    case Verdict::kFalse: return LM_VERDICT_FALSE;
    case Verdict::kInconclusive: break;
  }
  return LM_VERDICT_INCONCLUSIVE;
}

lm_status lm_session_step(lm_session* s, const char* symbol, lm_verdict* out) {
  return guarded([&] {
    require(s, "session");
    require(symbol, "symbol");
    const lm_verdict v = to_c(s->session.step(std::string(symbol)));
    if (out != nullptr) *out = v;
  });
}

lm_verdict lm_session_verdict(const lm_session* s) {
  return s == nullptr ? LM_VERDICT_INCONCLUSIVE : to_c(s->session.verdict());
}

size_t lm_session_state(const lm_session* s) { return s == nullptr ? 0 : s->session.current(); }

size_t lm_session_events(const lm_session* s) {
  return s == nullptr ? 0 : s->session.events_processed();
}

lm_status lm_session_label(const lm_session* s, char** out) {
  return guarded([&] {
    require(s, "session");
    require(out, "out");
    *out = dup(s->runtime->label_text(s->session.current()));
  });
}

const char* lm_verdict_name(lm_verdict v) {
  switch (v) {
    case LM_VERDICT_TRUE: return "true";
    case LM_VERDICT_FALSE: return "false";
    case LM_VERDICT_INCONCLUSIVE: break;
  }
  return "inconclusive";
}

lm_inject_config lm_inject_config_default(void) {
  LossConfig d;
  return lm_inject_config{d.rho, d.eta, d.bound_n, d.seed, 0};
}

lm_status lm_inject(const char* trace_text, const lm_inject_config* cfg, char** out_trace,
                    lm_inject_stats* stats) {
  return guarded([&] {
    require(trace_text, "trace_text");
    require(cfg, "config");
    require(out_trace, "out_trace");
    LossConfig loss{cfg->rho, cfg->eta, cfg->bound_n, cfg->seed};
    loss.validate();
    Mt64Source rng(cfg->seed);
    InjectResult r = inject_dropped_count(tokenize_stream(trace_text), cfg->prefix, loss, rng);
    *out_trace = dup(join(r.output));
    if (stats != nullptr) {
      *stats = lm_inject_stats{r.stats.creation, r.stats.kept, r.stats.skipped, r.stats.emitted};
    }
  });
}

lm_status lm_verify(const lm_property* p, const lm_loss* l, const lm_monitor* m, size_t max_len,
                    lm_verify_result* out, char** out_report) {
  return guarded([&] {
    require(p, "property");
    require(l, "loss");
    require(out, "out");
    const AlternateMonitor& alt = construction(m);
    OracleReport r = p->nfa && alt.loss_descriptor == "identity" && l->model.descriptor() == "identity"
                         ? check_monitor_against_oracle(*p->nfa, l->model, alt, max_len)
                         : check_monitor_against_oracle(p->dfa, l->model, alt, max_len);
    out->checked = r.checked;
    out->counterexamples = r.counterexamples.size();
    if (out_report != nullptr) {
      std::string text;
      for (const auto& c : r.counterexamples) {
        std::string y;
        for (Symbol g : c.y) {
          if (!y.empty()) y += ' ';
          y += l->model.gamma()[g];
        }
        text += "y=[" + y + "] oracle=" + to_string(c.expected) +
                " monitor=" + (c.monitor_rejects ? "rejects" : "does not reject") + "\n";
      }
      *out_report = dup(text);
    }
  });
}

lm_status lm_experiment_run(const char* config_json, const char* base_dir, const char* out_dir,
                            char** out_summary) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out_dir, "out_dir");
    json j;
    try {
      j = json::parse(config_json);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchema, std::string("experiment config: ") + e.what());
    }
    ExperimentConfig cfg =
        experiment_config_from_json(j, base_dir ? std::filesystem::path(base_dir) : std::filesystem::path());
    std::filesystem::create_directories(out_dir);
    ExperimentResult r = run_and_write_experiment(cfg, out_dir);
    if (out_summary != nullptr) {
      std::size_t violating = 0, detected = 0, fp = 0;
      for (const auto& row : r.rows) {
        violating += row.violating;
        detected += row.detected;
        fp += row.false_positives;
      }
      json s{{"rows", r.rows.size()},         {"buckets", r.buckets.size()},
             {"violating", violating},        {"detected", detected},
             {"false_positives", fp}};
      *out_summary = dup(s.dump());
    }
  });
}

}  // extern "C"

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

/* C interface to the lossmon library. Every function that can fail returns an
 * lm_status; on failure a message is available from lm_last_error() on the
 * same thread. Strings returned through char** are owned by the caller and
 * released with lm_string_free(). */

#ifndef LOSSMON_LOSSMON_H_
#define LOSSMON_LOSSMON_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LM_API __declspec(dllexport)
#else
#define LM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lm_status {
  LM_OK = 0,
  LM_ERR_INVALID_ARGUMENT = 1,
  LM_ERR_PARSE = 2,
  LM_ERR_UNKNOWN_SYMBOL = 3,
  LM_ERR_ALPHABET_MISMATCH = 4,
  LM_ERR_CAP_EXCEEDED = 5,
  LM_ERR_SCHEMA = 6,
  LM_ERR_IO = 7,
  LM_ERR_UNSUPPORTED = 8,
  LM_ERR_SESSION_POISONED = 9,
  LM_ERR_INTERNAL = 100
} lm_status;

typedef enum lm_verdict {
  LM_VERDICT_TRUE = 0,
  LM_VERDICT_FALSE = 1,
  LM_VERDICT_INCONCLUSIVE = 2
} lm_verdict;

typedef enum lm_mode { LM_MODE_COMPLETE = 0, LM_MODE_SOUND = 1 } lm_mode;

typedef struct lm_property lm_property;
typedef struct lm_loss lm_loss;
typedef struct lm_monitor lm_monitor;
typedef struct lm_session lm_session;

LM_API const char* lm_version(void);
/* Message of the last failed call on this thread; never NULL. */
LM_API const char* lm_last_error(void);
LM_API const char* lm_status_name(lm_status status);
LM_API void lm_string_free(char* s);

/* ---- properties ---- */

/* `text` is a bundled example name, a property specification
 * ({"name","events","creation_events","regex","verdict"}) or an automaton
 * ({"alphabet","states","initial","error","delta"}, "nfa":true for NFAs). */
LM_API lm_status lm_property_load(const char* text, lm_property** out);
/* Loads `path`, or a bundled example when `path` names one. */
LM_API lm_status lm_property_load_file(const char* path, lm_property** out);
LM_API void lm_property_free(lm_property* p);
/* JSON array of bundled example names and descriptions. */
LM_API lm_status lm_bundled_list(char** out_json);
LM_API lm_status lm_property_name(const lm_property* p, char** out);
/* 1 when no trace can violate the property. */
LM_API int lm_property_trivial(const lm_property* p);
LM_API lm_status lm_property_to_json(const lm_property* p, char** out_json);
LM_API lm_status lm_property_to_dot(const lm_property* p, char** out_dot);

/* ---- loss models ---- */

/* Shorthand ("dropped_count:2", "silent_drop:n,u", "identity", ...) or JSON,
 * interpreted over the property's alphabet. */
LM_API lm_status lm_loss_parse(const lm_property* p, const char* text, lm_loss** out);
/* The loss model suggested by a bundled example, else identity. */
LM_API lm_status lm_loss_default(const lm_property* p, lm_loss** out);
LM_API void lm_loss_free(lm_loss* l);
LM_API lm_status lm_loss_descriptor(const lm_loss* l, char** out);

/* ---- monitors ---- */

typedef struct lm_monitor_info {
  size_t num_states;
  size_t gamma_size;
  int monitorable;
  int user_asserted;
  int has_construction; /* 0 when loaded from JSON */
  lm_mode mode;
} lm_monitor_info;

/* max_states == 0 selects the default cap. */
LM_API lm_status lm_monitor_synthesize(const lm_property* p, const lm_loss* l, lm_mode mode,
                                       size_t max_states, lm_monitor** out);
/* Rebuilds a runnable monitor from lm_monitor_to_json output. */
LM_API lm_status lm_monitor_from_json(const char* json, lm_monitor** out);
/* Approximation keeping the default heuristic's `budget` labels. */
LM_API lm_status lm_monitor_approximate(const lm_monitor* m, size_t budget, lm_monitor** out);
/* Approximation keeping the labels in `keep_json`, an array of arrays of
 * property state names. */
LM_API lm_status lm_monitor_approximate_keep(const lm_monitor* m, const char* keep_json,
                                             lm_monitor** out);
LM_API void lm_monitor_free(lm_monitor* m);
LM_API lm_status lm_monitor_info_get(const lm_monitor* m, lm_monitor_info* out);
LM_API lm_status lm_monitor_to_json(const lm_monitor* m, char** out_json);
LM_API lm_status lm_monitor_to_dot(const lm_monitor* m, char** out_dot);
/* 1 when every string that b does not reject is also not rejected by a. */
LM_API lm_status lm_monitor_includes(const lm_monitor* a, const lm_monitor* b, int* out);

/* ---- sessions ---- */

/* The session keeps the monitor alive; `m` may be freed afterwards. */
LM_API lm_status lm_session_new(const lm_monitor* m, lm_session** out);
LM_API void lm_session_free(lm_session* s);
/* Unknown symbols fail with LM_ERR_UNKNOWN_SYMBOL and poison the session. */
LM_API lm_status lm_session_step(lm_session* s, const char* symbol, lm_verdict* out);
LM_API lm_verdict lm_session_verdict(const lm_session* s);
LM_API size_t lm_session_state(const lm_session* s);
LM_API size_t lm_session_events(const lm_session* s);
LM_API lm_status lm_session_label(const lm_session* s, char** out);
LM_API const char* lm_verdict_name(lm_verdict v);

/* ---- injection ---- */

typedef struct lm_inject_config {
  double rho;
  double eta;
  unsigned bound_n;
  uint64_t seed;
  size_t prefix; /* leading creation events that are never dropped (0 or 1) */
} lm_inject_config;

typedef struct lm_inject_stats {
  size_t creation;
  size_t kept;
  size_t skipped;
  size_t emitted;
} lm_inject_stats;

LM_API lm_inject_config lm_inject_config_default(void);
/* Whitespace separated trace in, space separated lossy trace out. */
LM_API lm_status lm_inject(const char* trace_text, const lm_inject_config* cfg, char** out_trace,
                           lm_inject_stats* stats);

/* ---- brute-force verification ---- */

typedef struct lm_verify_result {
  size_t checked;
  size_t counterexamples;
} lm_verify_result;

/* Compares `m` against the completion oracle for every lossy string up to
 * `max_len`. `out_report` (optional) receives one line per counterexample. */
LM_API lm_status lm_verify(const lm_property* p, const lm_loss* l, const lm_monitor* m,
                           size_t max_len, lm_verify_result* out, char** out_report);

/* ---- experiments ---- */

/* Runs the simulation described by `config_json` and writes CSV files into
 * `out_dir`. Relative property paths resolve against `base_dir` (may be
 * NULL). `out_summary` (optional) receives a JSON summary. */
LM_API lm_status lm_experiment_run(const char* config_json, const char* base_dir,
                                   const char* out_dir, char** out_summary);

#ifdef __cplusplus
}
#endif

#endif /* LOSSMON_LOSSMON_H_ */

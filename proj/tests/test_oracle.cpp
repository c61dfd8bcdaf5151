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

#include <map>
#include <set>

#include "doctest.h"
#include "error.hpp"
#include "injector.hpp"
#include "lossmodel.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace lossmon;
using namespace lossmon::testing;

TEST_CASE("completions by factor concatenation") {
  Dfa p = safeiter_property();
  LossModel model = dropped_count(p.alphabet, 2);
  auto c = completions(model, chars(model.gamma(), "c2uu"), 6);
  CHECK(c.size() == 9);
  CHECK(completions(model, {}, 6) == std::vector<Word>{Word{}});
  auto all = completions(model, word(model.gamma(), {"2", "n", "u", "n", "2", "n"}), 6);
  CHECK(all.size() == 81);
  for (const auto& x : all) CHECK(dfa_run_slow(p, p.initial, x) == *p.error);
}

TEST_CASE("classification of lossy strings") {
  Dfa p = safeiter_property();
  LossModel model = dropped_count(p.alphabet, 2);
  CHECK(classify(p, model, word(model.gamma(), {"2", "n", "u", "n", "2", "n"})) ==
        Classification::kAllViolate);
  CHECK(classify(p, model, chars(model.gamma(), "c2uu")) == Classification::kMixed);
  LossModel id = identity_loss(p.alphabet);
  CHECK(classify(p, id, chars(p.alphabet, "cnnuu")) == Classification::kNoneViolate);
  CHECK(classify(p, id, chars(p.alphabet, "cnun")) == Classification::kAllViolate);
}

TEST_CASE("completion sets agree with enumerating every filter") {
  Dfa p = safeiter_property();
  const std::size_t max_x = 6;
  for (const LossModel& model : {dropped_count(p.alphabet, 2), silent_drop(p.alphabet, {"n"}),
                                 frequency_count(p.alphabet, 2)}) {
    std::map<Word, std::set<Word>> by_image;
    for (const auto& x : all_words(p.alphabet.size(), max_x)) {
      for (const auto& y : filter_images(model, x)) by_image[y].insert(x);
    }
    for (const auto& y : all_words(model.gamma().size(), 3)) {
      std::set<Word> factor;
      for (auto& x : completions(model, y, max_x)) {
        if (x.size() <= max_x) factor.insert(x);
      }
      CAPTURE(model.descriptor());
      REQUIRE(factor == by_image[y]);
    }
  }
}

TEST_CASE("classification is invariant under renaming property states") {
  std::mt19937_64 rng(61);
  for (int iter = 0; iter < 20; ++iter) {
    Dfa p = random_property(rng, 4, 2);
    // Reverse the state numbering.
    Dfa r = p;
    const State n = static_cast<State>(p.num_states);
    auto flip = [&](State s) { return n - 1 - s; };
    for (State s = 0; s < n; ++s) {
      for (Symbol a = 0; a < 2; ++a) r.next(flip(s), a) = flip(p.next(s, a));
    }
    r.initial = flip(p.initial);
    r.error = flip(*p.error);
    r.accepting.assign(n, true);
    r.accepting[*r.error] = false;
    LossModel model = dropped_count(p.alphabet, 2);
    for (const auto& y : all_words(model.gamma().size(), 3)) {
      REQUIRE(classify(p, model, y) == classify(r, model, y));
    }
  }
}

TEST_CASE("monitor checks against the oracle") {
  Dfa p = safeiter_property();
  LossModel model = dropped_count(p.alphabet, 2);
  OracleReport ok = check_monitor_against_oracle(p, model, synthesize_optimal(p, model), 4);
  CHECK(ok.ok());
  CHECK(ok.checked == 1 + 5 + 25 + 125 + 625);

  Dfa always = dfa_from_edges({"a", "b"}, {"q0"}, "q0", {{"q0", "a", "q0"}, {"q0", "b", "q0"}});
  LossModel al = dropped_count(always.alphabet, 1);
  AlternateMonitor am = synthesize_optimal(always, al);
  CHECK_FALSE(am.rejecting());
  CHECK(check_monitor_against_oracle(always, al, am, 4).ok());

  Nfa nfa = artificial_nfa_property();
  LossModel id = identity_loss(nfa.alphabet);
  AlternateMonitor exact = monitor_from_nfa(nfa, MonitorMode::kComplete);
  Word bcb = chars(nfa.alphabet, "bcb");
  CHECK(classify(nfa, id, bcb) == Classification::kAllViolate);
  const Dfa& d = exact.minimal.dfa;
  CHECK(d.run(d.initial, bcb) == *d.error);
  CHECK(check_monitor_against_oracle(nfa, id, exact, 5).ok());
}

TEST_CASE("oracle reports a monitor that is wrong") {
  Dfa p = safeiter_property();
  LossModel model = dropped_count(p.alphabet, 2);
  // The sound monitor checked as if it were complete must disagree.
  AlternateMonitor sound = synthesize_sound(p, model);
  sound.mode = MonitorMode::kComplete;
  OracleReport r = check_monitor_against_oracle(p, model, sound, 4);
  CHECK_FALSE(r.ok());
  bool has_c2uu = false;
  for (const auto& c : r.counterexamples) {
    CHECK(c.monitor_rejects);
    CHECK(c.expected == Classification::kMixed);
    has_c2uu = has_c2uu || c.y == chars(model.gamma(), "c2uu");
  }
  CHECK(has_c2uu);
}

TEST_CASE("oracle limits and unsupported factors") {
  Dfa p = loop_property();
  std::vector<StateSet> region(p.num_states, StateSet{*p.error});
  LossModel m = loop_summary(p, "k", region);
  auto code = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode{};
  };
  CHECK(code([&] { completions(m, {m.gamma().at("k")}, 4); }) == ErrorCode::kUnsupported);
  CHECK(code([&] { classify(p, m, {m.gamma().at("k")}); }) == ErrorCode::kUnsupported);

  Dfa s = safeiter_property();
  LossModel dc = dropped_count(s.alphabet, 3);
  OracleLimits tight;
  tight.max_completions = 100;
  CHECK(code([&] { completions(dc, chars(dc.gamma(), "333"), 6, tight); }) ==
        ErrorCode::kCapExceeded);
}

TEST_CASE("filter images of cnnuu include the drawn lossy strings") {
  Dfa p = safeiter_property();
  LossModel model = dropped_count(p.alphabet, 2);
  auto images = filter_images(model, chars(p.alphabet, "cnnuu"));
  auto has = [&](const std::vector<std::string>& y) {
    return std::find(images.begin(), images.end(), word(model.gamma(), y)) != images.end();
  };
  CHECK(has({"c", "2", "u", "u"}));
  CHECK(has({"c", "n", "n", "u", "1"}));
  CHECK(has({"2", "n", "2"}));
  CHECK_FALSE(has({"2", "2"}));
  // Every image must be consistent with apply_filter's length accounting.
  for (const auto& y : images) {
    std::size_t covered = 0;
    for (Symbol g : y) {
      const std::string& n = model.gamma()[g];
      covered += (n == "1" || n == "2") ? std::stoul(n) : 1;
    }
    CHECK(covered == 5);
  }
}

TEST_CASE("approximations are checked for completeness only") {
  Nfa nfa = artificial_nfa_property();
  LossModel id = identity_loss(nfa.alphabet);
  AlternateMonitor exact = monitor_from_nfa(nfa, MonitorMode::kComplete);
  AlternateMonitor approx = approximate(exact, default_keep_heuristic(exact, 3));
  CHECK(approx.approximated);
  CHECK(check_monitor_against_oracle(nfa, id, approx, 4).ok());
  // Held to the exact rule, the approximation misses violations.
  approx.approximated = false;
  OracleReport r = check_monitor_against_oracle(nfa, id, approx, 4);
  CHECK_FALSE(r.ok());
  for (const auto& c : r.counterexamples) {
    CHECK_FALSE(c.monitor_rejects);
    CHECK(c.expected == Classification::kAllViolate);
  }
}

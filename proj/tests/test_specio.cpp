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

#include "doctest.h"
#include "error.hpp"
#include "serialize.hpp"
#include "specio.hpp"
#include "test_support.hpp"

using namespace lossmon;
using namespace lossmon::testing;

namespace {

const char* kSafeIter =
    R"({"name":"SafeIter","events":["c","n","u"],"creation_events":["c"],)"
    R"("regex":"c n* (u u*)?","verdict":"fail"})";

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

// x violates under fail semantics iff no extension z (|z| <= ext) matches.
bool fail_violates(const Nfa& lang, const Word& x, std::size_t k, std::size_t ext) {
  for (const auto& z : all_words(k, ext)) {
    Word xz = x;
    xz.insert(xz.end(), z.begin(), z.end());
    if (nfa_accepts_slow(lang, xz)) return false;
  }
  return true;
}

bool match_violates(const Nfa& lang, const Word& x) {
  for (std::size_t i = 0; i <= x.size(); ++i) {
    if (nfa_accepts_slow(lang, Word(x.begin(), x.begin() + i))) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("parse the SafeIter specification") {
  PropertySpec s = parse_spec(kSafeIter);
  CHECK(s.name == "SafeIter");
  CHECK(s.events == std::vector<std::string>{"c", "n", "u"});
  CHECK(s.creation_events == std::vector<std::string>{"c"});
  CHECK(s.verdict == VerdictMode::kFailIsViolation);
  CHECK(parse_spec(serialize_spec(s)) == s);
  PropertySpec m = s;
  m.verdict = VerdictMode::kMatchIsViolation;
  m.creation_events.clear();
  CHECK(parse_spec(serialize_spec(m)) == m);
}

TEST_CASE("specification schema errors") {
  for (const char* bad : {
           R"({"name":"x","events":["a"],"creation_events":["b"],"regex":"a"})",
           R"({"events":["a"],"regex":"a"})",
           R"({"name":"x","events":[],"regex":""})",
           R"({"name":"x","events":["a","a"],"regex":"a"})",
           R"({"name":"x","events":["a"],"regex":"a b"})",
           R"({"name":"x","events":["a"],"regex":"(a"})",
           R"({"name":"x","events":["a"],"regex":"a","verdict":"maybe"})",
           R"({"name":"x","events":"a","regex":"a"})",
           R"([1,2])",
           R"(not json)"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_spec(bad); }) == ErrorCode::kSchema);
  }
  try {
    parse_spec(R"({"name":"x","events":["a"],"creation_events":["a","b"],"regex":"a"})");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("creation_events[1]") != std::string::npos);
  }
}

TEST_CASE("build_property: SafeIter from its pattern") {
  BuiltProperty b = build_property(parse_spec(kSafeIter));
  CHECK_FALSE(b.trivial);
  CHECK(b.dfa.num_states == 4);
  CHECK(b.dfa.is_property());
  Dfa drawn = canonical(safeiter_property());
  CHECK(b.dfa.delta == drawn.delta);
  CHECK(b.dfa.initial == drawn.initial);
  CHECK(*b.dfa.error == *drawn.error);
  CHECK(b.dfa.state_names == std::vector<std::string>{"q0", "q1", "q2", "q_err"});
}

TEST_CASE("build_property: match semantics") {
  BuiltProperty b = build_property({"m", {"a"}, {}, "a", VerdictMode::kMatchIsViolation});
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK((b.dfa.run(b.dfa.initial, Word(n, 0)) == *b.dfa.error) == (n >= 1));
  }
}

TEST_CASE("build_property: fail semantics on (a b)*") {
  PropertySpec s{"ab", {"a", "b"}, {}, "(a b)*", VerdictMode::kFailIsViolation};
  BuiltProperty b = build_property(s);
  CHECK(b.dfa.run(b.dfa.initial, chars(b.dfa.alphabet, "aa")) == *b.dfa.error);
  CHECK(b.dfa.run(b.dfa.initial, chars(b.dfa.alphabet, "ab")) != *b.dfa.error);
  Nfa lang = compile_regex(s.regex, b.dfa.alphabet);
  for (const auto& x : all_words(2, 4)) {
    CHECK((b.dfa.run(b.dfa.initial, x) == *b.dfa.error) == fail_violates(lang, x, 2, 4));
  }
}

TEST_CASE("build_property agrees with brute-force prefix semantics") {
  const char* patterns[] = {"a b* c", "(a|b)* c", "a (b c)* a?", "c+ a", "(a b|b a)+",
                            "a* b* c*", "b? (a c)*", "((a|b) c)* b"};
  Alphabet abc({"a", "b", "c"});
  for (const char* re : patterns) {
    CAPTURE(re);
    Nfa lang = compile_regex(re, abc);
    for (VerdictMode mode : {VerdictMode::kFailIsViolation, VerdictMode::kMatchIsViolation}) {
      BuiltProperty b = build_property({"p", {"a", "b", "c"}, {}, re, mode});
      REQUIRE(b.dfa.is_property());
      CHECK(all_distinguishable(b.dfa));
      for (const auto& x : all_words(3, 4)) {
        const bool got = b.dfa.run(b.dfa.initial, x) == *b.dfa.error;
        const bool want = mode == VerdictMode::kFailIsViolation
                              ? fail_violates(lang, x, 3, 2 * b.dfa.num_states)
                              : match_violates(lang, x);
        REQUIRE(got == want);
      }
    }
  }
}

TEST_CASE("build_property flags trivial properties") {
  CHECK(build_property({"t", {"a", "b"}, {}, "(a|b)*", VerdictMode::kFailIsViolation}).trivial);
  CHECK(build_property({"t", {"a", "b"}, {}, "", VerdictMode::kMatchIsViolation}).trivial);
  CHECK(build_property({"t", {"a", "b"}, {}, "a a*", VerdictMode::kMatchIsViolation}).trivial == false);
}

TEST_CASE("bundled examples") {
  auto all = bundled_examples();
  REQUIRE(all.size() == 4);
  CHECK(find_bundled("safeiter"));
  CHECK_FALSE(find_bundled("nope"));

  Dfa s = safeiter_property();
  CHECK(s.next(named(s, "q1"), s.alphabet.at("u")) == named(s, "q2"));
  CHECK(s.next(named(s, "q2"), s.alphabet.at("n")) == *s.error);
  CHECK(s.is_property());

  Dfa c = safeiter_composite_property();
  CHECK(c.next(named(c, "(2,2)"), c.alphabet.at("u")) == named(c, "(3,3)"));
  CHECK(c.next(named(c, "(3,3)"), c.alphabet.at("n1")) == *c.error);
  CHECK(c.is_property());

  Dfa l = loop_property();
  CHECK(l.next(named(l, "q1"), l.alphabet.at("b")) == named(l, "q2"));
  CHECK(l.next(named(l, "q2"), l.alphabet.at("c")) == named(l, "q1"));
  CHECK(l.next(named(l, "q0"), l.alphabet.at("b")) == named(l, "q3"));
  CHECK(l.next(named(l, "q3"), l.alphabet.at("c")) == named(l, "q0"));
  CHECK(l.next(named(l, "q3"), l.alphabet.at("a")) == *l.error);

  Nfa n = artificial_nfa_property();
  CHECK(n.next(0, n.alphabet.at("a")) == StateSet{1, 2});
  CHECK(n.next(1, n.alphabet.at("b")) == StateSet{3});
  CHECK(n.next(1, n.alphabet.at("a")) == StateSet{2});
}

TEST_CASE("automaton JSON round trip") {
  Dfa s = safeiter_property();
  Dfa back = dfa_from_json(dfa_to_json(s));
  CHECK(back.delta == s.delta);
  CHECK(back.state_names == s.state_names);
  CHECK(*back.error == *s.error);
  Nfa n = artificial_nfa_property();
  Nfa nb = nfa_from_json(nfa_to_json(n));
  CHECK(nb.delta == n.delta);
  CHECK(nb.accepting == n.accepting);

  auto partial = nlohmann::json::parse(
      R"({"alphabet":["a","b"],"states":2,"initial":0,"error":1,"delta":[[0,"a",0]]})");
  Dfa p = dfa_from_json(partial);
  CHECK(p.next(0, 1) == 1);
  CHECK(p.is_property());
  for (const char* bad : {R"({"alphabet":["a"],"states":1,"initial":3,"delta":[]})",
                          R"({"alphabet":["a"],"states":1,"initial":0,"delta":[]})",
                          R"({"alphabet":["a"],"states":1,"initial":0,"delta":[[0,"z",0]]})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(dfa_from_json(nlohmann::json::parse(bad)), Error);
  }

  AlternateMonitor m = synthesize_optimal(s, identity_loss(s.alphabet));
  auto j = monitor_to_json(m);
  CHECK(j["mode"] == "complete");
  CHECK(j["gamma"].size() == 3);
  LabeledDfa l = labeled_dfa_from_json(j);
  CHECK(l.labels == m.minimal.labels);
  std::string dot = monitor_to_dot(m);
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("{q_err}") != std::string::npos);
  CHECK(nfa_to_dot(n).find("->") != std::string::npos);
}

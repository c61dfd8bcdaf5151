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

#include <set>

#include "doctest.h"
#include "error.hpp"
#include "lossmodel.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace lossmon;
using namespace lossmon::testing;
using nlohmann::json;

namespace {

// Members of R^-1(g) up to max_len by membership over all Sigma strings.
std::set<Word> inverse_strings(const LossModel& m, Symbol g, std::size_t max_len) {
  std::set<Word> out;
  for (const auto& w : all_words(m.sigma().size(), max_len)) {
    if (inverse_contains(m, g, w)) out.insert(w);
  }
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("dropped_count: alphabet and count languages") {
  Alphabet sigma({"c", "n", "u"});
  LossModel m = dropped_count(sigma, 2);
  CHECK(m.gamma().symbols() == std::vector<std::string>{"c", "n", "u", "1", "2"});
  auto two = inverse_strings(m, m.gamma().at("2"), 4);
  CHECK(two.size() == 9);
  for (const auto& w : two) CHECK(w.size() == 2);
  CHECK(inverse_strings(m, m.gamma().at("c"), 3) == std::set<Word>{chars(sigma, "c")});

  LossModel one = dropped_count(sigma, 1);
  auto ones = inverse_strings(one, one.gamma().at("1"), 3);
  CHECK(ones == std::set<Word>{chars(sigma, "c"), chars(sigma, "n"), chars(sigma, "u")});

  CHECK(code_of([&] { dropped_count(sigma, 0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("dropped_count: completions of c2un") {
  Alphabet sigma({"c", "n", "u"});
  LossModel m = dropped_count(sigma, 2);
  Word y = word(m.gamma(), {"c", "2", "u", "n"});
  auto comp = completions(m, y, 6);
  CHECK(comp.size() == 9);
  for (const auto& x : comp) {
    REQUIRE(x.size() == 5);
    CHECK(x[0] == sigma.at("c"));
    CHECK(x[3] == sigma.at("u"));
    CHECK(x[4] == sigma.at("n"));
  }
}

TEST_CASE("silent_drop: inverse languages") {
  Dfa p = safeiter_property();
  const Alphabet& sigma = p.alphabet;
  LossModel m = silent_drop(sigma, {"n"});
  CHECK(m.gamma().symbols() == std::vector<std::string>{"c'", "n'", "u'"});
  std::set<Word> expected;
  for (std::size_t k = 0; k < 4; ++k) {
    Word w(k, sigma.at("n"));
    w.push_back(sigma.at("u"));
    expected.insert(w);
  }
  CHECK(inverse_strings(m, m.gamma().at("u'"), 4) == expected);

  LossModel none = silent_drop(sigma, {});
  for (Symbol g = 0; g < 3; ++g) CHECK(inverse_strings(none, g, 3) == std::set<Word>{Word{g}});

  LossModel all = silent_drop(sigma, {"c", "n", "u"});
  auto comp = completions(all, word(all.gamma(), {"u'"}), 3);
  CHECK(std::find(comp.begin(), comp.end(), chars(sigma, "nnu")) != comp.end());
  for (const auto& x : comp) CHECK(x.back() == sigma.at("u"));
  CHECK(code_of([&] { silent_drop(sigma, {"z"}); }) == ErrorCode::kUnknownSymbol);
}

TEST_CASE("frequency_count: count vectors") {
  Alphabet nu({"n", "u"});
  LossModel m = frequency_count(nu, 2);
  CHECK(inverse_strings(m, m.gamma().at("(1,1)"), 4) ==
        std::set<Word>{chars(nu, "nu"), chars(nu, "un")});
  CHECK(inverse_strings(m, m.gamma().at("(2,0)"), 4) == std::set<Word>{chars(nu, "nn")});
  // Sigma passes through, then the 5 vectors with 0 < total <= 2.
  CHECK(m.gamma().size() == 2 + 5);
  CHECK_FALSE(m.gamma().find("(0,0)"));

  Dfa p = safeiter_property();
  LossModel f = frequency_count(p.alphabet, 2);
  StateSet r = inverse_reach(f, p, named(p, "q1"), f.gamma().at("(0,1,1)"));
  CHECK(r == named_set(p, {"q2", "q_err"}));
  // Brute force over permutations.
  StateSet brute{dfa_run_slow(p, named(p, "q1"), chars(p.alphabet, "nu")),
                 dfa_run_slow(p, named(p, "q1"), chars(p.alphabet, "un"))};
  set_normalize(brute);
  CHECK(r == brute);
  CHECK_FALSE(f.uses_state_maps());

  CHECK(code_of([&] { frequency_count(p.alphabet, 20, 100); }) == ErrorCode::kCapExceeded);
}

TEST_CASE("frequency_count reach equals permutation enumeration") {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 30; ++iter) {
    Dfa p = random_property(rng, 2 + rng() % 4, 2 + rng() % 2);
    LossModel f = frequency_count(p.alphabet, 3);
    for (Symbol g = 0; g < f.gamma().size(); ++g) {
      auto strings = inverse_strings(f, g, 3);
      for (State q = 0; q < p.num_states; ++q) {
        StateSet brute;
        for (const auto& w : strings) brute.push_back(dfa_run_slow(p, q, w));
        set_normalize(brute);
        REQUIRE(inverse_reach(f, p, q, g) == brute);
      }
    }
  }
}

TEST_CASE("merged_objects: object identity is lost") {
  LossModel m = merged_objects({"c", "n", "u"}, {"c", "n"}, 2);
  const Alphabet& sigma = m.sigma();
  CHECK(m.gamma().symbols() == std::vector<std::string>{"c", "n", "u"});
  CHECK(inverse_strings(m, m.gamma().at("n"), 2) ==
        std::set<Word>{word(sigma, {"n1"}), word(sigma, {"n2"})});
  CHECK(inverse_strings(m, m.gamma().at("u"), 2) == std::set<Word>{word(sigma, {"u"})});

  LossModel single = merged_objects({"c", "n", "u"}, {"c", "n"}, 1);
  for (Symbol g = 0; g < single.gamma().size(); ++g) {
    CHECK(inverse_strings(single, g, 2).size() == 1);
  }
}

TEST_CASE("loop_summary: region maps") {
  Dfa p = loop_property();
  std::vector<StateSet> region(p.num_states, StateSet{*p.error});
  region[named(p, "q0")] = named_set(p, {"q2", "q3"});
  region[named(p, "q1")] = named_set(p, {"q2"});
  LossModel m = loop_summary(p, "k", region);
  const Symbol k = m.gamma().at("k");
  CHECK(inverse_reach(m, p, named(p, "q0"), k) == named_set(p, {"q2", "q3"}));
  CHECK(inverse_reach(m, p, named(p, "q1"), k) == named_set(p, {"q2"}));
  CHECK(inverse_reach(m, p, *p.error, k) == StateSet{*p.error});
  CHECK(m.uses_state_maps());
  for (const auto& a : p.alphabet.symbols()) {
    CHECK(inverse_reach(m, p, named(p, "q0"), m.gamma().at(a)) ==
          StateSet{p.next(named(p, "q0"), p.alphabet.at(a))});
  }
  CHECK(code_of([&] { inverse_contains(m, k, {}); }) == ErrorCode::kUnsupported);

  std::vector<StateSet> identity(p.num_states);
  for (State q = 0; q < p.num_states; ++q) identity[q] = {q};
  LossModel noop = loop_summary(p, "k", identity);
  for (State q = 0; q < p.num_states; ++q) {
    CHECK(inverse_reach(noop, p, q, noop.gamma().at("k")) == StateSet{q});
  }

  auto bad = region;
  bad[*p.error] = named_set(p, {"q0"});
  CHECK(code_of([&] { check_compatible(loop_summary(p, "k", bad), p); }) ==
        ErrorCode::kInvalidArgument);
  bad = region;
  bad.pop_back();
  CHECK(code_of([&] { check_compatible(loop_summary(p, "k", bad), p); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("inverse_reach: examples") {
  Dfa p = safeiter_property();
  LossModel dc = dropped_count(p.alphabet, 2);
  CHECK(inverse_reach(dc, p, named(p, "q1"), dc.gamma().at("2")) ==
        named_set(p, {"q1", "q2", "q_err"}));
  LossModel sd = silent_drop(p.alphabet, {"n"});
  CHECK(inverse_reach(sd, p, named(p, "q1"), sd.gamma().at("u'")) == named_set(p, {"q2"}));
  for (const LossModel* m : {&dc, &sd}) {
    for (Symbol g = 0; g < m->gamma().size(); ++g) {
      CHECK(inverse_reach(*m, p, *p.error, g) == StateSet{*p.error});
    }
  }
  CHECK(code_of([&] { inverse_reach(dc, p, 0, 99); }) != ErrorCode{});
}

TEST_CASE("inverse_reach equals bounded enumeration and is monotone") {
  std::mt19937_64 rng(22);
  for (int iter = 0; iter < 40; ++iter) {
    std::size_t k = 2 + rng() % 2;
    Dfa p = random_property(rng, 2 + rng() % 3, k);
    std::vector<LossModel> models{dropped_count(p.alphabet, 2),
                                  silent_drop(p.alphabet, {"a"}),
                                  identity_loss(p.alphabet)};
    for (const auto& m : models) {
      for (Symbol g = 0; g < m.gamma().size(); ++g) {
        const InverseSpec& spec = m.inverse(g);
        std::size_t lang_states = 1;
        if (auto* r = std::get_if<RegularInverse>(&spec)) lang_states = r->language.num_states;
        auto strings = inverse_strings(m, g, p.num_states * lang_states);
        for (State q = 0; q < p.num_states; ++q) {
          StateSet brute;
          for (const auto& w : strings) brute.push_back(dfa_run_slow(p, q, w));
          set_normalize(brute);
          REQUIRE(inverse_reach(m, p, q, g) == brute);
        }
        // Monotone in the source set.
        for (State a = 0; a < p.num_states; ++a) {
          for (State b = 0; b < p.num_states; ++b) {
            StateSet small = inverse_reach(m, p, a, g);
            StateSet big = set_union(small, inverse_reach(m, p, b, g));
            CHECK(set_includes(big, small));
          }
        }
      }
    }
  }
}

TEST_CASE("loss model construction rejects bad specifications") {
  Alphabet sigma({"a", "b"});
  Nfa empty(sigma, 1);
  CHECK(code_of([&] {
          LossModel(sigma, Alphabet({"g"}), {RegularInverse{empty, "empty"}}, "x");
        }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] {
          LossModel(sigma, Alphabet({"g", "h"}), {SingletonInverse{0}}, "x");
        }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] {
          LossModel(sigma, Alphabet({"g"}), {ParikhInverse{{0, 0}}}, "x");
        }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("loss model JSON and shorthand") {
  Dfa p = safeiter_property();
  CHECK(loss_model_from_json(json{{"type", "dropped_count"}, {"n", 5}}, p).gamma().size() == 8);
  CHECK(loss_model_from_string("dropped_count:2", p).gamma().size() == 5);
  CHECK(loss_model_from_string("identity", p).gamma().size() == 3);
  CHECK(loss_model_from_string("silent_drop:n,u", p).gamma().at("u'") == 2);
  CHECK(loss_model_from_string("silent_drop", p).gamma().size() == 3);
  CHECK(loss_model_from_string("frequency_count:1", p).gamma().size() == 6);
  CHECK(loss_model_from_string(R"({"type":"silent_drop","delta":["n"]})", p).descriptor() ==
        silent_drop(p.alphabet, {"n"}).descriptor());

  json custom = json::parse(R"({"type":"custom","gamma":{
      "c":{"symbol":"c"},"n":{"symbol":"n"},"u":{"symbol":"u"},
      "k":{"regex":"u n* u"}}})");
  LossModel m = loss_model_from_json(custom, p);
  CHECK(inverse_reach(m, p, named(p, "q1"), m.gamma().at("k")) == named_set(p, {"q2", "q_err"}));
  CHECK_FALSE(m.uses_state_maps());

  json statemap = json::parse(R"({"type":"custom_statemap","gamma":{
      "c":{"symbol":"c"},"n":{"symbol":"n"},"u":{"symbol":"u"},
      "k":{"map":{"q0":["q1","q2"],"1":[2]}}}})");
  LossModel sm = loss_model_from_json(statemap, p);
  const Symbol k = sm.gamma().at("k");
  CHECK(inverse_reach(sm, p, named(p, "q0"), k) == named_set(p, {"q1", "q2"}));
  CHECK(inverse_reach(sm, p, named(p, "q1"), k) == named_set(p, {"q2"}));
  CHECK(inverse_reach(sm, p, named(p, "q2"), k) == named_set(p, {"q_err"}));
  CHECK(sm.uses_state_maps());

  Dfa two = safeiter_composite_property();
  LossModel mo = loss_model_from_string("merged_objects:2:c,n", two);
  CHECK(mo.sigma() == two.alphabet);
  CHECK(mo.gamma().symbols() == std::vector<std::string>{"c", "n", "u"});

  for (const char* bad : {"dropped_count", "dropped_count:x", "dropped_count:0", "nope:1",
                          R"({"type":"custom","gamma":{}})", R"({"type":1})", "{bad json",
                          R"({"type":"custom_statemap","gamma":{"k":{"map":{"q9":[0]}}}})",
                          R"({"type":"custom","gamma":{"k":{"regex":"z"}}})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(loss_model_from_string(bad, p), Error);
  }
}

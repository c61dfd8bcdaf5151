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
#include <tuple>

#include "doctest.h"
#include "error.hpp"
#include "lossmodel.hpp"
#include "oracle.hpp"
#include "synthesis.hpp"
#include "test_support.hpp"

using namespace lossmon;
using namespace lossmon::testing;

TEST_CASE("regex: optional update suffix") {
  Alphabet s({"c", "n", "u"});
  Nfa r = compile_regex("c n* (u u*)?", s);
  CHECK(r.accepts(chars(s, "c")));
  CHECK(r.accepts(chars(s, "cnn")));
  CHECK(r.accepts(chars(s, "cnuu")));
  CHECK_FALSE(r.accepts(chars(s, "cnun")));
  CHECK_FALSE(r.accepts(chars(s, "")));
  CHECK_FALSE(r.accepts(chars(s, "nc")));
}

TEST_CASE("regex: empty pattern is epsilon") {
  Alphabet s({"a", "b"});
  Nfa r = compile_regex("", s);
  for (const auto& w : all_words(2, 3)) CHECK(r.accepts(w) == w.empty());
  Nfa blank = compile_regex("   ", s);
  CHECK(blank.accepts({}));
}

TEST_CASE("regex: alternation language by enumeration") {
  Alphabet s({"a", "b"});
  Nfa r = compile_regex("a|b b", s);
  std::set<Word> got;
  for (const auto& w : all_words(2, 3)) {
    if (r.accepts(w)) got.insert(w);
  }
  CHECK(got == std::set<Word>{chars(s, "a"), chars(s, "bb")});
}

TEST_CASE("regex: operators") {
  Alphabet s({"a", "b"});
  Nfa plus = compile_regex("(a b)+", s);
  CHECK_FALSE(plus.accepts({}));
  CHECK(plus.accepts(chars(s, "abab")));
  CHECK_FALSE(plus.accepts(chars(s, "aba")));
  Nfa opt = compile_regex("a? b", s);
  CHECK(opt.accepts(chars(s, "b")));
  CHECK(opt.accepts(chars(s, "ab")));
  CHECK_FALSE(opt.accepts(chars(s, "aab")));
  Nfa nested = compile_regex("((a|b)*)*", s);
  for (const auto& w : all_words(2, 4)) CHECK(nested.accepts(w));
}

TEST_CASE("regex: parse errors carry positions") {
  Alphabet s({"a", "b"});
  CHECK_THROWS_AS(compile_regex("(a", s), ParseError);
  CHECK_THROWS_AS(compile_regex("a )", s), ParseError);
  CHECK_THROWS_AS(compile_regex("a | * b", s), ParseError);
  CHECK_THROWS_AS(compile_regex("a $ b", s), ParseError);
  try {
    compile_regex("a z", s);
    FAIL("expected unknown event");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownSymbol);
  }
  try {
    compile_regex("a (b", s);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("determinize: a DFA viewed as an NFA keeps its shape") {
  Dfa p = safeiter_property();
  LabeledDfa d = determinize(Nfa::from_dfa(p));
  CHECK(d.dfa.num_states == p.num_states);
  for (const auto& l : d.labels) CHECK(l.size() == 1);
  // Map every subset state to the property state in its label.
  for (State s = 0; s < d.dfa.num_states; ++s) {
    for (Symbol a = 0; a < 3; ++a) {
      CHECK(d.labels[d.dfa.next(s, a)][0] == p.next(d.labels[s][0], a));
    }
  }
}

TEST_CASE("determinize preserves the language of random NFAs") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 150; ++iter) {
    std::size_t n = 1 + rng() % 6, k = 1 + rng() % 3;
    Nfa nfa = random_nfa(rng, n, k);
    LabeledDfa d = determinize(nfa);
    for (State s = 0; s < d.dfa.num_states; ++s) {
      bool meets = false;
      for (State q : d.labels[s]) meets = meets || nfa.accepting[q];
      CHECK(d.dfa.accepting[s] == meets);
    }
    for (const auto& w : all_words(k, 6)) {
      REQUIRE(nfa_accepts_slow(nfa, w) == d.dfa.accepts(w));
    }
  }
}

TEST_CASE("determinize: state cap is a hard error") {
  // (a|b)* a (a|b)^7 needs 2^8 subsets.
  Alphabet s({"a", "b"});
  Nfa nfa = compile_regex("(a|b)* a (a|b) (a|b) (a|b) (a|b) (a|b) (a|b) (a|b)", s);
  DeterminizeOptions opts;
  opts.max_states = 100;
  try {
    determinize(nfa, opts);
    FAIL("expected cap error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCapExceeded);
  }
  opts.max_states = 1000;
  CHECK(minimize(determinize(nfa, opts)).result.dfa.num_states == 256);
}

TEST_CASE("determinize: the artificial NFA property minimizes to 8 states") {
  Nfa nfa = artificial_nfa_property();
  LabeledDfa d = determinize(nfa);
  CHECK(d.dfa.num_states >= 8);
  Minimized m = minimize(d);
  CHECK(m.result.dfa.num_states == 8);
}

TEST_CASE("minimize preserves language and never grows") {
  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 150; ++iter) {
    std::size_t n = 1 + rng() % 6, k = 1 + rng() % 3;
    Nfa nfa = random_nfa(rng, n, k);
    LabeledDfa d = determinize(nfa);
    Minimized m = minimize(d);
    CHECK(m.result.dfa.num_states <= d.dfa.num_states);
    for (const auto& w : all_words(k, 6)) {
      REQUIRE(m.result.dfa.accepts(w) == d.dfa.accepts(w));
    }
    const Dfa& md = m.result.dfa;
    CHECK(all_distinguishable(md));
    for (bool r : reachable_states(md)) CHECK(r);
    // Labels are unions over merge classes.
    std::vector<SubsetLabel> unions(md.num_states);
    for (State s = 0; s < d.dfa.num_states; ++s) {
      if (m.class_of[s] == kNoState) continue;
      unions[m.class_of[s]] = set_union(unions[m.class_of[s]], d.labels[s]);
    }
    CHECK(unions == m.result.labels);
  }
}

TEST_CASE("minimize of a minimal DFA is a renaming") {
  Dfa p = safeiter_property();
  Minimized m = minimize(p);
  CHECK(m.result.dfa.num_states == p.num_states);
  CHECK(equivalent(m.result.dfa, p));
  Minimized again = minimize(m.result);
  CHECK(again.result.dfa.delta == m.result.dfa.delta);
}

TEST_CASE("minimize: canonical numbering puts the error state last") {
  Dfa p = safeiter_property();
  Dfa c = canonical(p);
  REQUIRE(c.error);
  CHECK(*c.error == c.num_states - 1);
  CHECK(c.initial == 0);
}

TEST_CASE("merge classes of alternate NFAs are union-closed and err-refined") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t n = 2 + rng() % 4, k = 1 + rng() % 3;
    Nfa psi = random_alternate_nfa(rng, n, k);
    LabeledDfa d = determinize(psi);
    Minimized m = minimize(d);
    std::map<SubsetLabel, State> cls;
    for (State s = 0; s < d.dfa.num_states; ++s) cls[d.labels[s]] = m.class_of[s];
    for (const auto& [a, ca] : cls) {
      for (const auto& [b, cb] : cls) {
        if (ca != cb) continue;
        auto u = cls.find(set_union(a, b));
        if (u != cls.end()) CHECK(u->second == ca);
      }
      SubsetLabel with_err = set_union(a, StateSet{*psi.error});
      auto e = cls.find(with_err);
      if (e != cls.end()) CHECK(e->second == ca);
    }
  }
}

TEST_CASE("product operations") {
  Alphabet s({"a", "b"});
  auto lang = [&](const char* re) {
    Minimized m = minimize(determinize(compile_regex(re, s)));
    return m.result.dfa;
  };
  Dfa a = lang("a b");
  Dfa b = lang("b a");
  CHECK(is_empty(intersect(a, b)));
  CHECK_FALSE(is_empty(intersect(a, lang("(a|b)*"))));
  CHECK(includes(a, a));
  CHECK(includes(lang("(a|b)*"), a));
  CHECK_FALSE(includes(a, lang("(a|b)*")));
  CHECK(equivalent(lang("a a*"), lang("a+")));
  CHECK_FALSE(equivalent(lang("a*"), lang("a+")));
  Dfa c = complement(a);
  for (const auto& w : all_words(2, 4)) CHECK(c.accepts(w) != a.accepts(w));
  Dfa other = lang("");
  other.alphabet = Alphabet({"a", "c"});
  CHECK_THROWS_AS(intersect(a, other), Error);
}

TEST_CASE("states_reachable_via: examples") {
  Dfa p = safeiter_property();
  Alphabet s = p.alphabet;
  StateSet two = states_reachable_via(p, named(p, "q0"), compile_regex("(c|n|u) (c|n|u)", s));
  CHECK(two == named_set(p, {"q1", "q2", "q_err"}));
  // Brute force over the 9 strings.
  StateSet brute;
  for (const auto& w : all_words(3, 2)) {
    if (w.size() == 2) brute.push_back(dfa_run_slow(p, named(p, "q0"), w));
  }
  set_normalize(brute);
  CHECK(two == brute);
  CHECK(states_reachable_via(p, *p.error, compile_regex("c", s)) == StateSet{*p.error});
  CHECK(states_reachable_via(p, named(p, "q1"), compile_regex("n* u", s)) ==
        named_set(p, {"q2"}));
}

TEST_CASE("states_reachable_via agrees with bounded enumeration") {
  std::mt19937_64 rng(14);
  for (int iter = 0; iter < 100; ++iter) {
    // Keeps the enumeration bound |Q| * |Q_lang| small enough to exhaust.
    std::size_t k = 1 + rng() % 3;
    std::size_t n = 2 + rng() % (k == 3 ? 2 : 3);
    Dfa p = random_property(rng, n, k);
    Nfa lang = random_nfa(rng, 1 + rng() % 2, k, 0.4);
    const std::size_t bound = std::max<std::size_t>(1, n * lang.num_states);
    auto words = all_words(k, bound);
    for (State q = 0; q < n; ++q) {
      StateSet brute;
      for (const auto& w : words) {
        if (nfa_accepts_slow(lang, w)) brute.push_back(dfa_run_slow(p, q, w));
      }
      set_normalize(brute);
      REQUIRE(states_reachable_via(p, q, lang) == brute);
    }
  }
}

namespace {

// (input, output) pairs of an NFT up to the given input length.
std::set<std::pair<Word, Word>> relation(const Nft& t, std::size_t max_in) {
  std::set<std::pair<Word, Word>> out;
  std::set<std::tuple<State, Word, Word>> seen;
  std::vector<std::tuple<State, Word, Word>> stack{{t.initial, {}, {}}};
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    auto& [s, in, outw] = cur;
    if (t.finals[s]) out.insert({in, outw});
    if (outw.size() > max_in + 2) continue;
    for (const auto& m : t.epsilon_moves) {
      if (m.from != s) continue;
      Word o = outw;
      if (m.output != kNoSymbol) o.push_back(m.output);
      stack.emplace_back(m.to, in, o);
    }
    if (in.size() == max_in) continue;
    for (Symbol a = 0; a < t.input.size(); ++a) {
      for (const auto& arc : t.arcs(s, a)) {
        Word i2 = in, o2 = outw;
        i2.push_back(a);
        if (arc.output != kNoSymbol) o2.push_back(arc.output);
        stack.emplace_back(arc.target, i2, o2);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("gnft_to_nft: a-run emits one symbol at the end") {
  Gnft g;
  g.input = Alphabet({"a"});
  g.output = Alphabet({"g"});
  g.num_states = 2;
  g.initial = 0;
  g.final_state = 1;
  g.edges.push_back({0, 1, "a*", 0});
  auto rel = relation(gnft_to_nft(g), 4);
  std::set<std::pair<Word, Word>> expected;
  for (std::size_t n = 0; n <= 4; ++n) expected.insert({Word(n, 0), Word{0}});
  CHECK(rel == expected);
}

TEST_CASE("gnft_to_nft: empty-language edge yields no paths") {
  Gnft g;
  g.input = Alphabet({"a"});
  g.output = Alphabet({"g"});
  g.num_states = 2;
  g.final_state = 1;
  Nfa empty(g.input, 1);
  g.edges.push_back({0, 1, "", 0, empty});
  CHECK(relation(gnft_to_nft(g), 3).empty());
}

TEST_CASE("gnft_to_nft: canonical three-state GNFT of dropped_count(2)") {
  Alphabet sigma({"n", "u"});
  LossModel model = dropped_count(sigma, 2);
  Gnft g;
  g.input = sigma;
  g.output = model.gamma();
  g.num_states = 3;
  g.initial = 0;
  g.final_state = 2;
  g.edges.push_back({0, 1, "", kNoSymbol});
  g.edges.push_back({1, 2, "", kNoSymbol});
  const char* inverse[] = {"n", "u", "(n|u)", "(n|u) (n|u)"};
  for (Symbol y = 0; y < model.gamma().size(); ++y) g.edges.push_back({1, 1, inverse[y], y});
  auto rel = relation(gnft_to_nft(g), 3);
  std::set<std::pair<Word, Word>> expected;
  for (const auto& x : all_words(2, 3)) {
    for (const auto& y : filter_images(model, x)) expected.insert({x, y});
  }
  CHECK(rel == expected);
}

TEST_CASE("Gnft validation rejects edges into the initial state") {
  Gnft g;
  g.input = Alphabet({"a"});
  g.output = Alphabet({"g"});
  g.num_states = 2;
  g.final_state = 1;
  g.edges.push_back({1, 0, "a", 0});
  CHECK_THROWS_AS(g.validate(), Error);
}

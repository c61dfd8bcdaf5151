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

#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <variant>

#include "error.hpp"

namespace lossmon {

namespace {

std::size_t factor_bound(const LossModel& model, Symbol gamma,
                         std::size_t property_states,
                         const OracleLimits& limits) {
  const InverseSpec& spec = model.inverse(gamma);
  if (auto* r = std::get_if<RegularInverse>(&spec)) {
    return std::max(limits.min_factor_len,
                    property_states * r->language.num_states);
  }
  return limits.min_factor_len;
}

void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap) {
    throw Error(ErrorCode::kCapExceeded,
                std::string("oracle: ") + what + " exceed the cap of " +
                    std::to_string(cap));
  }
}

}  // namespace

std::vector<Word> factor_strings(const LossModel& model, Symbol gamma,
                                 std::size_t max_len,
                                 const OracleLimits& limits) {
  const InverseSpec& spec = model.inverse(gamma);
  std::vector<Word> out;
  if (auto* s = std::get_if<SingletonInverse>(&spec)) {
    if (max_len >= 1) out.push_back({s->sigma});
    return out;
  }
  if (auto* p = std::get_if<ParikhInverse>(&spec)) {
    Word w;
    for (Symbol a = 0; a < p->counts.size(); ++a) w.insert(w.end(), p->counts[a], a);
    if (w.size() > max_len) return out;
    do {
      out.push_back(w);
      check_cap(out.size(), limits.max_factor_strings, "factor strings");
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
  }
  if (std::holds_alternative<StateMapInverse>(spec)) {
    throw Error(ErrorCode::kUnsupported,
                "oracle cannot enumerate the state-map inverse of '" +
                    model.gamma()[gamma] + "'");
  }
  // Breadth-first over strings, pruning prefixes with no live NFA state.
  const Nfa& lang = std::get<RegularInverse>(spec).language;
  const std::size_t k = model.sigma().size();
  std::vector<std::pair<Word, StateSet>> layer{{Word{}, StateSet{lang.initial}}};
  for (std::size_t len = 0;; ++len) {
    for (const auto& [w, set] : layer) {
      bool acc = std::any_of(set.begin(), set.end(),
                             [&](State s) { return lang.accepting[s]; });
      if (acc) {
        out.push_back(w);
        check_cap(out.size(), limits.max_factor_strings, "factor strings");
      }
    }
    if (len == max_len) break;
    std::vector<std::pair<Word, StateSet>> next;
    for (const auto& [w, set] : layer) {
      for (Symbol a = 0; a < k; ++a) {
        StateSet succ = lang.step(set, a);
        if (succ.empty()) continue;
        Word w2 = w;
        w2.push_back(a);
        next.emplace_back(std::move(w2), std::move(succ));
        check_cap(next.size(), limits.max_factor_strings, "factor prefixes");
      }
    }
    if (next.empty()) break;
    layer = std::move(next);
  }
  return out;
}

std::vector<Word> completions(const LossModel& model, const Word& y,
                              std::size_t max_len, const OracleLimits& limits) {
  std::vector<Word> acc{Word{}};
  for (Symbol g : y) {
    if (g >= model.gamma().size()) {
      throw Error(ErrorCode::kUnknownSymbol, "lossy symbol outside Gamma");
    }
    std::vector<Word> factor = factor_strings(model, g, max_len, limits);
    check_cap(acc.size() * factor.size(), limits.max_completions, "completions");
    std::vector<Word> next;
    next.reserve(acc.size() * factor.size());
    for (const auto& prefix : acc) {
      for (const auto& f : factor) {
        Word w = prefix;
        w.insert(w.end(), f.begin(), f.end());
        next.push_back(std::move(w));
      }
    }
    acc = std::move(next);
  }
  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  return acc;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::kAllViolate:
      return "all-violate";
    case Classification::kNoneViolate:
      return "none-violate";
    case Classification::kMixed:
      return "mixed";
  }
  return "?";
}

namespace {

// Property NFA state set after following `w` from `from`, one symbol at a time.
StateSet follow(const Nfa& property, StateSet from, const Word& w) {
  for (Symbol a : w) {
    StateSet next;
    for (State q : from) {
      for (State t : property.next(q, a)) next.push_back(t);
    }
    set_normalize(next);
    from = std::move(next);
  }
  return from;
}

bool violating(const Nfa& property, const StateSet& set) {
  return std::none_of(set.begin(), set.end(),
                      [&](State q) { return property.accepting[q]; });
}

// Per-gamma factor strings, enumerated once.
class FactorCache {
 public:
  FactorCache(const Nfa& property, const LossModel& model,
              const OracleLimits& limits)
      : property_(property), model_(model), limits_(limits) {}

  const std::vector<Word>& get(Symbol g) {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    std::size_t bound = factor_bound(model_, g, property_.num_states, limits_);
    return cache_.emplace(g, factor_strings(model_, g, bound, limits_)).first->second;
  }

 private:
  const Nfa& property_;
  const LossModel& model_;
  const OracleLimits& limits_;
  std::map<Symbol, std::vector<Word>> cache_;
};

Classification classify_with(const Nfa& property, FactorCache& cache,
                             const LossModel& model, const Word& y) {
  // Distinct property-state sets reached by completions of the prefix.
  std::set<StateSet> frontier{StateSet{property.initial}};
  for (Symbol g : y) {
    if (g >= model.gamma().size()) {
      throw Error(ErrorCode::kUnknownSymbol, "lossy symbol outside Gamma");
    }
    std::set<StateSet> next;
    for (const auto& set : frontier) {
      for (const auto& w : cache.get(g)) next.insert(follow(property, set, w));
    }
    frontier = std::move(next);
  }
  bool some_violate = false, some_fine = false;
  for (const auto& set : frontier) {
    (violating(property, set) ? some_violate : some_fine) = true;
  }
  if (some_violate && !some_fine) return Classification::kAllViolate;
  if (!some_violate) return Classification::kNoneViolate;
  return Classification::kMixed;
}

void check_property_alphabet(const Nfa& property, const LossModel& model) {
  if (!(property.alphabet == model.sigma())) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "oracle: property alphabet differs from the loss model's Sigma");
  }
}

}  // namespace

Classification classify(const Nfa& property, const LossModel& model,
                        const Word& y, const OracleLimits& limits) {
  check_property_alphabet(property, model);
  FactorCache cache(property, model, limits);
  return classify_with(property, cache, model, y);
}

Classification classify(const Dfa& property, const LossModel& model,
                        const Word& y, const OracleLimits& limits) {
  return classify(Nfa::from_dfa(property), model, y, limits);
}

std::vector<Word> filter_images(const LossModel& model, const Word& trace) {
  std::set<Word> images;
  Word current;
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == trace.size()) {
      images.insert(current);
      return;
    }
    for (std::size_t end = pos + 1; end <= trace.size(); ++end) {
      Word segment(trace.begin() + pos, trace.begin() + end);
      for (Symbol g = 0; g < model.gamma().size(); ++g) {
        if (!inverse_contains(model, g, segment)) continue;
        current.push_back(g);
        rec(end);
        current.pop_back();
      }
    }
  };
  rec(0);
  return {images.begin(), images.end()};
}

OracleReport check_monitor_against_oracle(const Nfa& property,
                                          const LossModel& model,
                                          const AlternateMonitor& monitor,
                                          std::size_t max_y_len,
                                          const OracleLimits& limits) {
  check_property_alphabet(property, model);
  if (!(monitor.gamma() == model.gamma())) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "oracle: monitor alphabet differs from the loss model's Gamma");
  }
  const Dfa& dfa = monitor.minimal.dfa;
  FactorCache cache(property, model, limits);
  OracleReport report;
  const std::size_t k = model.gamma().size();
  Word y;
  std::function<void(State)> rec = [&](State s) {
    Classification c = classify_with(property, cache, model, y);
    bool rejects = dfa.error && s == *dfa.error;
    bool expected = monitor.mode == MonitorMode::kComplete
                        ? c == Classification::kAllViolate
                        : c != Classification::kNoneViolate;
    ++report.checked;
    // Approximations may miss violations but must never reject wrongly.
    const bool wrong = monitor.approximated ? rejects && !expected : rejects != expected;
    if (wrong) report.counterexamples.push_back({y, c, rejects});
    if (y.size() == max_y_len) return;
    for (Symbol g = 0; g < k; ++g) {
      y.push_back(g);
      rec(dfa.next(s, g));
      y.pop_back();
    }
  };
  rec(dfa.initial);
  return report;
}

OracleReport check_monitor_against_oracle(const Dfa& property,
                                          const LossModel& model,
                                          const AlternateMonitor& monitor,
                                          std::size_t max_y_len,
                                          const OracleLimits& limits) {
  return check_monitor_against_oracle(Nfa::from_dfa(property), model, monitor,
                                      max_y_len, limits);
}

}  // namespace lossmon

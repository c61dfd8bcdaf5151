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

#include "automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include "error.hpp"

namespace lossmon {

StateSet set_union(const StateSet& a, const StateSet& b) {
  StateSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

bool set_contains(const StateSet& set, State s) {
  return std::binary_search(set.begin(), set.end(), s);
}

bool set_includes(const StateSet& super, const StateSet& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

void set_normalize(StateSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  for (Symbol i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty symbol name");
    }
    if (!index_.emplace(symbols_[i], i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate symbol '" + symbols_[i] + "'");
    }
  }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::at(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw Error(ErrorCode::kUnknownSymbol,
              "unknown symbol '" + std::string(name) + "'");
}

bool Alphabet::same_set(const Alphabet& other) const {
  if (size() != other.size()) return false;
  for (const auto& s : symbols_) {
    if (!other.find(s)) return false;
  }
  return true;
}

std::vector<Symbol> symbol_map(const Alphabet& from, const Alphabet& to) {
  if (!from.same_set(to)) {
    throw Error(ErrorCode::kAlphabetMismatch, "alphabets differ");
  }
  std::vector<Symbol> map(from.size());
  for (Symbol a = 0; a < from.size(); ++a) map[a] = *to.find(from[a]);
  return map;
}

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(Alphabet sigma, std::size_t n)
    : alphabet(std::move(sigma)),
      num_states(n),
      delta(n * alphabet.size(), 0),
      accepting(n, true) {}

State Dfa::run(State from, const std::vector<Symbol>& word) const {
  State s = from;
  for (Symbol a : word) s = next(s, a);
  return s;
}

bool Dfa::accepts(const std::vector<Symbol>& word) const {
  return accepting[run(initial, word)];
}

std::string Dfa::state_name(State s) const {
  if (s < state_names.size()) return state_names[s];
  return std::to_string(s);
}

void Dfa::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, "invalid DFA: " + msg);
  };
  if (num_states == 0) fail("no states");
  if (delta.size() != num_states * alphabet.size()) fail("delta size");
  for (State t : delta) {
    if (t >= num_states) fail("transition target out of range");
  }
  if (initial >= num_states) fail("initial out of range");
  if (accepting.size() != num_states) fail("accepting size");
  if (!state_names.empty() && state_names.size() != num_states) {
    fail("state_names size");
  }
  if (error) {
    if (*error >= num_states) fail("error out of range");
    if (accepting[*error]) fail("error state is accepting");
    for (Symbol a = 0; a < alphabet.size(); ++a) {
      if (next(*error, a) != *error) fail("error state is not a trap");
    }
  }
}

bool Dfa::is_property() const {
  try {
    validate();
  } catch (const Error&) {
    return false;
  }
  if (!error) return false;
  for (State s = 0; s < num_states; ++s) {
    if (accepting[s] != (s != *error)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Nfa

Nfa::Nfa(Alphabet sigma, std::size_t n)
    : alphabet(std::move(sigma)),
      num_states(n),
      delta(n * alphabet.size()),
      accepting(n, false) {}

void Nfa::add(State from, Symbol a, State to) {
  StateSet& set = next(from, a);
  auto it = std::lower_bound(set.begin(), set.end(), to);
  if (it == set.end() || *it != to) set.insert(it, to);
}

StateSet Nfa::step(const StateSet& from, Symbol a) const {
  StateSet out;
  for (State s : from) {
    const StateSet& succ = next(s, a);
    out.insert(out.end(), succ.begin(), succ.end());
  }
  set_normalize(out);
  return out;
}

bool Nfa::accepts(const std::vector<Symbol>& word) const {
  StateSet cur{initial};
  for (Symbol a : word) cur = step(cur, a);
  return std::any_of(cur.begin(), cur.end(),
                     [&](State s) { return accepting[s]; });
}

void Nfa::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, "invalid NFA: " + msg);
  };
  if (num_states == 0) fail("no states");
  if (delta.size() != num_states * alphabet.size()) fail("delta size");
  for (const auto& set : delta) {
    for (State t : set) {
      if (t >= num_states) fail("transition target out of range");
    }
    if (!std::is_sorted(set.begin(), set.end()) ||
        std::adjacent_find(set.begin(), set.end()) != set.end()) {
      fail("successor set not canonical");
    }
  }
  if (initial >= num_states) fail("initial out of range");
  if (accepting.size() != num_states) fail("accepting size");
  if (error) {
    if (*error >= num_states) fail("error out of range");
    if (accepting[*error]) fail("error state is accepting");
    for (Symbol a = 0; a < alphabet.size(); ++a) {
      if (next(*error, a) != StateSet{*error}) fail("error state is not a trap");
    }
  }
}

Nfa Nfa::property_shell(const Dfa& property, Alphabet sigma) {
  Nfa nfa(std::move(sigma), property.num_states);
  nfa.initial = property.initial;
  nfa.error = property.error;
  nfa.state_names = property.state_names;
  for (State s = 0; s < nfa.num_states; ++s) {
    nfa.accepting[s] = !(property.error && s == *property.error);
  }
  if (nfa.error) {
    for (Symbol a = 0; a < nfa.alphabet.size(); ++a) {
      nfa.next(*nfa.error, a) = {*nfa.error};
    }
  }
  return nfa;
}

Nfa Nfa::from_dfa(const Dfa& dfa) {
  Nfa nfa(dfa.alphabet, dfa.num_states);
  nfa.initial = dfa.initial;
  nfa.accepting = dfa.accepting;
  nfa.error = dfa.error;
  nfa.state_names = dfa.state_names;
  for (State s = 0; s < dfa.num_states; ++s) {
    for (Symbol a = 0; a < dfa.alphabet.size(); ++a) {
      nfa.next(s, a) = {dfa.next(s, a)};
    }
  }
  return nfa;
}

// ---------------------------------------------------------------------------
// Subset construction

LabeledDfa determinize(const Nfa& nfa, const DeterminizeOptions& options) {
  nfa.validate();
  const std::size_t k = nfa.alphabet.size();
  std::map<StateSet, State> ids;
  std::vector<StateSet> labels;
  std::vector<State> delta;

  auto canonical_successor = [&](StateSet set) {
    if (nfa.error) {
      if (set.empty()) return StateSet{*nfa.error};
      if (options.collapse_error && set_contains(set, *nfa.error)) {
        return StateSet{*nfa.error};
      }
    }
    return set;
  };
  auto intern = [&](StateSet set) -> State {
    auto [it, inserted] = ids.emplace(set, static_cast<State>(labels.size()));
    if (inserted) {
      if (labels.size() >= options.max_states) {
        throw Error(ErrorCode::kCapExceeded,
                    "subset construction exceeded " +
                        std::to_string(options.max_states) + " states");
      }
      labels.push_back(std::move(set));
      delta.resize(labels.size() * k, kNoState);
    }
    return it->second;
  };

  intern(canonical_successor(StateSet{nfa.initial}));
  for (State cur = 0; cur < labels.size(); ++cur) {
    for (Symbol a = 0; a < k; ++a) {
      StateSet succ = canonical_successor(nfa.step(labels[cur], a));
      State target = intern(std::move(succ));
      delta[static_cast<std::size_t>(cur) * k + a] = target;
    }
  }

  LabeledDfa out;
  out.dfa.alphabet = nfa.alphabet;
  out.dfa.num_states = labels.size();
  out.dfa.delta = std::move(delta);
  out.dfa.initial = 0;
  out.dfa.accepting.resize(labels.size());
  for (State s = 0; s < labels.size(); ++s) {
    out.dfa.accepting[s] = std::any_of(
        labels[s].begin(), labels[s].end(),
        [&](State q) { return static_cast<bool>(nfa.accepting[q]); });
  }
  if (nfa.error) {
    auto it = ids.find(StateSet{*nfa.error});
    if (it != ids.end()) out.dfa.error = it->second;
  }
  out.labels = std::move(labels);
  return out;
}

// ---------------------------------------------------------------------------
// Reachability

std::vector<bool> reachable_states(const Dfa& dfa) {
  std::vector<bool> seen(dfa.num_states, false);
  std::vector<State> stack{dfa.initial};
  seen[dfa.initial] = true;
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (Symbol a = 0; a < dfa.alphabet.size(); ++a) {
      State t = dfa.next(s, a);
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

std::vector<bool> coreachable(const Dfa& dfa, const std::vector<bool>& targets) {
  std::vector<std::vector<State>> preds(dfa.num_states);
  for (State s = 0; s < dfa.num_states; ++s) {
    for (Symbol a = 0; a < dfa.alphabet.size(); ++a) {
      preds[dfa.next(s, a)].push_back(s);
    }
  }
  std::vector<bool> seen(dfa.num_states, false);
  std::vector<State> stack;
  for (State s = 0; s < dfa.num_states; ++s) {
    if (targets[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (State p : preds[s]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// Minimization

namespace {

// BFS order from `initial` over the quotient given by `block_of`, with the
// error block (if any) last. Returns block -> output id.
std::vector<State> bfs_order(const Dfa& dfa, const std::vector<State>& kept,
                             const std::vector<State>& block_of,
                             std::size_t num_blocks,
                             const std::vector<State>& compact_of,
                             std::optional<State> error_block) {
  const std::size_t k = dfa.alphabet.size();
  std::vector<State> rep(num_blocks, kNoState);
  for (State i = 0; i < kept.size(); ++i) {
    if (rep[block_of[i]] == kNoState) rep[block_of[i]] = kept[i];
  }
  std::vector<State> order(num_blocks, kNoState);
  State next_id = 0;
  std::deque<State> queue;
  State start = block_of[compact_of[dfa.initial]];
  if (!error_block || start != *error_block) {
    order[start] = next_id++;
    queue.push_back(start);
  }
  while (!queue.empty()) {
    State b = queue.front();
    queue.pop_front();
    for (Symbol a = 0; a < k; ++a) {
      State t = block_of[compact_of[dfa.next(rep[b], a)]];
      if (order[t] == kNoState && !(error_block && t == *error_block)) {
        order[t] = next_id++;
        queue.push_back(t);
      }
    }
  }
  if (error_block) order[*error_block] = next_id++;
  return order;
}

}  // namespace

Minimized minimize(const LabeledDfa& input) {
  const Dfa& dfa = input.dfa;
  dfa.validate();
  const std::size_t k = dfa.alphabet.size();
  const bool labelled = !input.labels.empty();

  std::vector<bool> reach = reachable_states(dfa);
  if (dfa.error) reach[*dfa.error] = true;
  std::vector<State> kept;
  std::vector<State> compact_of(dfa.num_states, kNoState);
  for (State s = 0; s < dfa.num_states; ++s) {
    if (reach[s]) {
      compact_of[s] = static_cast<State>(kept.size());
      kept.push_back(s);
    }
  }
  const std::size_t n = kept.size();

  // inverse[a * n + t] = compact sources reaching compact t on a
  std::vector<std::vector<State>> inverse(k * n);
  for (State i = 0; i < n; ++i) {
    for (Symbol a = 0; a < k; ++a) {
      State t = compact_of[dfa.next(kept[i], a)];
      inverse[a * n + t].push_back(i);
    }
  }

  std::vector<std::vector<State>> blocks;
  std::vector<State> block_of(n);
  {
    std::vector<State> acc, rej;
    for (State i = 0; i < n; ++i) {
      (dfa.accepting[kept[i]] ? acc : rej).push_back(i);
    }
    for (auto* part : {&acc, &rej}) {
      if (part->empty()) continue;
      for (State i : *part) block_of[i] = static_cast<State>(blocks.size());
      blocks.push_back(std::move(*part));
    }
  }

  std::vector<char> in_work;
  std::deque<std::pair<State, Symbol>> work;
  auto push = [&](State b, Symbol a) {
    if (in_work.size() < blocks.size() * k) in_work.resize(blocks.size() * k, 0);
    if (!in_work[b * k + a]) {
      in_work[b * k + a] = 1;
      work.emplace_back(b, a);
    }
  };
  {
    State smallest = 0;
    for (State b = 1; b < blocks.size(); ++b) {
      if (blocks[b].size() < blocks[smallest].size()) smallest = b;
    }
    for (Symbol a = 0; a < k; ++a) push(smallest, a);
  }

  std::vector<char> marked(n, 0);
  std::vector<std::size_t> hits;
  std::vector<State> touched_states, touched_blocks;
  while (!work.empty()) {
    auto [splitter, a] = work.front();
    work.pop_front();
    in_work[splitter * k + a] = 0;

    touched_states.clear();
    for (State t : blocks[splitter]) {
      for (State p : inverse[a * n + t]) {
        if (!marked[p]) {
          marked[p] = 1;
          touched_states.push_back(p);
        }
      }
    }
    hits.resize(blocks.size(), 0);
    touched_blocks.clear();
    for (State p : touched_states) {
      if (hits[block_of[p]]++ == 0) touched_blocks.push_back(block_of[p]);
    }
    for (State y : touched_blocks) {
      if (hits[y] == blocks[y].size()) continue;
      State z = static_cast<State>(blocks.size());
      std::vector<State> inside, outside;
      for (State s : blocks[y]) (marked[s] ? inside : outside).push_back(s);
      for (State s : inside) block_of[s] = z;
      blocks[y] = std::move(outside);
      blocks.push_back(std::move(inside));
      in_work.resize(blocks.size() * k, 0);
      for (Symbol c = 0; c < k; ++c) {
        if (in_work[y * k + c]) {
          push(z, c);
        } else {
          push(blocks[z].size() < blocks[y].size() ? z : y, c);
        }
      }
    }
    for (State p : touched_states) marked[p] = 0;
    for (State y : touched_blocks) hits[y] = 0;
  }

  std::optional<State> error_block;
  if (dfa.error) error_block = block_of[compact_of[*dfa.error]];
  std::vector<State> order =
      bfs_order(dfa, kept, block_of, blocks.size(), compact_of, error_block);

  Minimized out;
  Dfa& res = out.result.dfa;
  res.alphabet = dfa.alphabet;
  res.num_states = blocks.size();
  res.delta.assign(res.num_states * k, 0);
  res.accepting.assign(res.num_states, true);
  res.initial = order[block_of[compact_of[dfa.initial]]];
  if (error_block) res.error = order[*error_block];
  if (labelled) out.result.labels.assign(res.num_states, {});
  std::vector<std::vector<State>> members(res.num_states);

  out.class_of.assign(dfa.num_states, kNoState);
  for (State i = 0; i < n; ++i) {
    State o = order[block_of[i]];
    State s = kept[i];
    out.class_of[s] = o;
    members[o].push_back(s);
    res.accepting[o] = dfa.accepting[s];
    for (Symbol a = 0; a < k; ++a) {
      res.delta[o * k + a] = order[block_of[compact_of[dfa.next(s, a)]]];
    }
    if (labelled) {
      out.result.labels[o] = set_union(out.result.labels[o], input.labels[s]);
    }
  }
  if (!dfa.state_names.empty()) {
    res.state_names.resize(res.num_states);
    for (State o = 0; o < res.num_states; ++o) {
      std::string name;
      for (State s : members[o]) {
        if (!name.empty()) name += '|';
        name += dfa.state_names[s];
      }
      res.state_names[o] = std::move(name);
    }
  }
  return out;
}

Minimized minimize(const Dfa& dfa) {
  return minimize(LabeledDfa{dfa, {}});
}

Dfa canonical(const Dfa& dfa) {
  dfa.validate();
  std::vector<bool> reach = reachable_states(dfa);
  if (dfa.error) reach[*dfa.error] = true;
  std::vector<State> kept, compact_of(dfa.num_states, kNoState);
  for (State s = 0; s < dfa.num_states; ++s) {
    if (reach[s]) {
      compact_of[s] = static_cast<State>(kept.size());
      kept.push_back(s);
    }
  }
  std::vector<State> identity(kept.size());
  for (State i = 0; i < kept.size(); ++i) identity[i] = i;
  std::optional<State> error_block;
  if (dfa.error) error_block = compact_of[*dfa.error];
  std::vector<State> order =
      bfs_order(dfa, kept, identity, kept.size(), compact_of, error_block);

  const std::size_t k = dfa.alphabet.size();
  Dfa res(dfa.alphabet, kept.size());
  res.initial = order[compact_of[dfa.initial]];
  if (error_block) res.error = order[*error_block];
  if (!dfa.state_names.empty()) res.state_names.resize(kept.size());
  for (State i = 0; i < kept.size(); ++i) {
    State o = order[i];
    res.accepting[o] = dfa.accepting[kept[i]];
    for (Symbol a = 0; a < k; ++a) {
      res.delta[o * k + a] = order[compact_of[dfa.next(kept[i], a)]];
    }
    if (!dfa.state_names.empty()) res.state_names[o] = dfa.state_names[kept[i]];
  }
  return res;
}

// ---------------------------------------------------------------------------
// Boolean operations

Dfa complement(const Dfa& dfa) {
  dfa.validate();
  Dfa out = dfa;
  out.error.reset();
  out.state_names.clear();
  for (State s = 0; s < out.num_states; ++s) out.accepting[s] = !dfa.accepting[s];
  return out;
}

Dfa intersect(const Dfa& a, const Dfa& b) {
  a.validate();
  b.validate();
  const std::vector<Symbol> to_b = symbol_map(a.alphabet, b.alphabet);
  const std::size_t k = a.alphabet.size();
  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> pairs;
  std::vector<State> delta;
  auto intern = [&](State p, State q) {
    auto [it, inserted] = ids.emplace(std::make_pair(p, q),
                                      static_cast<State>(pairs.size()));
    if (inserted) {
      pairs.emplace_back(p, q);
      delta.resize(pairs.size() * k, 0);
    }
    return it->second;
  };
  intern(a.initial, b.initial);
  for (State cur = 0; cur < pairs.size(); ++cur) {
    for (Symbol x = 0; x < k; ++x) {
      auto [p, q] = pairs[cur];
      State t = intern(a.next(p, x), b.next(q, to_b[x]));
      delta[cur * k + x] = t;
    }
  }
  Dfa out(a.alphabet, pairs.size());
  out.delta = std::move(delta);
  for (State s = 0; s < pairs.size(); ++s) {
    out.accepting[s] = a.accepting[pairs[s].first] && b.accepting[pairs[s].second];
  }
  return out;
}

bool is_empty(const Dfa& dfa) {
  std::vector<bool> reach = reachable_states(dfa);
  for (State s = 0; s < dfa.num_states; ++s) {
    if (reach[s] && dfa.accepting[s]) return false;
  }
  return true;
}

bool includes(const Dfa& a, const Dfa& b) {
  return is_empty(intersect(complement(a), b));
}

bool equivalent(const Dfa& a, const Dfa& b) {
  return includes(a, b) && includes(b, a);
}

// ---------------------------------------------------------------------------
// Reach through a language

namespace {

template <typename Successors>
StateSet reach_via(std::size_t num_states, State from, const Nfa& lang,
                   const std::vector<Symbol>& to_lang, Successors succ) {
  std::vector<char> seen(num_states * lang.num_states, 0);
  std::vector<std::pair<State, State>> stack;
  auto visit = [&](State q, State l) {
    char& mark = seen[static_cast<std::size_t>(q) * lang.num_states + l];
    if (!mark) {
      mark = 1;
      stack.emplace_back(q, l);
    }
  };
  visit(from, lang.initial);
  StateSet out;
  while (!stack.empty()) {
    auto [q, l] = stack.back();
    stack.pop_back();
    if (lang.accepting[l]) out.push_back(q);
    for (Symbol a = 0; a < to_lang.size(); ++a) {
      const StateSet& lnext = lang.next(l, to_lang[a]);
      if (lnext.empty()) continue;
      succ(q, a, [&](State q2) {
        for (State l2 : lnext) visit(q2, l2);
      });
    }
  }
  set_normalize(out);
  return out;
}

}  // namespace

StateSet states_reachable_via(const Dfa& automaton, State from,
                              const Nfa& lang) {
  const auto to_lang = symbol_map(automaton.alphabet, lang.alphabet);
  return reach_via(automaton.num_states, from, lang, to_lang,
                   [&](State q, Symbol a, auto&& emit) {
                     emit(automaton.next(q, a));
                   });
}

StateSet states_reachable_via(const Nfa& automaton, State from,
                              const Nfa& lang) {
  const auto to_lang = symbol_map(automaton.alphabet, lang.alphabet);
  return reach_via(automaton.num_states, from, lang, to_lang,
                   [&](State q, Symbol a, auto&& emit) {
                     for (State t : automaton.next(q, a)) emit(t);
                   });
}

// ---------------------------------------------------------------------------
// Transducers

Nft::Nft(Alphabet in, Alphabet out, std::size_t n)
    : input(std::move(in)),
      output(std::move(out)),
      num_states(n),
      delta(n * input.size()),
      finals(n, false) {}

void Nft::add(State from, Symbol in, State to, Symbol out) {
  delta[static_cast<std::size_t>(from) * input.size() + in].push_back(
      NftArc{to, out});
}

void Gnft::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, "invalid GNFT: " + msg);
  };
  if (initial >= num_states || final_state >= num_states) fail("state range");
  if (initial == final_state) fail("initial equals final");
  for (const auto& e : edges) {
    if (e.from >= num_states || e.to >= num_states) fail("edge state range");
    if (e.to == initial) fail("edge into initial state");
    if (e.from == final_state) fail("edge out of final state");
    if (e.output != kNoSymbol && e.output >= output.size()) fail("output symbol");
  }
}

Nft gnft_to_nft(const Gnft& gnft) {
  gnft.validate();
  struct Expanded {
    const GnftEdge* edge;
    Nfa lang;
    State base;
  };
  std::vector<Expanded> parts;
  std::size_t total = gnft.num_states;
  for (const auto& e : gnft.edges) {
    Nfa lang = e.language ? *e.language : compile_regex(e.regex, gnft.input);
    parts.push_back(Expanded{&e, std::move(lang), static_cast<State>(total)});
    total += parts.back().lang.num_states;
  }

  Nft nft(gnft.input, gnft.output, total);
  nft.initial = gnft.initial;
  nft.finals[gnft.final_state] = true;
  for (const auto& part : parts) {
    const Nfa& lang = part.lang;
    const GnftEdge& e = *part.edge;
    for (State s = 0; s < lang.num_states; ++s) {
      for (Symbol a = 0; a < lang.alphabet.size(); ++a) {
        for (State t : lang.next(s, a)) {
          auto emit_from = [&](State src) {
            nft.add(src, a, part.base + t, kNoSymbol);
            if (lang.accepting[t]) nft.add(src, a, e.to, e.output);
          };
          emit_from(part.base + s);
          if (s == lang.initial) emit_from(e.from);
        }
      }
    }
    if (lang.accepting[lang.initial]) {
      nft.epsilon_moves.push_back(NftEpsilonMove{e.from, e.to, e.output});
    }
  }
  return nft;
}

}  // namespace lossmon

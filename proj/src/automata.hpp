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

// Finite automata kernel: alphabets, DFAs/NFAs with a designated trap error
// state, regex compilation, labelled subset construction, Hopcroft
// minimization with merge classes, product constructions and transducers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lossmon {

using State = std::uint32_t;
using Symbol = std::uint32_t;

inline constexpr State kNoState = std::numeric_limits<State>::max();

// Sorted, duplicate-free set of states. Used both as NFA successor sets and
// as the subset label carried by determinized states.
using StateSet = std::vector<State>;
using SubsetLabel = StateSet;

StateSet set_union(const StateSet& a, const StateSet& b);
bool set_contains(const StateSet& set, State s);
bool set_includes(const StateSet& super, const StateSet& sub);
void set_normalize(StateSet& set);

// Ordered list of symbol names with O(1) lookup by name.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  const std::string& operator[](Symbol s) const { return symbols_[s]; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  std::optional<Symbol> find(std::string_view name) const;
  // Throws Error(kUnknownSymbol).
  Symbol at(std::string_view name) const;

  bool same_set(const Alphabet& other) const;
  bool operator==(const Alphabet& other) const {
    return symbols_ == other.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Symbol> index_;
};

// For every symbol of `from`, the id of the same-named symbol in `to`.
// Throws Error(kAlphabetMismatch) unless both hold the same names.
std::vector<Symbol> symbol_map(const Alphabet& from, const Alphabet& to);

struct Dfa {
  Alphabet alphabet;
  std::size_t num_states = 0;
  std::vector<State> delta;  // num_states * |alphabet|, row-major by state
  State initial = 0;
  std::vector<bool> accepting;
  std::optional<State> error;  // trap, non-accepting
  std::vector<std::string> state_names;  // optional, empty or num_states

  Dfa() = default;
  Dfa(Alphabet sigma, std::size_t n);

  State next(State s, Symbol a) const {
    return delta[static_cast<std::size_t>(s) * alphabet.size() + a];
  }
  State& next(State s, Symbol a) {
    return delta[static_cast<std::size_t>(s) * alphabet.size() + a];
  }
  State run(State from, const std::vector<Symbol>& word) const;
  bool accepts(const std::vector<Symbol>& word) const;
  std::string state_name(State s) const;

  // Total, error is a trap, and error is the only rejecting state.
  bool is_property() const;
  // Throws Error(kInvalidArgument) describing the first broken invariant.
  void validate() const;
};

struct Nfa {
  Alphabet alphabet;
  std::size_t num_states = 0;
  std::vector<StateSet> delta;  // num_states * |alphabet|
  State initial = 0;
  std::vector<bool> accepting;
  std::optional<State> error;
  std::vector<std::string> state_names;

  Nfa() = default;
  Nfa(Alphabet sigma, std::size_t n);

  const StateSet& next(State s, Symbol a) const {
    return delta[static_cast<std::size_t>(s) * alphabet.size() + a];
  }
  StateSet& next(State s, Symbol a) {
    return delta[static_cast<std::size_t>(s) * alphabet.size() + a];
  }
  void add(State from, Symbol a, State to);
  StateSet step(const StateSet& from, Symbol a) const;
  bool accepts(const std::vector<Symbol>& word) const;
  void validate() const;

  // NFA property over the same states as `property`: accepting = all but
  // error, error kept as a trap. Transitions are left empty.
  static Nfa property_shell(const Dfa& property, Alphabet sigma);
  static Nfa from_dfa(const Dfa& dfa);
};

struct LabeledDfa {
  Dfa dfa;
  std::vector<SubsetLabel> labels;
};

struct DeterminizeOptions {
  std::size_t max_states = std::size_t{1} << 20;
  // Sound-monitor rule: any successor containing the NFA error state is
  // replaced by {error}.
  bool collapse_error = false;
};

// Subset construction over reachable subsets. An empty successor becomes
// {error} when the NFA has an error state, otherwise an empty-labelled dead
// state. Throws Error(kCapExceeded) past options.max_states.
LabeledDfa determinize(const Nfa& nfa, const DeterminizeOptions& options = {});

struct Minimized {
  LabeledDfa result;
  // Input state -> output state; kNoState for dropped unreachable states.
  std::vector<State> class_of;
};

// Hopcroft minimization of a total DFA. Unreachable states are dropped
// except the designated error state. Output states are numbered in BFS
// order from the initial state with the error state last, so two
// equivalent minimal DFAs come out identical. Each output label is the union
// of the labels of its merge class.
Minimized minimize(const LabeledDfa& dfa);
Minimized minimize(const Dfa& dfa);

// BFS renumbering (error last) without merging; drops unreachable states
// other than the error state.
Dfa canonical(const Dfa& dfa);

std::vector<bool> reachable_states(const Dfa& dfa);
// States from which some state in `targets` is reachable.
std::vector<bool> coreachable(const Dfa& dfa, const std::vector<bool>& targets);

Dfa complement(const Dfa& dfa);
Dfa intersect(const Dfa& a, const Dfa& b);
bool is_empty(const Dfa& dfa);
// True iff L(b) is a subset of L(a).
bool includes(const Dfa& a, const Dfa& b);
bool equivalent(const Dfa& a, const Dfa& b);

// {q' | exists x in L(lang): automaton moves from `from` to q' on x}, by
// product reachability.
StateSet states_reachable_via(const Dfa& automaton, State from,
                              const Nfa& lang);
StateSet states_reachable_via(const Nfa& automaton, State from,
                              const Nfa& lang);

// Regex dialect: whitespace-separated identifiers, `|`, `*`, `+`, `?`,
// parentheses; juxtaposition concatenates; the empty pattern is epsilon.
// The result has no epsilon edges and no error state.
Nfa compile_regex(std::string_view pattern, const Alphabet& sigma);

// Finite-state transducers. Output kNoSymbol stands for epsilon.
inline constexpr Symbol kNoSymbol = std::numeric_limits<Symbol>::max();

struct NftArc {
  State target;
  Symbol output;
};

struct NftEpsilonMove {
  State from;
  State to;
  Symbol output;
};

struct Nft {
  Alphabet input;
  Alphabet output;
  std::size_t num_states = 0;
  std::vector<std::vector<NftArc>> delta;  // num_states * |input|
  std::vector<NftEpsilonMove> epsilon_moves;
  State initial = 0;
  std::vector<bool> finals;

  Nft() = default;
  Nft(Alphabet in, Alphabet out, std::size_t n);

  void add(State from, Symbol in, State to, Symbol out);
  const std::vector<NftArc>& arcs(State s, Symbol in) const {
    return delta[static_cast<std::size_t>(s) * input.size() + in];
  }
};

struct GnftEdge {
  State from;
  State to;
  std::string regex;  // over the input alphabet
  Symbol output;      // kNoSymbol for epsilon
  // Overrides `regex` when set, e.g. for the empty language.
  std::optional<Nfa> language = std::nullopt;
};

struct Gnft {
  Alphabet input;
  Alphabet output;
  std::size_t num_states = 0;
  std::vector<GnftEdge> edges;
  State initial = 0;
  State final_state = 0;

  void validate() const;
};

// Expands every (regex, output) edge by embedding the regex's NFA; arcs that
// complete a match carry the edge's output. Edges whose regex accepts the
// empty string additionally contribute an epsilon move.
Nft gnft_to_nft(const Gnft& gnft);

}  // namespace lossmon

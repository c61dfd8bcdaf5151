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

// Regex dialect over event names. Parsed by recursive descent into an
// epsilon-NFA (Thompson fragments), then epsilon edges are eliminated.

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "automata.hpp"
#include "error.hpp"

namespace lossmon {
namespace {

enum class TokenKind { kIdent, kBar, kStar, kPlus, kQuestion, kLParen, kRParen, kEnd };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view pattern) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < pattern.size()) {
    char c = pattern[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '|': kind = TokenKind::kBar; break;
      case '*': kind = TokenKind::kStar; break;
      case '+': kind = TokenKind::kPlus; break;
      case '?': kind = TokenKind::kQuestion; break;
      case '(': kind = TokenKind::kLParen; break;
      case ')': kind = TokenKind::kRParen; break;
      default:
        if (!ident_start(c)) {
          throw ParseError(i, std::string("unexpected character '") + c + "'");
        }
        {
          std::size_t start = i;
          while (i < pattern.size() && ident_char(pattern[i])) ++i;
          out.push_back({TokenKind::kIdent,
                         std::string(pattern.substr(start, i - start)), start});
        }
        continue;
    }
    out.push_back({kind, std::string(1, c), i});
    ++i;
  }
  out.push_back({TokenKind::kEnd, "", pattern.size()});
  return out;
}

// Epsilon-NFA under construction.
struct EpsNfa {
  std::size_t k;
  std::vector<std::vector<std::pair<Symbol, State>>> arcs;
  std::vector<std::vector<State>> eps;

  State add_state() {
    arcs.emplace_back();
    eps.emplace_back();
    return static_cast<State>(arcs.size() - 1);
  }
};

struct Fragment {
  State start;
  State end;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Alphabet& sigma, EpsNfa& nfa)
      : tokens_(std::move(tokens)), sigma_(sigma), nfa_(nfa) {}

  Fragment parse() {
    Fragment f = alternation();
    if (peek().kind != TokenKind::kEnd) {
      throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
    }
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  Fragment epsilon() {
    State s = nfa_.add_state();
    State t = nfa_.add_state();
    nfa_.eps[s].push_back(t);
    return {s, t};
  }

  Fragment alternation() {
    Fragment first = concatenation();
    if (peek().kind != TokenKind::kBar) return first;
    State s = nfa_.add_state();
    State t = nfa_.add_state();
    auto attach = [&](Fragment f) {
      nfa_.eps[s].push_back(f.start);
      nfa_.eps[f.end].push_back(t);
    };
    attach(first);
    while (peek().kind == TokenKind::kBar) {
      ++pos_;
      attach(concatenation());
    }
    return {s, t};
  }

  Fragment concatenation() {
    std::optional<Fragment> acc;
    while (peek().kind == TokenKind::kIdent ||
           peek().kind == TokenKind::kLParen) {
      Fragment f = repetition();
      if (acc) {
        nfa_.eps[acc->end].push_back(f.start);
        acc->end = f.end;
      } else {
        acc = f;
      }
    }
    return acc ? *acc : epsilon();
  }

  Fragment repetition() {
    Fragment f = atom();
    for (;;) {
      TokenKind kind = peek().kind;
      if (kind != TokenKind::kStar && kind != TokenKind::kPlus &&
          kind != TokenKind::kQuestion) {
        return f;
      }
      ++pos_;
      State s = nfa_.add_state();
      State t = nfa_.add_state();
      nfa_.eps[s].push_back(f.start);
      nfa_.eps[f.end].push_back(t);
      if (kind != TokenKind::kPlus) nfa_.eps[s].push_back(t);
      if (kind != TokenKind::kQuestion) nfa_.eps[f.end].push_back(f.start);
      f = {s, t};
    }
  }

  Fragment atom() {
    const Token& tok = peek();
    if (tok.kind == TokenKind::kLParen) {
      ++pos_;
      Fragment inner = alternation();
      if (peek().kind != TokenKind::kRParen) {
        throw ParseError(peek().pos, "expected ')'");
      }
      ++pos_;
      return inner;
    }
    auto sym = sigma_.find(tok.text);
    if (!sym) {
      throw Error(ErrorCode::kUnknownSymbol,
                  "unknown event '" + tok.text + "' at " +
                      std::to_string(tok.pos));
    }
    ++pos_;
    State s = nfa_.add_state();
    State t = nfa_.add_state();
    nfa_.arcs[s].emplace_back(*sym, t);
    return {s, t};
  }

  std::vector<Token> tokens_;
  const Alphabet& sigma_;
  EpsNfa& nfa_;
  std::size_t pos_ = 0;
};

StateSet closure(const EpsNfa& nfa, State s) {
  StateSet out{s};
  std::vector<State> stack{s};
  std::vector<char> seen(nfa.arcs.size(), 0);
  seen[s] = 1;
  while (!stack.empty()) {
    State u = stack.back();
    stack.pop_back();
    for (State v : nfa.eps[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        out.push_back(v);
        stack.push_back(v);
      }
    }
  }
  set_normalize(out);
  return out;
}

}  // namespace

Nfa compile_regex(std::string_view pattern, const Alphabet& sigma) {
  EpsNfa eps{sigma.size(), {}, {}};
  Parser parser(tokenize(pattern), sigma, eps);
  Fragment top = parser.parse();

  // Epsilon elimination: q --a--> t whenever some p in closure(q) has an
  // a-arc into t; q accepts when its closure contains the fragment end.
  const std::size_t n = eps.arcs.size();
  std::vector<StateSet> closures(n);
  for (State s = 0; s < n; ++s) closures[s] = closure(eps, s);

  // Keep only states reachable from the start through symbol arcs.
  std::vector<State> id(n, kNoState);
  std::vector<State> order{top.start};
  id[top.start] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (State p : closures[order[i]]) {
      for (auto [a, t] : eps.arcs[p]) {
        if (id[t] == kNoState) {
          id[t] = static_cast<State>(order.size());
          order.push_back(t);
        }
      }
    }
  }

  Nfa nfa(sigma, order.size());
  nfa.initial = 0;
  for (State i = 0; i < order.size(); ++i) {
    for (State p : closures[order[i]]) {
      if (p == top.end) nfa.accepting[i] = true;
      for (auto [a, t] : eps.arcs[p]) nfa.add(i, a, id[t]);
    }
  }
  return nfa;
}

}  // namespace lossmon

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

#include "lossmodel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "error.hpp"

namespace lossmon {
namespace {

using nlohmann::json;

Nfa single_symbols(const Alphabet& sigma, const std::vector<Symbol>& symbols) {
  Nfa nfa(sigma, 2);
  nfa.accepting[1] = true;
  for (Symbol s : symbols) nfa.add(0, s, 1);
  return nfa;
}

bool language_empty(const Nfa& nfa) {
  std::vector<char> seen(nfa.num_states, 0);
  std::vector<State> stack{nfa.initial};
  seen[nfa.initial] = 1;
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    if (nfa.accepting[s]) return false;
    for (Symbol a = 0; a < nfa.alphabet.size(); ++a) {
      for (State t : nfa.next(s, a)) {
        if (!seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
  }
  return true;
}

std::string count_vector_name(const std::vector<unsigned>& counts) {
  std::string out = "(";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(counts[i]);
  }
  return out + ")";
}

Nfa remap_alphabet(const Nfa& nfa, const Alphabet& sigma) {
  const auto map = symbol_map(nfa.alphabet, sigma);
  Nfa out(sigma, nfa.num_states);
  out.initial = nfa.initial;
  out.accepting = nfa.accepting;
  out.error = nfa.error;
  for (State s = 0; s < nfa.num_states; ++s) {
    for (Symbol a = 0; a < nfa.alphabet.size(); ++a) {
      out.next(s, map[a]) = nfa.next(s, a);
    }
  }
  return out;
}

}  // namespace

LossModel::LossModel(Alphabet sigma, Alphabet gamma,
                     std::vector<InverseSpec> inverse, std::string descriptor)
    : sigma_(std::move(sigma)),
      gamma_(std::move(gamma)),
      inverse_(std::move(inverse)),
      descriptor_(std::move(descriptor)) {
  if (inverse_.size() != gamma_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "loss model needs exactly one inverse per alternate symbol");
  }
  for (Symbol g = 0; g < gamma_.size(); ++g) {
    const std::string& name = gamma_[g];
    if (name.find_first_of(" \t\r\n") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "alternate symbol '" + name + "' contains whitespace");
    }
    auto bad = [&](const std::string& why) {
      throw Error(ErrorCode::kInvalidArgument,
                  "R^-1(" + name + "): " + why);
    };
    std::visit(
        [&](auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, SingletonInverse>) {
            if (spec.sigma >= sigma_.size()) bad("symbol out of range");
          } else if constexpr (std::is_same_v<T, RegularInverse>) {
            if (!(spec.language.alphabet == sigma_)) {
              spec.language = remap_alphabet(spec.language, sigma_);
            }
            spec.language.validate();
            if (language_empty(spec.language)) bad("empty language");
          } else if constexpr (std::is_same_v<T, ParikhInverse>) {
            if (spec.counts.size() != sigma_.size()) bad("count vector size");
            if (std::accumulate(spec.counts.begin(), spec.counts.end(), 0u) == 0) {
              bad("all-zero count vector");
            }
          } else {
            for (auto& set : spec.map) set_normalize(set);
          }
        },
        inverse_[g]);
  }
}

bool LossModel::uses_state_maps() const {
  return std::any_of(inverse_.begin(), inverse_.end(), [](const auto& spec) {
    return std::holds_alternative<StateMapInverse>(spec);
  });
}

LossModel LossModel::aligned_to(const Alphabet& sigma) const {
  if (sigma == sigma_) return *this;
  const auto map = symbol_map(sigma_, sigma);
  std::vector<InverseSpec> inverse;
  for (const auto& spec : inverse_) {
    if (auto* s = std::get_if<SingletonInverse>(&spec)) {
      inverse.emplace_back(SingletonInverse{map[s->sigma]});
    } else if (auto* r = std::get_if<RegularInverse>(&spec)) {
      inverse.emplace_back(
          RegularInverse{remap_alphabet(r->language, sigma), r->description});
    } else if (auto* p = std::get_if<ParikhInverse>(&spec)) {
      std::vector<unsigned> counts(sigma.size(), 0);
      for (Symbol a = 0; a < p->counts.size(); ++a) counts[map[a]] = p->counts[a];
      inverse.emplace_back(ParikhInverse{std::move(counts)});
    } else {
      inverse.push_back(spec);
    }
  }
  return LossModel(sigma, gamma_, std::move(inverse), descriptor_);
}

// ---------------------------------------------------------------------------
// Builtin loss types

LossModel identity_loss(const Alphabet& sigma) {
  std::vector<InverseSpec> inverse;
  for (Symbol a = 0; a < sigma.size(); ++a) inverse.emplace_back(SingletonInverse{a});
  return LossModel(sigma, sigma, std::move(inverse), "identity");
}

LossModel dropped_count(const Alphabet& sigma, unsigned n) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "dropped_count needs n >= 1");
  }
  std::vector<std::string> gamma = sigma.symbols();
  std::vector<InverseSpec> inverse;
  for (Symbol a = 0; a < sigma.size(); ++a) inverse.emplace_back(SingletonInverse{a});
  for (unsigned k = 1; k <= n; ++k) {
    gamma.push_back(std::to_string(k));
    Nfa chain(sigma, k + 1);
    chain.accepting[k] = true;
    for (State s = 0; s < k; ++s) {
      for (Symbol a = 0; a < sigma.size(); ++a) chain.add(s, a, s + 1);
    }
    inverse.emplace_back(
        RegularInverse{std::move(chain), "Sigma^" + std::to_string(k)});
  }
  return LossModel(sigma, Alphabet(std::move(gamma)), std::move(inverse),
                   "dropped_count:" + std::to_string(n));
}

LossModel silent_drop(const Alphabet& sigma,
                      const std::vector<std::string>& dropped) {
  std::vector<Symbol> delta;
  for (const auto& name : dropped) delta.push_back(sigma.at(name));
  std::sort(delta.begin(), delta.end());
  delta.erase(std::unique(delta.begin(), delta.end()), delta.end());

  std::vector<std::string> gamma;
  std::vector<InverseSpec> inverse;
  std::string delta_text;
  for (Symbol d : delta) delta_text += (delta_text.empty() ? "" : ",") + sigma[d];
  for (Symbol b = 0; b < sigma.size(); ++b) {
    gamma.push_back(sigma[b] + "'");
    Nfa lang(sigma, 2);
    lang.accepting[1] = true;
    for (Symbol d : delta) lang.add(0, d, 0);
    lang.add(0, b, 1);
    inverse.emplace_back(RegularInverse{
        std::move(lang), "(" + delta_text + ")* " + sigma[b]});
  }
  return LossModel(sigma, Alphabet(std::move(gamma)), std::move(inverse),
                   "silent_drop:" + delta_text);
}

LossModel frequency_count(const Alphabet& sigma, unsigned n,
                          std::size_t max_gamma) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "frequency_count needs n >= 1");
  }
  std::vector<std::string> gamma = sigma.symbols();
  std::vector<InverseSpec> inverse;
  for (Symbol a = 0; a < sigma.size(); ++a) inverse.emplace_back(SingletonInverse{a});

  const std::size_t k = sigma.size();
  // Vectors grouped by total, each group in descending lexicographic order.
  for (unsigned total = 1; total <= n; ++total) {
    std::vector<unsigned> counts(k, 0);
    auto emit = [&](auto&& self, std::size_t i, unsigned left) -> void {
      if (i + 1 == k) {
        counts[i] = left;
        if (gamma.size() >= max_gamma) {
          throw Error(ErrorCode::kCapExceeded,
                      "frequency_count alphabet exceeds " +
                          std::to_string(max_gamma) + " symbols");
        }
        gamma.push_back(count_vector_name(counts));
        inverse.emplace_back(ParikhInverse{counts});
        return;
      }
      for (unsigned c = left + 1; c-- > 0;) {
        counts[i] = c;
        self(self, i + 1, left - c);
      }
    };
    if (k > 0) emit(emit, 0, total);
  }
  return LossModel(sigma, Alphabet(std::move(gamma)), std::move(inverse),
                   "frequency_count:" + std::to_string(n));
}

LossModel merged_objects(const std::vector<std::string>& events,
                         const std::vector<std::string>& parametric,
                         unsigned objects) {
  if (objects == 0) {
    throw Error(ErrorCode::kInvalidArgument, "merged_objects needs objects >= 1");
  }
  for (const auto& p : parametric) {
    if (std::find(events.begin(), events.end(), p) == events.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "parametric event '" + p + "' is not an event");
    }
  }
  std::vector<std::string> sigma_names;
  std::vector<std::vector<Symbol>> members(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) {
    bool is_param = std::find(parametric.begin(), parametric.end(),
                              events[e]) != parametric.end();
    if (!is_param) {
      members[e].push_back(static_cast<Symbol>(sigma_names.size()));
      sigma_names.push_back(events[e]);
      continue;
    }
    for (unsigned o = 1; o <= objects; ++o) {
      members[e].push_back(static_cast<Symbol>(sigma_names.size()));
      sigma_names.push_back(events[e] + std::to_string(o));
    }
  }
  Alphabet sigma(std::move(sigma_names));
  std::vector<InverseSpec> inverse;
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (members[e].size() == 1) {
      inverse.emplace_back(SingletonInverse{members[e][0]});
      continue;
    }
    std::string desc;
    for (Symbol s : members[e]) desc += (desc.empty() ? "" : "|") + sigma[s];
    inverse.emplace_back(RegularInverse{single_symbols(sigma, members[e]), desc});
  }
  std::string param_text;
  for (const auto& p : parametric) param_text += (param_text.empty() ? "" : ",") + p;
  return LossModel(sigma, Alphabet(events), std::move(inverse),
                   "merged_objects:" + std::to_string(objects) + ":" + param_text);
}

LossModel loop_summary(const Dfa& property, const std::string& summary,
                       std::vector<StateSet> region_map) {
  std::vector<std::string> gamma = property.alphabet.symbols();
  std::vector<InverseSpec> inverse;
  for (Symbol a = 0; a < property.alphabet.size(); ++a) {
    inverse.emplace_back(SingletonInverse{a});
  }
  gamma.push_back(summary);
  inverse.emplace_back(StateMapInverse{std::move(region_map), true});
  LossModel model(property.alphabet, Alphabet(std::move(gamma)),
                  std::move(inverse), "loop_summary:" + summary);
  check_compatible(model, property);
  return model;
}

// ---------------------------------------------------------------------------
// delta(q, R^-1(gamma))

void check_compatible(const LossModel& model, const Dfa& property) {
  if (!property.is_property()) {
    throw Error(ErrorCode::kInvalidArgument,
                "property must be a total DFA whose only rejecting state is a "
                "trap error state");
  }
  if (!model.sigma().same_set(property.alphabet)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "loss model input alphabet differs from the property alphabet");
  }
  for (Symbol g = 0; g < model.gamma().size(); ++g) {
    const auto* sm = std::get_if<StateMapInverse>(&model.inverse(g));
    if (!sm) continue;
    auto bad = [&](const std::string& why) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state map for '" + model.gamma()[g] + "': " + why);
    };
    if (sm->map.size() != property.num_states) bad("not total over states");
    for (const auto& set : sm->map) {
      for (State s : set) {
        if (s >= property.num_states) bad("state out of range");
      }
    }
    if (sm->map[*property.error] != StateSet{*property.error}) {
      bad("error state must map to {error}");
    }
  }
}

namespace {

StateSet parikh_reach(const Dfa& property, const std::vector<Symbol>& to_prop,
                      const std::vector<unsigned>& counts, State q) {
  // Mixed-radix index over all sub-vectors; v - e_i always has a smaller
  // index than v, so one forward pass suffices.
  const std::size_t k = counts.size();
  std::vector<std::size_t> stride(k);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    stride[i] = total;
    total *= counts[i] + 1;
  }
  std::vector<StateSet> reach(total);
  reach[0] = {q};
  std::vector<unsigned> digits(k, 0);
  for (std::size_t idx = 1; idx < total; ++idx) {
    for (std::size_t i = 0; i < k; ++i) {
      if (++digits[i] <= counts[i]) break;
      digits[i] = 0;
    }
    StateSet& out = reach[idx];
    for (std::size_t i = 0; i < k; ++i) {
      if (digits[i] == 0) continue;
      for (State s : reach[idx - stride[i]]) {
        out.push_back(property.next(s, to_prop[i]));
      }
    }
    set_normalize(out);
  }
  return reach[total - 1];
}

StateSet reach_one(const LossModel& model, const Dfa& property,
                   const std::vector<Symbol>& to_prop, State q, Symbol g) {
  const InverseSpec& spec = model.inverse(g);
  if (auto* s = std::get_if<SingletonInverse>(&spec)) {
    return {property.next(q, to_prop[s->sigma])};
  }
  if (auto* r = std::get_if<RegularInverse>(&spec)) {
    return states_reachable_via(property, q, r->language);
  }
  if (auto* p = std::get_if<ParikhInverse>(&spec)) {
    return parikh_reach(property, to_prop, p->counts, q);
  }
  return std::get<StateMapInverse>(spec).map[q];
}

}  // namespace

StateSet inverse_reach(const LossModel& model, const Dfa& property, State q,
                       Symbol gamma) {
  check_compatible(model, property);
  if (gamma >= model.gamma().size()) {
    throw Error(ErrorCode::kUnknownSymbol,
                "alternate symbol id " + std::to_string(gamma) + " out of range");
  }
  if (q >= property.num_states) {
    throw Error(ErrorCode::kInvalidArgument, "state out of range");
  }
  return reach_one(model, property, symbol_map(model.sigma(), property.alphabet),
                   q, gamma);
}

std::vector<StateSet> inverse_reach_table(const LossModel& model,
                                          const Dfa& property) {
  check_compatible(model, property);
  const auto to_prop = symbol_map(model.sigma(), property.alphabet);
  const std::size_t k = model.gamma().size();
  std::vector<StateSet> table(property.num_states * k);
  for (State q = 0; q < property.num_states; ++q) {
    for (Symbol g = 0; g < k; ++g) {
      table[q * k + g] = reach_one(model, property, to_prop, q, g);
    }
  }
  return table;
}

bool inverse_contains(const LossModel& model, Symbol gamma,
                      const std::vector<Symbol>& segment) {
  const InverseSpec& spec = model.inverse(gamma);
  if (auto* s = std::get_if<SingletonInverse>(&spec)) {
    return segment.size() == 1 && segment[0] == s->sigma;
  }
  if (auto* r = std::get_if<RegularInverse>(&spec)) {
    return r->language.accepts(segment);
  }
  if (auto* p = std::get_if<ParikhInverse>(&spec)) {
    std::vector<unsigned> counts(model.sigma().size(), 0);
    for (Symbol a : segment) ++counts[a];
    return counts == p->counts;
  }
  throw Error(ErrorCode::kUnsupported,
              "membership in a state-map inverse ('" + model.gamma()[gamma] +
                  "') is not defined");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string require_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw Error(ErrorCode::kSchema, path + ": expected string");
  return j.get<std::string>();
}

unsigned require_positive(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw Error(ErrorCode::kSchema, path + ": expected positive integer");
  }
  return static_cast<unsigned>(j.get<long long>());
}

std::vector<std::string> require_strings(const json& j, const std::string& path) {
  if (!j.is_array()) throw Error(ErrorCode::kSchema, path + ": expected array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(require_string(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

State parse_state(const std::string& text, const Dfa& property,
                  const std::string& path) {
  for (State s = 0; s < property.state_names.size(); ++s) {
    if (property.state_names[s] == text) return s;
  }
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(text, &used);
    if (used == text.size() && v < property.num_states) {
      return static_cast<State>(v);
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kSchema, path + ": unknown property state '" + text + "'");
}

LossModel custom_from_json(const json& spec, const Dfa& property) {
  const json& entries = spec.at("gamma");
  if (!entries.is_object() || entries.empty()) {
    throw Error(ErrorCode::kSchema, "gamma: expected non-empty object");
  }
  std::vector<std::string> gamma;
  std::vector<InverseSpec> inverse;
  bool any_map = false;
  for (const auto& [name, entry] : entries.items()) {
    const std::string path = "gamma." + name;
    gamma.push_back(name);
    if (!entry.is_object()) throw Error(ErrorCode::kSchema, path + ": expected object");
    if (entry.contains("regex")) {
      std::string text = require_string(entry["regex"], path + ".regex");
      inverse.emplace_back(
          RegularInverse{compile_regex(text, property.alphabet), text});
    } else if (entry.contains("symbol")) {
      inverse.emplace_back(SingletonInverse{property.alphabet.at(
          require_string(entry["symbol"], path + ".symbol"))});
    } else if (entry.contains("map")) {
      any_map = true;
      const json& map = entry["map"];
      if (!map.is_object()) throw Error(ErrorCode::kSchema, path + ".map: expected object");
      std::vector<StateSet> table(property.num_states, StateSet{*property.error});
      for (const auto& [from, targets] : map.items()) {
        State q = parse_state(from, property, path + ".map");
        if (!targets.is_array()) {
          throw Error(ErrorCode::kSchema, path + ".map." + from + ": expected array");
        }
        StateSet set;
        for (const auto& t : targets) {
          set.push_back(parse_state(t.is_string() ? t.get<std::string>() : t.dump(),
                                    property, path + ".map." + from));
        }
        set_normalize(set);
        table[q] = std::move(set);
      }
      table[*property.error] = {*property.error};
      inverse.emplace_back(StateMapInverse{std::move(table), true});
    } else {
      throw Error(ErrorCode::kSchema, path + ": expected regex, symbol or map");
    }
  }
  LossModel model(property.alphabet, Alphabet(std::move(gamma)),
                  std::move(inverse), any_map ? "custom_statemap" : "custom");
  check_compatible(model, property);
  return model;
}

}  // namespace

LossModel loss_model_from_json(const json& spec, const Dfa& property) {
  if (!spec.is_object() || !spec.contains("type")) {
    throw Error(ErrorCode::kSchema, "loss model: expected object with \"type\"");
  }
  const std::string type = require_string(spec["type"], "type");
  try {
    if (type == "identity") return identity_loss(property.alphabet);
    if (type == "dropped_count") {
      return dropped_count(property.alphabet, require_positive(spec.at("n"), "n"));
    }
    if (type == "silent_drop") {
      return silent_drop(property.alphabet,
                         require_strings(spec.value("delta", json::array()), "delta"));
    }
    if (type == "frequency_count") {
      return frequency_count(property.alphabet, require_positive(spec.at("n"), "n"));
    }
    if (type == "merged_objects") {
      const unsigned objects = require_positive(spec.at("objects"), "objects");
      const auto parametric = require_strings(spec.at("parametric"), "parametric");
      std::vector<std::string> events;
      for (const auto& name : property.alphabet.symbols()) {
        std::string base = name;
        for (const auto& p : parametric) {
          if (name.size() <= p.size() || name.compare(0, p.size(), p) != 0) continue;
          const std::string idx = name.substr(p.size());
          if (idx.find_first_not_of("0123456789") != std::string::npos) continue;
          unsigned long o = std::stoul(idx);
          if (o >= 1 && o <= objects) base = p;
        }
        if (std::find(events.begin(), events.end(), base) == events.end()) {
          events.push_back(base);
        }
      }
      LossModel model = merged_objects(events, parametric, objects);
      check_compatible(model, property);
      return model.aligned_to(property.alphabet);
    }
    if (type == "custom" || type == "custom_statemap") {
      return custom_from_json(spec, property);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("loss model: ") + e.what());
  }
  throw Error(ErrorCode::kSchema, "loss model: unknown type '" + type + "'");
}

LossModel loss_model_from_string(const std::string& text, const Dfa& property) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json spec;
    try {
      spec = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchema, std::string("loss model JSON: ") + e.what());
    }
    return loss_model_from_json(spec, property);
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (!text.empty() && text.back() == ':') parts.emplace_back();
  auto list = [](const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream s(csv);
    for (std::string item; std::getline(s, item, ',');) {
      if (!item.empty()) out.push_back(item);
    }
    return out;
  };
  auto number = [&](const std::string& s) -> json {
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::kSchema, "loss model '" + text + "': bad number '" + s + "'");
  };
  if (parts.empty()) throw Error(ErrorCode::kSchema, "empty loss model");
  const std::string& type = parts[0];
  json spec{{"type", type}};
  if (type == "identity" && parts.size() == 1) {
  } else if ((type == "dropped_count" || type == "frequency_count") &&
             parts.size() == 2) {
    spec["n"] = number(parts[1]);
  } else if (type == "silent_drop" && parts.size() <= 2) {
    spec["delta"] = parts.size() == 2 ? list(parts[1]) : std::vector<std::string>{};
  } else if (type == "merged_objects" && parts.size() == 3) {
    spec["objects"] = number(parts[1]);
    spec["parametric"] = list(parts[2]);
  } else {
    throw Error(ErrorCode::kSchema, "unrecognized loss model '" + text + "'");
  }
  return loss_model_from_json(spec, property);
}

}  // namespace lossmon

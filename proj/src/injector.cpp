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

#include "injector.hpp"

#include <cmath>

#include "error.hpp"

namespace lossmon {

void LossConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in [0, 1]");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::kInvalidArgument, "eta must be positive");
  }
  if (bound_n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bound_n must be at least 1");
  }
}

double Mt64Source::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Mt64Source::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t subseed(std::uint64_t seed, std::uint64_t index,
                      std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(seed) ^ index) ^ stream);
}

bool bernoulli(RandomSource& rng, double p) { return rng.uniform() < p; }

double exponential(RandomSource& rng, double mean) {
  return -mean * std::log1p(-rng.uniform());
}

std::vector<unsigned> skip_symbols(std::size_t m, unsigned bound_n) {
  if (bound_n == 0) throw Error(ErrorCode::kInvalidArgument, "bound_n must be >= 1");
  std::vector<unsigned> out;
  if (m % bound_n != 0) out.push_back(static_cast<unsigned>(m % bound_n));
  out.insert(out.end(), m / bound_n, bound_n);
  return out;
}

InjectResult inject_dropped_count(const std::vector<std::string>& trace,
                                  std::size_t creation_prefix_len,
                                  const LossConfig& cfg, RandomSource& rng) {
  cfg.validate();
  if (creation_prefix_len > 1 || creation_prefix_len > trace.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "creation prefix must be 0 or 1 and fit the trace");
  }
  InjectResult r;
  std::size_t i = 0;
  for (; i < creation_prefix_len; ++i) {
    r.output.push_back(trace[i]);
    ++r.stats.creation;
  }
  while (i < trace.size()) {
    if (!bernoulli(rng, cfg.rho)) {
      r.output.push_back(trace[i++]);
      ++r.stats.kept;
      continue;
    }
    const double l = exponential(rng, cfg.eta);
    double c = std::ceil(l);
    if (c < 1.0) c = 1.0;
    const std::size_t remaining = trace.size() - i;
    const std::size_t m =
        c >= static_cast<double>(remaining) ? remaining : static_cast<std::size_t>(c);
    for (unsigned k : skip_symbols(m, cfg.bound_n)) {
      r.output.push_back(std::to_string(k));
      ++r.stats.emitted;
    }
    r.stats.skipped += m;
    i += m;
  }
  return r;
}

std::vector<Symbol> apply_filter(const LossModel& model,
                                 const std::vector<Symbol>& trace,
                                 const Segmentation& segmentation) {
  std::vector<Symbol> out;
  std::size_t pos = 0;
  for (const auto& [len, gamma] : segmentation) {
    if (gamma >= model.gamma().size()) {
      throw Error(ErrorCode::kUnknownSymbol, "segment replacement is not in Gamma");
    }
    if (len > trace.size() - pos) {
      throw Error(ErrorCode::kInvalidArgument, "segmentation overruns the trace");
    }
    std::vector<Symbol> segment(trace.begin() + pos, trace.begin() + pos + len);
    if (!inverse_contains(model, gamma, segment)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "segment at " + std::to_string(pos) + " is not in R^-1('" +
                      model.gamma()[gamma] + "')");
    }
    out.push_back(gamma);
    pos += len;
  }
  if (pos != trace.size()) {
    throw Error(ErrorCode::kInvalidArgument, "segmentation does not cover the trace");
  }
  return out;
}

}  // namespace lossmon

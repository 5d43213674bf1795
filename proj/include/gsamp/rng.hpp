// Copyright 2026 The Authors.
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

// Counter-based random stream. Output i of a stream keyed by `seed` is
// mix(seed, i), so a stream is a pure function of its key and every
// (experiment, trial) pair can derive an independent key with sub_seed().

#ifndef GSAMP_RNG_HPP_
#define GSAMP_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace gsamp {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Hash of a seed and a list of stream labels (trial index, purpose tag...).
constexpr std::uint64_t sub_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> labels) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t label : labels) h = mix64(h ^ mix64(label + 0x632be59bd9b4e019ULL));
  return h;
}

constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t label) {
  return sub_seed(seed, {label});
}

// Satisfies UniformRandomBitGenerator, so it plugs into <random>
// distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    return mix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gsamp

#endif  // GSAMP_RNG_HPP_

// Copyright 2026 The liomsim Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace liomsim {

// Stateless 64-bit mixing used to derive independent streams from
// (seed, index...) tuples.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_words(std::uint64_t seed, std::span<const std::uint64_t> words);
std::uint64_t hash_words(std::uint64_t seed, std::initializer_list<std::uint64_t> words);

// Uniform in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
      : engine_(hash_words(seed, stream)) {}

  double uniform() { return to_unit(engine_()); }
  double normal() { return normal_(engine_); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace liomsim

// Copyright 2026 The Glor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GLOR_CORE_RANDOM_H_
#define GLOR_CORE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace glor {

// Seeded generator whose output is identical on every standard library:
// std::mt19937_64's sequence is fixed by the standard, while the bounded-int
// and shuffle algorithms here are our own (std::uniform_int_distribution and
// std::shuffle are implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  uint64_t Below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool Coin() { return (engine_() >> 63) != 0; }

  // Uniform double in [0, 1).
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Independent sub-seed for a named stage.
uint64_t DeriveSeed(uint64_t seed, std::string_view label);

}  // namespace glor

#endif  // GLOR_CORE_RANDOM_H_

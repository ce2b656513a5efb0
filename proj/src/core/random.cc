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
#include "glor/core/random.h"

#include <string>

#include "glor/core/hash.h"

namespace glor {

uint64_t DeriveSeed(uint64_t seed, std::string_view label) {
  const std::string seed_text = std::to_string(seed);
  return StableKey64({"seed", seed_text, label});
}

}  // namespace glor

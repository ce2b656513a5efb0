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
#ifndef GLOR_CORE_VERSION_H_
#define GLOR_CORE_VERSION_H_

#include <string_view>

#ifndef GLOR_VERSION
#define GLOR_VERSION "0.0.0"
#endif

namespace glor {

inline constexpr std::string_view kVersion = GLOR_VERSION;

}  // namespace glor

#endif  // GLOR_CORE_VERSION_H_

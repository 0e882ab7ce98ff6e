// Copyright 2026 The misslab Authors
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

#include <string>
#include <vector>

namespace misslab::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNonConvergence = 2;

/// Entry point of the misslab command-line tool. Returns the process exit
/// code.
int run(int argc, const char* const* argv);

/// Same, with the program name as args[0].
int run(const std::vector<std::string>& args);

}  // namespace misslab::cli

// Copyright 2026 The locality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace locality::cli {

/// Exit codes shared by all commands.
enum Exit : int {
  kOk = 0,
  kInputError = 1,      // unreadable file, parse/validation error, bad flags, unbound symbol
  kDerivationError = 2, // piecewise counts or ambiguous row matching
  kInvarianceFailed = 3,
  kThresholdExceeded = 4,
};

/// Runs one command. `args` excludes the program name, e.g.
/// {"analyze", "matmul.aff", "--param", "n", "--b", "8"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace locality::cli

// f0warp/cli.h

// Copyright 2026 The f0warp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef F0WARP_CLI_H_
#define F0WARP_CLI_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace f0warp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitUsage = 64;

// Overrides the default worker count of `process` when --workers is absent.
inline constexpr const char* kWorkersEnv = "F0WARP_WORKERS";

// argv-style entry point: args[0] is the program name. Machine-readable
// output goes to `out`, progress and diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Parses "0,20,-20" into Mel offsets. Throws f0warp::Error(kParseError).
std::vector<double> parse_number_list(const std::string& text);

}  // namespace f0warp::cli

#endif  // F0WARP_CLI_H_

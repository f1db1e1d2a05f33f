// Copyright 2026 The Retrieval Lab Authors.
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


// The retrieval_lab command line: one subcommand per pipeline stage.

#ifndef RLAB_CLI_H_
#define RLAB_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace rlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// `args` includes the program name. Tables go to `out`, diagnostics and
// usage text to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace rlab

#endif  // RLAB_CLI_H_

// Copyright 2026 The Nextword Authors.
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

#ifndef NEXTWORD_TOOLS_CLI_H_
#define NEXTWORD_TOOLS_CLI_H_

namespace nextword {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

// Parses arguments and runs one subcommand: clean, build, predict, complete,
// eval, bench or serve. Data goes to stdout, diagnostics to stderr.
int RunCli(int argc, char** argv);

}  // namespace nextword

#endif  // NEXTWORD_TOOLS_CLI_H_

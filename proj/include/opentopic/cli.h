/* Copyright 2026 The OpenTopic Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef OPENTOPIC_CLI_H_
#define OPENTOPIC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace opentopic {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Entry point of the `opentopic` binary. `args` excludes the program name.
// Returns 0 on success, 1 on invalid input or usage, 2 on I/O failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opentopic

#endif  // OPENTOPIC_CLI_H_

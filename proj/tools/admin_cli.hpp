// Copyright 2026 The SecureExam Authors
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


#ifndef SECUREXAM_TOOLS_ADMIN_CLI_HPP_
#define SECUREXAM_TOOLS_ADMIN_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace securexam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOperation = 1;
inline constexpr int kExitUsage = 2;

// Runs one securexam-admin invocation. args excludes the program name.
int run_admin(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace securexam::cli

#endif  // SECUREXAM_TOOLS_ADMIN_CLI_HPP_

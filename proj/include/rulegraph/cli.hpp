// Copyright 2026 The Rulegraph Authors
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

#include <iosfwd>
#include <string>
#include <vector>

#include "rulegraph/config.hpp"

namespace rulegraph::cli {

// Process exit codes. Documented in README.md.
enum ExitCode : int {
  kOk = 0,
  kRunFailed = 1,
  kUsage = 2,
  kConfig = 3,
  kPlanning = 4,
  kAllPathsFailed = 5,
  kProvider = 6,
  kIo = 7,
  kData = 8,
};

int exit_code_for(ErrorKind kind);

// `args[0]` is the program name. Answers and tables go to `out`; every
// diagnostic goes to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const EnvLookup& env = process_env());

}  // namespace rulegraph::cli

// Copyright 2026 The Plumber Authors.
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

#ifndef PLUMBER_CLI_H_
#define PLUMBER_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "plumber/config.h"

namespace plumber {

// Runs the `plumber` command line. `args` excludes the program name.
// Returns 0 on success, 1 on user error, 2 on internal error.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err, const EnvLookup& env = process_env);

}  // namespace plumber

#endif  // PLUMBER_CLI_H_

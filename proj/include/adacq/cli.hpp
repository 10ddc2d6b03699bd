/* Copyright 2026 The adacq Authors. All Rights Reserved.

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
#ifndef ADACQ_CLI_HPP_
#define ADACQ_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace adacq {

// Entry point of the `adacq` tool. Subcommands: synth, collect, label,
// stats, eval, compare. Data goes to `out`, diagnostics to `err`. Returns the
// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adacq

#endif  // ADACQ_CLI_HPP_

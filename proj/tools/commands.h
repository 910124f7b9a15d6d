/*
 * Copyright 2026 The pairlens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PAIRLENS_TOOLS_COMMANDS_H_
#define PAIRLENS_TOOLS_COMMANDS_H_

#include <string>

#include "run_config.h"

namespace pairlens::cli {

// Each command returns the process exit code on success paths and throws
// pairlens::Error on failure.
int RunExplain(RunConfig config);
int RunExact(RunConfig config);
int RunEvaluate(RunConfig config);
int RunServe(const RunConfig& config);

struct OracleCheckConfig {
  std::string endpoint;
  int timeout_ms = 10000;
  int probes = 8;
  std::uint64_t seed = 0;
  std::string out;  // optional report file
};
// Prints the conformance report to stdout; returns 1 if any check failed.
int RunOracleCheck(const OracleCheckConfig& config);

// Re-executes the run described by `manifest_path` into `out`. Input files
// must still hash to the recorded values. With `verify`, the new artifacts
// must also match the recorded hashes.
int RunReplay(const std::string& manifest_path, const std::string& out,
              bool verify);

// Dispatches a resolved config to its command.
int Dispatch(RunConfig config);

}  // namespace pairlens::cli

#endif  // PAIRLENS_TOOLS_COMMANDS_H_

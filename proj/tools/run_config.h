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

#ifndef PAIRLENS_TOOLS_RUN_CONFIG_H_
#define PAIRLENS_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairlens/game.h"

namespace pairlens::cli {

struct OracleConfig {
  std::string source = "synthetic";  // file | synthetic | remote
  std::string game_path;
  int n_image = 0;
  int n_text = 0;
  std::string game_kind = "two-additive";
  // Unset means "derive from the run seed"; manifests always hold the
  // resolved value.
  std::optional<std::uint64_t> game_seed;
  std::string endpoint;
  int timeout_ms = 30000;
  int retries = 2;
};

// Everything a run depends on. Serialized verbatim into the run manifest so
// that `replay` can reproduce the artifacts from the manifest alone.
struct RunConfig {
  std::string command;
  OracleConfig oracle;
  double p = 0.5;
  std::uint64_t budget = 4096;
  std::string mode = "naive";
  std::string basis = "full";
  std::string kernel = "wbanzhaf";
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;

  // evaluate
  std::string explanation_path;
  std::string pointing_spec;
  std::vector<double> eval_p;
  std::uint64_t eval_m = 1000;
  bool pgr_fallback = false;

  // serve
  int port = -1;  // -1 serves over stdin/stdout
  int max_batch = 256;
  std::string faults;
  std::string port_file;
};

nlohmann::json ToJson(const RunConfig& config);
RunConfig RunConfigFromJson(const nlohmann::json& json);

// Fills derived values (the synthetic game seed) so the config is complete.
void Resolve(RunConfig& config);

// Builds the game named by `config.oracle`. Remote oracles come wrapped in a
// per-run memoization layer.
std::unique_ptr<GameOracle> BuildOracle(const OracleConfig& oracle);

}  // namespace pairlens::cli

#endif  // PAIRLENS_TOOLS_RUN_CONFIG_H_

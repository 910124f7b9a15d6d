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

#include "run_config.h"

#include "pairlens/errors.h"
#include "pairlens/random.h"
#include "pairlens/random_game.h"
#include "pairlens/remote_oracle.h"
#include "pairlens/serialization.h"

namespace pairlens::cli {
namespace {

using nlohmann::json;

// Remote games are expensive; repeated masks (duplicate draws, curve anchors)
// are answered from a cache that lives as long as the run.
class CachedRemote final : public GameOracle {
 public:
  explicit CachedRemote(std::unique_ptr<RemoteOracle> remote)
      : remote_(std::move(remote)), cache_(*remote_) {}
  const PlayerSpace& space() const override { return remote_->space(); }

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override {
    return cache_.Evaluate(masks);
  }

 private:
  std::unique_ptr<RemoteOracle> remote_;
  MemoizedOracle cache_;
};

}  // namespace

json ToJson(const RunConfig& c) {
  json oracle = {{"source", c.oracle.source}};
  if (c.oracle.source == "file") {
    oracle["game_path"] = c.oracle.game_path;
  } else if (c.oracle.source == "synthetic") {
    oracle["n_image"] = c.oracle.n_image;
    oracle["n_text"] = c.oracle.n_text;
    oracle["game_kind"] = c.oracle.game_kind;
    oracle["game_seed"] = c.oracle.game_seed ? json(*c.oracle.game_seed) : json();
  } else {
    oracle["endpoint"] = c.oracle.endpoint;
    oracle["timeout_ms"] = c.oracle.timeout_ms;
    oracle["retries"] = c.oracle.retries;
  }
  json out = {{"command", c.command}, {"oracle", oracle}, {"seed", c.seed},
              {"threads", c.threads}};
  if (c.command == "explain" || c.command == "exact") out["p"] = c.p;
  if (c.command == "explain") {
    out["budget"] = c.budget;
    out["mode"] = c.mode;
    out["basis"] = c.basis;
    out["kernel"] = c.kernel;
  }
  if (c.command == "evaluate") {
    out["explanation_path"] = c.explanation_path;
    out["pointing_spec"] = c.pointing_spec;
    out["eval_p"] = c.eval_p;
    out["eval_m"] = c.eval_m;
    out["pgr_fallback"] = c.pgr_fallback;
  }
  return out;
}

RunConfig RunConfigFromJson(const json& j) {
  try {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    const auto& o = j.at("oracle");
    c.oracle.source = o.at("source").get<std::string>();
    c.oracle.game_path = o.value("game_path", "");
    c.oracle.n_image = o.value("n_image", 0);
    c.oracle.n_text = o.value("n_text", 0);
    c.oracle.game_kind = o.value("game_kind", "two-additive");
    if (o.contains("game_seed") && !o.at("game_seed").is_null()) {
      c.oracle.game_seed = o.at("game_seed").get<std::uint64_t>();
    }
    c.oracle.endpoint = o.value("endpoint", "");
    c.oracle.timeout_ms = o.value("timeout_ms", 30000);
    c.oracle.retries = o.value("retries", 2);
    c.seed = j.at("seed").get<std::uint64_t>();
    c.threads = j.value("threads", 0);
    c.p = j.value("p", 0.5);
    c.budget = j.value("budget", std::uint64_t{4096});
    c.mode = j.value("mode", "naive");
    c.basis = j.value("basis", "full");
    c.kernel = j.value("kernel", "wbanzhaf");
    c.explanation_path = j.value("explanation_path", "");
    c.pointing_spec = j.value("pointing_spec", "");
    c.eval_p = j.value("eval_p", std::vector<double>{});
    c.eval_m = j.value("eval_m", std::uint64_t{1000});
    c.pgr_fallback = j.value("pgr_fallback", false);
    return c;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed run configuration: ") + e.what());
  }
}

void Resolve(RunConfig& config) {
  if (config.oracle.source == "synthetic" && !config.oracle.game_seed) {
    config.oracle.game_seed = DeriveSeed(config.seed, "cli/game");
  }
}

std::unique_ptr<GameOracle> BuildOracle(const OracleConfig& oracle) {
  if (oracle.source == "file") {
    if (oracle.game_path.empty()) {
      throw InvalidArgumentError("--oracle file needs --game PATH");
    }
    return std::make_unique<TabulatedGame>(
        TabulatedGameFromJson(ReadJsonFile(oracle.game_path)));
  }
  if (oracle.source == "synthetic") {
    if (oracle.n_image < 1 || oracle.n_text < 1) {
      throw InvalidArgumentError(
          "--oracle synthetic needs --n-image and --n-text of at least 1");
    }
    return MakeRandomGame(PlayerSpace(oracle.n_image, oracle.n_text),
                          ParseGameKind(oracle.game_kind),
                          oracle.game_seed.value_or(0));
  }
  if (oracle.source == "remote") {
    if (oracle.endpoint.empty()) {
      throw InvalidArgumentError("--oracle remote needs --endpoint");
    }
    RemoteOptions options;
    options.timeout = std::chrono::milliseconds(oracle.timeout_ms);
    options.max_retries = oracle.retries;
    return std::make_unique<CachedRemote>(
        RemoteOracle::Connect(Endpoint::Parse(oracle.endpoint), options));
  }
  throw InvalidArgumentError("unknown oracle source '" + oracle.source +
                             "' (expected file, synthetic or remote)");
}

}  // namespace pairlens::cli

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

// pairlens: fit, evaluate and serve pairwise interaction explanations.
//
// Exit codes: 0 ok, 1 other failure (including failed oracle checks),
// 2 usage or invalid input, 3 transport, 4 protocol, 5 ill-posed fit,
// 6 enumeration guard, 7 undefined metric. Failures print one JSON object
// {"error": {"kind", "message", ...}} on stderr.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.h"
#include "pairlens/errors.h"

namespace {

using pairlens::ErrorKind;
using pairlens::cli::RunConfig;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kInvalidMask:
    case ErrorKind::kUnsupported:
    case ErrorKind::kIo:
      return 2;
    case ErrorKind::kTransport:
      return 3;
    case ErrorKind::kProtocol:
      return 4;
    case ErrorKind::kIllPosedFit:
      return 5;
    case ErrorKind::kSpaceTooLarge:
      return 6;
    case ErrorKind::kUndefinedMetric:
    case ErrorKind::kNormalizationDegenerate:
      return 7;
  }
  return 1;
}

void ReportError(const std::string& kind, const std::string& message,
                 nlohmann::json extra = nlohmann::json::object()) {
  extra["kind"] = kind;
  extra["message"] = message;
  std::cerr << nlohmann::json{{"error", extra}}.dump() << std::endl;
}

void AddOracleOptions(CLI::App* app, RunConfig& config) {
  auto& o = config.oracle;
  app->add_option("--oracle", o.source, "Game source")
      ->check(CLI::IsMember({"file", "synthetic", "remote"}))
      ->capture_default_str();
  app->add_option("--game", o.game_path, "Tabulated game JSON (--oracle file)");
  app->add_option("--n-image", o.n_image, "Image players (--oracle synthetic)");
  app->add_option("--n-text", o.n_text, "Text players (--oracle synthetic)");
  app->add_option("--game-kind", o.game_kind,
                  "tabulated, two-additive or factored (--oracle synthetic)")
      ->capture_default_str();
  app->add_option("--game-seed", o.game_seed,
                  "Synthetic game seed; derived from --seed when omitted");
  app->add_option("--endpoint", o.endpoint,
                  "exec:<command> or tcp://host:port (--oracle remote)");
  app->add_option("--timeout-ms", o.timeout_ms, "Remote oracle timeout")
      ->capture_default_str();
  app->add_option("--retries", o.retries, "Remote retries per batch")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairlens: pairwise interaction explanations for image-text games"};
  app.require_subcommand(1);

  RunConfig config;
  auto* explain = app.add_subcommand("explain", "Sample, query and fit an explanation");
  AddOracleOptions(explain, config);
  explain->add_option("--p", config.p, "Inclusion probability")->capture_default_str();
  explain->add_option("--budget", config.budget, "Sampling budget m")
      ->capture_default_str();
  explain->add_option("--mode", config.mode, "naive or cross-modal")
      ->check(CLI::IsMember({"naive", "cross-modal"}))
      ->capture_default_str();
  explain->add_option("--basis", config.basis,
                      "full, cross-modal, first-order or clique:K")
      ->capture_default_str();
  explain->add_option("--kernel", config.kernel, "wbanzhaf or shapley")
      ->check(CLI::IsMember({"wbanzhaf", "shapley"}))
      ->capture_default_str();

  auto* exact = app.add_subcommand("exact", "Exact explanation by enumeration");
  AddOracleOptions(exact, config);
  exact->add_option("--p", config.p, "Inclusion probability")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Score an explanation");
  AddOracleOptions(evaluate, config);
  evaluate->add_option("--explanation", config.explanation_path,
                       "Explanation JSON")->required();
  evaluate->add_option("--pointing-spec", config.pointing_spec,
                       "Pointing-game object spec JSON");
  evaluate->add_option("--eval-p", config.eval_p,
                       "Comma-separated p values for the rank correlation")
      ->delimiter(',');
  evaluate->add_option("--eval-m", config.eval_m, "Masks per correlation")
      ->capture_default_str();
  evaluate->add_flag("--pgr-fallback", config.pgr_fallback,
                     "Score first-order explanations with attribution products");

  for (auto* sub : {explain, exact, evaluate}) {
    sub->add_option("--seed", config.seed, "Run seed")->capture_default_str();
    sub->add_option("--out", config.out, "New output directory")->required();
    sub->add_option("--threads", config.threads, "Worker threads (0: all cores)")
        ->capture_default_str();
  }

  auto* serve = app.add_subcommand("serve", "Serve a game over the oracle protocol");
  AddOracleOptions(serve, config);
  serve->add_option("--seed", config.seed, "Run seed")->capture_default_str();
  serve->add_option("--port", config.port,
                    "TCP port on 127.0.0.1 (0 picks one); stdio when omitted");
  serve->add_option("--port-file", config.port_file,
                    "Write the bound port here once listening");
  serve->add_option("--max-batch", config.max_batch, "Advertised max batch")
      ->capture_default_str();
  serve->add_option("--faults", config.faults,
                    "Test-only misbehaviour, e.g. shuffle,noise=0.1,die-after=2");

  pairlens::cli::OracleCheckConfig check;
  auto* oracle_check =
      app.add_subcommand("oracle-check", "Protocol conformance checks for an endpoint");
  oracle_check->add_option("--endpoint", check.endpoint, "Oracle endpoint")->required();
  oracle_check->add_option("--timeout-ms", check.timeout_ms, "Per-reply timeout")
      ->capture_default_str();
  oracle_check->add_option("--probes", check.probes, "Random probe masks")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  oracle_check->add_option("--seed", check.seed, "Probe seed")->capture_default_str();
  oracle_check->add_option("--out", check.out, "Also write the report here");

  std::string manifest_path;
  std::string replay_out;
  bool verify = false;
  auto* replay = app.add_subcommand("replay", "Re-run a recorded manifest");
  replay->add_option("--manifest", manifest_path, "manifest.json of a run")->required();
  replay->add_option("--out", replay_out, "New output directory")->required();
  replay->add_flag("--verify", verify, "Fail unless artifacts match the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    ReportError("usage", e.what());
    return 2;
  }

  try {
    if (*oracle_check) return pairlens::cli::RunOracleCheck(check);
    if (*replay) return pairlens::cli::RunReplay(manifest_path, replay_out, verify);
    config.command = app.get_subcommands().front()->get_name();
    if (*serve) return pairlens::cli::RunServe(config);
    return pairlens::cli::Dispatch(config);
  } catch (const pairlens::TransportError& e) {
    nlohmann::json extra = nlohmann::json::object();
    if (e.batch_index() >= 0) extra["batch_index"] = e.batch_index();
    ReportError("transport", e.what(), extra);
    return 3;
  } catch (const pairlens::IllPosedFitError& e) {
    ReportError("ill-posed-fit", e.what(), {{"rank_deficiency", e.deficiency()}});
    return 5;
  } catch (const pairlens::Error& e) {
    ReportError(std::string(pairlens::ErrorKindName(e.kind())), e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    ReportError("internal", e.what());
    return 1;
  }
}

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

#include "commands.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "artifacts.h"
#include "pairlens/basis.h"
#include "pairlens/errors.h"
#include "pairlens/evaluation.h"
#include "pairlens/exact.h"
#include "pairlens/oracle_server.h"
#include "pairlens/pointing_game.h"
#include "pairlens/random.h"
#include "pairlens/regression.h"
#include "pairlens/remote_oracle.h"
#include "pairlens/sampler.h"
#include "pairlens/serialization.h"

namespace pairlens::cli {
namespace {

using nlohmann::json;

constexpr int kManifestSchemaVersion = 1;
constexpr int kReportSchemaVersion = 1;
constexpr char kToolVersion[] = "0.1.0";

json ErrorJson(const Error& e) {
  return {{"kind", std::string(ErrorKindName(e.kind()))}, {"message", e.what()}};
}

// Input files the run read, with their hashes, so replays can detect drift.
json InputHashes(const RunConfig& config) {
  json inputs = json::object();
  auto add = [&](const char* key, const std::string& path) {
    if (!path.empty()) {
      inputs[key] = {{"path", path}, {"sha256", FileSha256(path)}};
    }
  };
  if (config.oracle.source == "file") add("game", config.oracle.game_path);
  if (config.command == "evaluate") {
    add("explanation", config.explanation_path);
    add("pointing_spec", config.pointing_spec);
  }
  return inputs;
}

json Manifest(const RunConfig& config, const RunDirectory& dir) {
  json artifacts = json::object();
  for (const auto& [name, hash] : dir.hashes()) artifacts[name] = hash;
  return {{"schema_version", kManifestSchemaVersion},
          {"kind", "run-manifest"},
          {"tool", "pairlens"},
          {"tool_version", kToolVersion},
          {"config", ToJson(config)},
          {"inputs", InputHashes(config)},
          {"artifacts", artifacts}};
}

BasisSpec ResolveBasis(const std::string& name, const SampleBatch& batch,
                       std::span<const double> values, const Kernel& kernel,
                       const FitOptions& fit_options) {
  const PlayerSpace& space = batch.space;
  if (name == "full") return BasisSpec::Full(space);
  if (name == "cross-modal") return BasisSpec::CrossModal(space);
  if (name == "first-order") return BasisSpec::FirstOrder(space);
  if (name.rfind("clique:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(name.substr(7));
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad clique size in --basis " + name);
    }
    SplitClique(space, k);  // validates k before any fitting
    // Tokens are ranked by a first-order fit on the same batch.
    const auto additive =
        Fit(batch, values, BasisSpec::FirstOrder(space), kernel, fit_options);
    return SelectClique(additive.coefficients().singles(), space, k);
  }
  throw InvalidArgumentError("unknown basis '" + name +
                             "' (expected full, cross-modal, first-order or "
                             "clique:K)");
}

std::size_t PlannedBasisSize(const std::string& name, const PlayerSpace& space) {
  const auto n = static_cast<std::size_t>(space.size());
  if (name == "full") return 1 + n + n * (n - 1) / 2;
  if (name == "cross-modal") {
    return 1 + n + static_cast<std::size_t>(space.n_image()) *
                       static_cast<std::size_t>(space.n_text());
  }
  if (name.rfind("clique:", 0) == 0) {
    const auto k = static_cast<std::size_t>(std::stoi(name.substr(7)));
    return 1 + n + k * (k - 1) / 2;
  }
  return 1 + n;
}

}  // namespace

int RunExplain(RunConfig config) {
  Resolve(config);
  CheckOpenUnitInterval(config.p);
  const SamplingMode mode = ParseSamplingMode(config.mode);
  const Kernel kernel = ParseKernel(config.kernel, config.p);
  RunDirectory dir(config.out);
  const auto oracle = BuildOracle(config.oracle);
  const PlayerSpace& space = oracle->space();

  const std::size_t basis_size = PlannedBasisSize(config.basis, space);
  const SamplePlan plan =
      mode == SamplingMode::kNaive
          ? SamplePlan::Naive(space, config.p, config.budget, config.seed)
          : SamplePlan::CrossModal(space, config.p, config.budget, config.seed);
  plan.Validate();
  const std::uint64_t draws =
      mode == SamplingMode::kNaive
          ? config.budget
          : plan.ResolvedSplit().m_image * plan.ResolvedSplit().m_text;
  if (draws < basis_size) {
    // Refuse before querying the oracle; the fit could not succeed anyway.
    throw IllPosedFitError("budget yields " + std::to_string(draws) +
                               " masks but the " + config.basis + " basis has " +
                               std::to_string(basis_size) + " coefficients",
                           basis_size - draws);
  }

  const SampleBatch batch = Sample(plan);
  const auto values = EvaluateBatch(*oracle, batch);
  FitOptions fit_options;
  fit_options.threads = config.threads;
  const BasisSpec basis =
      ResolveBasis(config.basis, batch, values, kernel, fit_options);
  const Explanation explanation = Fit(batch, values, basis, kernel, fit_options);

  dir.WriteJson("explanation.json", ExplanationToJson(explanation));
  std::ostringstream samples;
  WriteBatchJsonl(batch, samples);
  dir.Write("samples.jsonl", samples.str());
  json diagnostics = {
      {"schema_version", kReportSchemaVersion},
      {"kind", "fit-diagnostics"},
      {"residual_mse", explanation.diagnostics().residual_mse},
      {"condition_estimate", explanation.diagnostics().condition_estimate},
      {"sample_count", explanation.diagnostics().sample_count},
      {"distinct_masks", explanation.diagnostics().distinct_masks},
      {"rank", explanation.diagnostics().rank},
      {"solver", explanation.diagnostics().solver},
      {"basis_size", basis.size()},
      {"mode", SamplingModeName(mode)},
  };
  if (mode == SamplingMode::kCrossModal) {
    diagnostics["m_image"] = batch.image_pool.size();
    diagnostics["m_text"] = batch.text_pool.size();
  }
  if (kernel.type == KernelType::kWeightedBanzhaf) {
    diagnostics["first_order"] = FirstOrderConversion(explanation);
  }
  dir.WriteJson("diagnostics.json", diagnostics);
  dir.Commit(Manifest(config, dir));
  return 0;
}

int RunExact(RunConfig config) {
  Resolve(config);
  CheckOpenUnitInterval(config.p);
  RunDirectory dir(config.out);
  const auto oracle = BuildOracle(config.oracle);
  oracle->space().CheckEnumerable();
  const auto* tabulated = dynamic_cast<const TabulatedGame*>(oracle.get());
  const TabulatedGame table =
      tabulated != nullptr ? *tabulated : TabulatedGame::Tabulate(*oracle);

  const ExactExplanation exact = ExactFaithfulInteractions(table, config.p);
  const Explanation explanation = exact.ToExplanation();
  dir.WriteJson("explanation.json", ExplanationToJson(explanation));
  dir.WriteJson("game.json", TabulatedGameToJson(table));
  dir.WriteJson("report.json",
                {{"schema_version", kReportSchemaVersion},
                 {"kind", "exact-report"},
                 {"p", config.p},
                 {"p_faithfulness", exact.faithfulness},
                 {"basis_size", exact.basis_size()},
                 {"weighted_banzhaf", FirstOrderConversion(explanation)}});
  dir.Commit(Manifest(config, dir));
  return 0;
}

int RunEvaluate(RunConfig config) {
  Resolve(config);
  if (config.explanation_path.empty()) {
    throw InvalidArgumentError("evaluate needs --explanation FILE");
  }
  const Explanation explanation =
      ExplanationFromJson(ReadJsonFile(config.explanation_path));
  if (config.eval_p.empty()) {
    config.eval_p.push_back(explanation.kernel().type == KernelType::kWeightedBanzhaf
                                ? explanation.kernel().p
                                : 0.5);
  }
  for (const double p : config.eval_p) CheckOpenUnitInterval(p, "--eval-p");
  if (config.eval_m < 2) throw InvalidArgumentError("--eval-m must be >= 2");
  std::optional<PointingSpec> pointing;
  if (!config.pointing_spec.empty()) {
    pointing = LoadPointingSpec(config.pointing_spec);
    pointing->Validate(explanation.space());
  }
  RunDirectory dir(config.out);
  const auto oracle = BuildOracle(config.oracle);
  CheckSameSpace(explanation.space(), oracle->space(), "evaluate");

  json report = {{"schema_version", kReportSchemaVersion},
                 {"kind", "metrics"},
                 {"space",
                  {{"n_image", explanation.space().n_image()},
                   {"n_text", explanation.space().n_text()}}}};

  json correlation = json::array();
  const std::uint64_t correlation_seed = DeriveSeed(config.seed, "eval/correlation");
  for (const double p : config.eval_p) {
    json entry = {{"p", p}, {"m", config.eval_m}};
    try {
      entry["value"] = FaithfulnessCorrelation(explanation, *oracle, p,
                                               config.eval_m, correlation_seed);
    } catch (const UndefinedMetricError& e) {
      entry["error"] = ErrorJson(e);
    }
    correlation.push_back(std::move(entry));
  }
  report["faithfulness_correlation"] = std::move(correlation);

  GreedyOptions greedy;
  greedy.threads = config.threads;
  const Curves curves = InsertionDeletionCurves(explanation, *oracle, greedy);
  report["aid"] = {{"value", curves.aid}};
  json curve_json = {{"empty_value", curves.empty_value},
                     {"full_value", curves.full_value},
                     {"insertion", curves.insertion},
                     {"deletion", curves.deletion},
                     {"normalized", curves.insertion_norm.has_value()}};
  if (!curves.insertion_norm) {
    curve_json["error"] = {{"kind", std::string(ErrorKindName(ErrorKind::kNormalizationDegenerate))},
                           {"message", curves.normalization_error}};
  }
  report["insertion_deletion"] = std::move(curve_json);

  if (pointing) {
    PointingOptions options;
    options.attribution_product_fallback = config.pgr_fallback;
    try {
      report["pgr"] = {{"status", "computed"},
                       {"value", PointingGameRecognition(explanation, *pointing,
                                                         options)}};
    } catch (const UndefinedMetricError& e) {
      report["pgr"] = {{"status", "undefined"}, {"error", ErrorJson(e)}};
    }
  } else {
    report["pgr"] = {{"status", "not computed"},
                     {"reason", "no pointing spec supplied"}};
  }

  std::ostringstream csv;
  WriteCurvesCsv(curves, csv);
  dir.WriteJson("metrics.json", report);
  dir.Write("curves.csv", csv.str());
  dir.Commit(Manifest(config, dir));
  return 0;
}

int RunServe(const RunConfig& config) {
  RunConfig resolved = config;
  Resolve(resolved);
  if (resolved.oracle.source == "remote") {
    throw InvalidArgumentError("serve exposes file or synthetic games only");
  }
  const auto game = BuildOracle(resolved.oracle);
  ServeOptions options;
  options.max_batch = config.max_batch;
  options.faults = ServerFaults::Parse(config.faults);
  options.extra_handshake = {{"server", "pairlens"}};
  if (config.port < 0) {
    ServeStream(*game, 0, 1, options);
    return 0;
  }
  ServeTcp(*game, config.port, options, [&](int port) {
    std::cerr << "listening on 127.0.0.1:" << port << std::endl;
    if (!config.port_file.empty()) {
      std::ofstream(config.port_file) << port << '\n';
    }
  });
  return 0;
}

int RunOracleCheck(const OracleCheckConfig& config) {
  json checks = json::array();
  bool all_passed = true;
  auto record = [&](const std::string& name, bool passed, const std::string& detail) {
    checks.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    all_passed = all_passed && passed;
  };

  RemoteOptions options;
  options.timeout = std::chrono::milliseconds(config.timeout_ms);
  options.max_retries = 0;
  std::unique_ptr<RemoteOracle> oracle;
  json handshake;
  try {
    oracle = RemoteOracle::Connect(Endpoint::Parse(config.endpoint), options);
    handshake = oracle->handshake_fields();
    record("handshake", true,
           "advertises " + oracle->space().ToString() + ", max_batch " +
               std::to_string(oracle->max_batch()));
  } catch (const Error& e) {
    record("handshake", false, e.what());
  }

  if (oracle) {
    const PlayerSpace& space = oracle->space();
    auto rng = MakeStream(config.seed, "oracle-check");
    std::vector<Mask> probes;
    for (int k = 0; k < config.probes; ++k) {
      Mask mask(space);
      for (int player = 0; player < space.size(); ++player) {
        if (rng.NextBernoulli(0.5)) mask.set(player);
      }
      probes.push_back(std::move(mask));
    }
    // Each check runs on its own; a failure in one does not stop the rest.
    auto guarded = [&](const std::string& name, auto&& body) {
      try {
        body();
      } catch (const Error& e) {
        record(name, false, e.what());
      }
    };

    guarded("empty-and-full-mask", [&] {
      const std::vector<Mask> ends = {Mask::Empty(space), Mask::Full(space)};
      const auto v = oracle->Evaluate(ends);
      const bool ok = std::isfinite(v[0]) && std::isfinite(v[1]);
      record("empty-and-full-mask", ok,
             "nu(empty) = " + json(v[0]).dump() + ", nu(full) = " + json(v[1]).dump());
    });
    guarded("determinism", [&] {
      const auto first = oracle->Evaluate(probes);
      const auto second = oracle->Evaluate(probes);
      const bool ok = first == second;
      record("determinism", ok,
             ok ? "repeated batch returned identical values"
                : "repeated batch returned different values");
    });
    guarded("duplicate-masks", [&] {
      std::vector<Mask> batch = {probes[0], probes[1 % probes.size()], probes[0]};
      const auto v = oracle->Evaluate(batch);
      const bool ok = v[0] == v[2];
      record("duplicate-masks", ok,
             ok ? "duplicate masks in one batch returned equal values"
                : "duplicate masks in one batch returned " + json(v[0]).dump() +
                      " and " + json(v[2]).dump());
    });
    guarded("batch-order", [&] {
      const auto together = oracle->Evaluate(probes);
      std::size_t mismatches = 0;
      for (std::size_t k = 0; k < probes.size(); ++k) {
        if (oracle->Evaluate(probes[k]) != together[k]) ++mismatches;
      }
      record("batch-order", mismatches == 0,
             mismatches == 0 ? "batched values match one-by-one evaluation"
                             : std::to_string(mismatches) + " of " +
                                   std::to_string(probes.size()) +
                                   " batched values differ from one-by-one "
                                   "evaluation (order not preserved)");
    });
  }

  json report = {{"schema_version", kReportSchemaVersion},
                 {"kind", "oracle-check"},
                 {"endpoint", config.endpoint},
                 {"handshake", handshake},
                 {"checks", checks},
                 {"passed", all_passed}};
  std::cout << report.dump(2) << std::endl;
  if (!config.out.empty()) WriteJsonFile(config.out, report);
  return all_passed ? 0 : 1;
}

int Dispatch(RunConfig config) {
  if (config.command == "explain") return RunExplain(std::move(config));
  if (config.command == "exact") return RunExact(std::move(config));
  if (config.command == "evaluate") return RunEvaluate(std::move(config));
  throw InvalidArgumentError("command '" + config.command +
                             "' cannot be dispatched from a run config");
}

int RunReplay(const std::string& manifest_path, const std::string& out,
              bool verify) {
  const json manifest = ReadJsonFile(manifest_path);
  if (manifest.value("kind", "") != "run-manifest" ||
      manifest.value("schema_version", 0) != kManifestSchemaVersion) {
    throw IoError(manifest_path + " is not a version-1 run manifest");
  }
  RunConfig config = RunConfigFromJson(manifest.at("config"));
  for (const auto& [key, input] : manifest.at("inputs").items()) {
    const auto path = input.at("path").get<std::string>();
    if (FileSha256(path) != input.at("sha256").get<std::string>()) {
      throw IoError("input " + key + " (" + path +
                    ") changed since the recorded run");
    }
  }
  config.out = out;
  const int code = Dispatch(config);
  if (verify) {
    const json replayed = ReadJsonFile(std::filesystem::path(out) / "manifest.json");
    if (replayed.at("artifacts") != manifest.at("artifacts")) {
      throw IoError("replayed artifacts differ from the recorded hashes");
    }
  }
  return code;
}

}  // namespace pairlens::cli

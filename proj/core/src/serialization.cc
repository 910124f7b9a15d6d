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

#include "pairlens/serialization.h"

#include <fstream>
#include <string>
#include <vector>

#include "pairlens/errors.h"

namespace pairlens {
namespace {

using nlohmann::json;

BasisSpec ParseBasis(const PlayerSpace& space, const json& root) {
  const auto name = root.at("basis").get<std::string>();
  if (name == "full") return BasisSpec::Full(space);
  if (name == "cross-modal") return BasisSpec::CrossModal(space);
  if (name == "first-order") return BasisSpec::FirstOrder(space);
  if (name.rfind("clique:", 0) == 0) {
    return BasisSpec::Clique(space,
                             root.at("clique").get<std::vector<int>>());
  }
  throw IoError("unknown basis '" + name + "'");
}

}  // namespace

json ExplanationToJson(const Explanation& explanation) {
  const auto& basis = explanation.basis();
  const auto& kernel = explanation.kernel();
  const auto& coefficients = explanation.coefficients();
  json root;
  root["schema_version"] = kExplanationSchemaVersion;
  root["kind"] = "explanation";
  root["space"] = {{"n_image", explanation.space().n_image()},
                   {"n_text", explanation.space().n_text()}};
  root["p"] = kernel.type == KernelType::kWeightedBanzhaf ? json(kernel.p)
                                                          : json(nullptr);
  root["kernel"] = kernel.Name();
  root["basis"] = basis.Name();
  if (basis.kind() == BasisKind::kClique) {
    root["clique"] = basis.clique_members();
  }
  root["exact"] = explanation.exact();
  root["e0"] = coefficients.constant();
  json singles = json::array();
  for (int i = 0; i < explanation.space().size(); ++i) {
    singles.push_back(json::array({i, coefficients.single(i)}));
  }
  root["singles"] = std::move(singles);
  json pairs = json::array();
  for (const auto& term : coefficients.pairs()) {
    pairs.push_back(json::array({term.i, term.j, term.value}));
  }
  root["pairs"] = std::move(pairs);
  const auto& d = explanation.diagnostics();
  root["diagnostics"] = {{"residual_mse", d.residual_mse},
                         {"condition_estimate", d.condition_estimate},
                         {"sample_count", d.sample_count},
                         {"distinct_masks", d.distinct_masks},
                         {"rank", d.rank},
                         {"solver", d.solver}};
  if (kernel.explicit_weights) root["explicit_weights"] = true;
  if (kernel.shapley_boundary_weight > 0.0) {
    root["shapley_boundary_weight"] = kernel.shapley_boundary_weight;
  }
  return root;
}

Explanation ExplanationFromJson(const json& root) {
  try {
    if (root.value("kind", "") != "explanation") {
      throw IoError("document is not an explanation");
    }
    if (root.at("schema_version").get<int>() != kExplanationSchemaVersion) {
      throw IoError("unsupported explanation schema version " +
                    root.at("schema_version").dump());
    }
    const PlayerSpace space(root.at("space").at("n_image").get<int>(),
                            root.at("space").at("n_text").get<int>());
    BasisSpec basis = ParseBasis(space, root);
    const auto kernel_name = root.at("kernel").get<std::string>();
    Kernel kernel = kernel_name == "shapley"
                        ? Kernel::Shapley()
                        : ParseKernel(kernel_name, root.at("p").get<double>());
    kernel.explicit_weights = root.value("explicit_weights", false);
    kernel.shapley_boundary_weight = root.value("shapley_boundary_weight", 0.0);

    TwoAdditiveGame coefficients(space);
    coefficients.set_constant(root.at("e0").get<double>());
    for (const auto& entry : root.at("singles")) {
      coefficients.set_single(entry.at(0).get<int>(), entry.at(1).get<double>());
    }
    for (const auto& entry : root.at("pairs")) {
      const int i = entry.at(0).get<int>();
      const int j = entry.at(1).get<int>();
      if (i >= j) {
        throw IoError("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") must be written with i < j");
      }
      coefficients.set_pair(i, j, entry.at(2).get<double>());
    }
    FitDiagnostics diagnostics;
    if (root.contains("diagnostics")) {
      const auto& d = root.at("diagnostics");
      diagnostics.residual_mse = d.value("residual_mse", 0.0);
      diagnostics.condition_estimate = d.value("condition_estimate", 1.0);
      diagnostics.sample_count = d.value("sample_count", std::size_t{0});
      diagnostics.distinct_masks = d.value("distinct_masks", std::size_t{0});
      diagnostics.rank = d.value("rank", std::size_t{0});
      diagnostics.solver = d.value("solver", std::string());
    }
    return Explanation(std::move(basis), kernel, std::move(coefficients),
                       std::move(diagnostics), root.value("exact", false));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed explanation: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw IoError(std::string("invalid explanation: ") + e.what());
  }
}

json TabulatedGameToJson(const TabulatedGame& game) {
  return json{{"n_image", game.space().n_image()},
              {"n_text", game.space().n_text()},
              {"values", game.values()}};
}

TabulatedGame TabulatedGameFromJson(const json& root) {
  try {
    const PlayerSpace space(root.at("n_image").get<int>(),
                            root.at("n_text").get<int>());
    return TabulatedGame(space, root.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed tabulated game: ") + e.what());
  }
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const json& root) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << root.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace pairlens

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

#include "pairlens/explanation.h"

#include <string>
#include <utility>

#include "pairlens/errors.h"

namespace pairlens {

std::string_view Kernel::Name() const {
  return type == KernelType::kShapley ? "shapley" : "wbanzhaf";
}

Kernel ParseKernel(std::string_view name, double p) {
  if (name == "wbanzhaf") {
    CheckOpenUnitInterval(p);
    return Kernel::WeightedBanzhaf(p);
  }
  if (name == "shapley") return Kernel::Shapley();
  throw InvalidArgumentError("unknown kernel '" + std::string(name) +
                             "' (expected wbanzhaf or shapley)");
}

Explanation::Explanation(BasisSpec basis, Kernel kernel,
                         TwoAdditiveGame coefficients,
                         FitDiagnostics diagnostics, bool exact)
    : basis_(std::move(basis)),
      kernel_(kernel),
      coefficients_(std::move(coefficients)),
      diagnostics_(std::move(diagnostics)),
      exact_(exact) {
  CheckSameSpace(basis_.space(), coefficients_.space(), "explanation");
  if (kernel_.type == KernelType::kWeightedBanzhaf) {
    CheckOpenUnitInterval(kernel_.p);
  }
  for (const auto& term : coefficients_.pairs()) {
    if (!basis_.ContainsPair(term.i, term.j)) {
      throw InvalidArgumentError("pair (" + std::to_string(term.i) + ", " +
                                 std::to_string(term.j) +
                                 ") is not in basis " + basis_.Name());
    }
  }
}

std::vector<double> Explanation::BasisVector() const {
  std::vector<double> values;
  values.reserve(basis_.size());
  values.push_back(coefficients_.constant());
  for (double single : coefficients_.singles()) values.push_back(single);
  for (const auto& [i, j] : basis_.pairs()) {
    values.push_back(coefficients_.pair(i, j));
  }
  return values;
}

Explanation Explanation::FromBasisVector(BasisSpec basis, Kernel kernel,
                                         const std::vector<double>& values,
                                         FitDiagnostics diagnostics) {
  if (values.size() != basis.size()) {
    throw InvalidArgumentError("basis vector has " +
                               std::to_string(values.size()) +
                               " entries, basis " + basis.Name() + " has " +
                               std::to_string(basis.size()));
  }
  const int n = basis.space().size();
  TwoAdditiveGame coefficients(basis.space());
  coefficients.set_constant(values[0]);
  for (int i = 0; i < n; ++i) {
    coefficients.set_single(i, values[static_cast<std::size_t>(i) + 1]);
  }
  std::size_t index = static_cast<std::size_t>(n) + 1;
  for (const auto& [i, j] : basis.pairs()) {
    coefficients.set_pair(i, j, values[index++]);
  }
  return Explanation(std::move(basis), kernel, std::move(coefficients),
                     std::move(diagnostics));
}

Explanation Explanation::WithoutInteractions() const {
  TwoAdditiveGame first_order(space());
  first_order.set_constant(coefficients_.constant());
  for (int i = 0; i < space().size(); ++i) {
    first_order.set_single(i, coefficients_.single(i));
  }
  return Explanation(BasisSpec::FirstOrder(space()), kernel_,
                     std::move(first_order), diagnostics_, exact_);
}

Explanation Explanation::Scaled(double factor) const {
  TwoAdditiveGame scaled(space());
  scaled.set_constant(factor * coefficients_.constant());
  for (int i = 0; i < space().size(); ++i) {
    scaled.set_single(i, factor * coefficients_.single(i));
  }
  for (const auto& term : coefficients_.pairs()) {
    scaled.set_pair(term.i, term.j, factor * term.value);
  }
  return Explanation(basis_, kernel_, std::move(scaled), diagnostics_, exact_);
}

std::vector<double> Explanation::DoEvaluate(
    std::span<const Mask> masks) const {
  return coefficients_.Evaluate(masks);
}

std::vector<double> FirstOrderConversion(const Explanation& explanation) {
  if (explanation.kernel().type != KernelType::kWeightedBanzhaf) {
    throw UnsupportedError(
        "first-order conversion is defined for weighted Banzhaf explanations, "
        "not for kernel '" +
        std::string(explanation.kernel().Name()) + "'");
  }
  const double p = explanation.kernel().p;
  std::vector<double> attribution = explanation.coefficients().singles();
  for (const auto& term : explanation.coefficients().pairs()) {
    attribution[static_cast<std::size_t>(term.i)] += p * term.value;
    attribution[static_cast<std::size_t>(term.j)] += p * term.value;
  }
  return attribution;
}

}  // namespace pairlens

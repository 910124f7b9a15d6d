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

#include "pairlens/regression.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "pairlens/errors.h"
#include "pairlens/exact.h"

namespace pairlens {
namespace {

// Row-major B x B upper triangle plus right-hand side.
struct NormalEquations {
  explicit NormalEquations(std::size_t size)
      : size(size), gram(size * size, 0.0), rhs(size, 0.0) {}

  void Add(const NormalEquations& other) {
    for (std::size_t k = 0; k < gram.size(); ++k) gram[k] += other.gram[k];
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += other.rhs[k];
  }

  std::size_t size;
  std::vector<double> gram;
  std::vector<double> rhs;
};

class DesignRows {
 public:
  explicit DesignRows(const BasisSpec& basis)
      : n_(basis.space().size()),
        pair_index_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_),
                    -1) {
    int index = n_ + 1;
    for (const auto& [i, j] : basis.pairs()) {
      pair_index_[Slot(i, j)] = index++;
    }
  }

  // Active feature indices of `mask`, ascending.
  void Features(const Mask& mask, std::vector<int>* out) const {
    out->clear();
    out->push_back(0);
    const auto members = mask.Members();
    for (int player : members) out->push_back(player + 1);
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const int index = pair_index_[Slot(members[a], members[b])];
        if (index >= 0) out->push_back(index);
      }
    }
  }

 private:
  std::size_t Slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<int> pair_index_;
};

enum class RowRole { kWeighted, kEmptyConstraint, kFullConstraint };

struct RowWeight {
  RowRole role;
  double weight;
};

RowWeight WeightFor(const Mask& mask, const Kernel& kernel, std::size_t rows) {
  const int n = mask.width();
  const int s = mask.count();
  if (kernel.type == KernelType::kWeightedBanzhaf) {
    if (kernel.explicit_weights) {
      return {RowRole::kWeighted, MaskProbability(s, n, kernel.p)};
    }
    return {RowRole::kWeighted, 1.0 / static_cast<double>(rows)};
  }
  if (const auto weight = ShapleyKernelWeight(s, n)) {
    return {RowRole::kWeighted, *weight};
  }
  if (kernel.shapley_boundary_weight > 0.0) {
    return {RowRole::kWeighted, kernel.shapley_boundary_weight};
  }
  return {s == 0 ? RowRole::kEmptyConstraint : RowRole::kFullConstraint, 0.0};
}

int ResolvePartitions(const FitOptions& options, std::size_t basis_size) {
  if (options.partitions > 0) return options.partitions;
  return basis_size <= 512 ? 4 : 1;
}

NormalEquations Accumulate(std::span<const Mask> masks,
                           std::span<const double> values,
                           const std::vector<RowWeight>& weights,
                           const DesignRows& design, std::size_t basis_size,
                           const FitOptions& options) {
  const auto partitions =
      static_cast<std::size_t>(ResolvePartitions(options, basis_size));
  std::vector<NormalEquations> parts(partitions, NormalEquations(basis_size));
  const std::size_t rows = masks.size();
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    std::vector<int> features;
    for (std::size_t part = next++; part < partitions; part = next++) {
      const std::size_t begin = rows * part / partitions;
      const std::size_t end = rows * (part + 1) / partitions;
      auto& eq = parts[part];
      for (std::size_t row = begin; row < end; ++row) {
        if (weights[row].role != RowRole::kWeighted) continue;
        const double w = weights[row].weight;
        design.Features(masks[row], &features);
        const double wy = w * values[row];
        for (std::size_t a = 0; a < features.size(); ++a) {
          const auto fa = static_cast<std::size_t>(features[a]);
          eq.rhs[fa] += wy;
          double* gram_row = eq.gram.data() + fa * basis_size;
          for (std::size_t b = a; b < features.size(); ++b) {
            gram_row[features[b]] += w;
          }
        }
      }
    }
  };

  unsigned threads = options.threads > 0
                         ? static_cast<unsigned>(options.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(partitions));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();
  }

  NormalEquations total = std::move(parts[0]);
  for (std::size_t part = 1; part < partitions; ++part) total.Add(parts[part]);
  return total;
}

struct Solution {
  Eigen::VectorXd coefficients;
  double condition = 1.0;
  std::size_t rank = 0;
  std::string solver;
};

Solution SolveUnconstrained(const Eigen::MatrixXd& gram,
                            const Eigen::VectorXd& rhs,
                            const FitOptions& options) {
  const auto size = static_cast<std::size_t>(gram.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    const double rcond = llt.rcond();
    if (rcond > 0.0 && 1.0 / rcond <= options.condition_limit) {
      return {llt.solve(rhs), 1.0 / rcond, size, "cholesky"};
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double largest = std::max(lambda.maxCoeff(), 0.0);
  const double cutoff = largest * options.rank_tolerance;
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > cutoff) ++rank;
  }
  if (rank < size || largest == 0.0) {
    throw IllPosedFitError("design determines only " + std::to_string(rank) +
                               " of " + std::to_string(size) +
                               " coefficients",
                           size - rank);
  }
  // Minimum-norm solve through the eigenbasis.
  const Eigen::MatrixXd& v = eig.eigenvectors();
  Eigen::VectorXd projected = v.transpose() * rhs;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) projected(k) /= lambda(k);
  return {v * projected, largest / lambda.minCoeff(), rank, "min-norm"};
}

Solution SolveConstrained(const Eigen::MatrixXd& gram,
                          const Eigen::VectorXd& rhs, double empty_value,
                          double full_value) {
  const Eigen::Index size = gram.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(size + 2, size + 2);
  kkt.topLeftCorner(size, size) = gram;
  // value(empty) = constant; value(full) = sum of every coefficient.
  kkt(size, 0) = kkt(0, size) = 1.0;
  for (Eigen::Index k = 0; k < size; ++k) {
    kkt(size + 1, k) = kkt(k, size + 1) = 1.0;
  }
  Eigen::VectorXd augmented(size + 2);
  augmented << rhs, empty_value, full_value;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  lu.setThreshold(1e-12);
  const auto rank = static_cast<std::size_t>(lu.rank());
  const auto needed = static_cast<std::size_t>(size + 2);
  if (rank < needed) {
    throw IllPosedFitError("constrained design determines only " +
                               std::to_string(rank) + " of " +
                               std::to_string(needed) + " unknowns",
                           needed - rank);
  }
  Eigen::VectorXd solution = lu.solve(augmented);
  const double condition = 1.0 / std::max(lu.rcond(), 1e-300);
  return {solution.head(size), condition, static_cast<std::size_t>(size),
          "kkt"};
}

}  // namespace

std::optional<double> ShapleyKernelWeight(int s, int n) {
  if (s < 0 || s > n) {
    throw InvalidArgumentError("mask size " + std::to_string(s) +
                               " outside [0, " + std::to_string(n) + "]");
  }
  if (s == 0 || s == n) return std::nullopt;
  double binomial = 1.0;
  for (int t = 1; t <= s; ++t) binomial = binomial * (n - s + t) / t;
  return (n - 1) / (binomial * s * (n - s));
}

Explanation Fit(std::span<const Mask> masks, std::span<const double> values,
                const BasisSpec& basis, const Kernel& kernel,
                const FitOptions& options) {
  if (masks.size() != values.size()) {
    throw InvalidArgumentError("fit got " + std::to_string(masks.size()) +
                               " masks but " + std::to_string(values.size()) +
                               " values");
  }
  if (kernel.type == KernelType::kWeightedBanzhaf) {
    CheckOpenUnitInterval(kernel.p);
  }
  const PlayerSpace& space = basis.space();
  for (std::size_t k = 0; k < masks.size(); ++k) {
    if (masks[k].space() != space) {
      throw InvalidMaskError("mask " + std::to_string(k) + " built for " +
                             masks[k].space().ToString() + ", basis over " +
                             space.ToString());
    }
    if (!std::isfinite(values[k])) {
      throw InvalidArgumentError("value " + std::to_string(k) +
                                 " is not finite");
    }
  }
  const std::size_t basis_size = basis.size();

  std::unordered_set<Mask, MaskHash> distinct(masks.begin(), masks.end());
  if (distinct.size() < basis_size) {
    throw IllPosedFitError(
        std::to_string(distinct.size()) + " distinct masks cannot determine " +
            std::to_string(basis_size) + " coefficients of basis " +
            basis.Name(),
        basis_size - distinct.size());
  }

  std::vector<RowWeight> weights;
  weights.reserve(masks.size());
  double empty_sum = 0.0, full_sum = 0.0;
  std::size_t empty_rows = 0, full_rows = 0;
  for (std::size_t k = 0; k < masks.size(); ++k) {
    weights.push_back(WeightFor(masks[k], kernel, masks.size()));
    if (weights.back().role == RowRole::kEmptyConstraint) {
      empty_sum += values[k];
      ++empty_rows;
    } else if (weights.back().role == RowRole::kFullConstraint) {
      full_sum += values[k];
      ++full_rows;
    }
  }
  const bool constrained = kernel.type == KernelType::kShapley &&
                           kernel.shapley_boundary_weight <= 0.0;
  if (constrained && (empty_rows == 0 || full_rows == 0)) {
    throw InvalidArgumentError(
        "a Shapley-kernel fit with boundary constraints needs the empty and "
        "the full mask in the batch");
  }

  const DesignRows design(basis);
  NormalEquations eq =
      Accumulate(masks, values, weights, design, basis_size, options);

  const auto size = static_cast<Eigen::Index>(basis_size);
  Eigen::MatrixXd gram(size, size);
  Eigen::VectorXd rhs(size);
  for (Eigen::Index a = 0; a < size; ++a) {
    rhs(a) = eq.rhs[static_cast<std::size_t>(a)];
    for (Eigen::Index b = a; b < size; ++b) {
      const double g = eq.gram[static_cast<std::size_t>(a) * basis_size +
                               static_cast<std::size_t>(b)];
      gram(a, b) = g;
      gram(b, a) = g;
    }
  }

  const Solution solution =
      constrained
          ? SolveConstrained(gram, rhs,
                             empty_sum / static_cast<double>(empty_rows),
                             full_sum / static_cast<double>(full_rows))
          : SolveUnconstrained(gram, rhs, options);

  std::vector<double> coefficients(solution.coefficients.data(),
                                   solution.coefficients.data() + size);
  FitDiagnostics diagnostics;
  diagnostics.condition_estimate = solution.condition;
  diagnostics.sample_count = masks.size();
  diagnostics.distinct_masks = distinct.size();
  diagnostics.rank = solution.rank;
  diagnostics.solver = solution.solver;
  Explanation explanation =
      Explanation::FromBasisVector(basis, kernel, coefficients, diagnostics);

  double squared = 0.0;
  for (std::size_t k = 0; k < masks.size(); ++k) {
    const double residual = values[k] - explanation.Value(masks[k]);
    squared += residual * residual;
  }
  diagnostics.residual_mse = squared / static_cast<double>(masks.size());
  return Explanation(explanation.basis(), kernel, explanation.coefficients(),
                     diagnostics);
}

}  // namespace pairlens

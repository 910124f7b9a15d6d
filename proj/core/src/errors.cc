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

#include "pairlens/errors.h"

#include <cmath>
#include <string>

namespace pairlens {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "invalid-argument";
    case ErrorKind::kInvalidMask:
      return "invalid-mask";
    case ErrorKind::kSpaceTooLarge:
      return "space-too-large";
    case ErrorKind::kTransport:
      return "transport";
    case ErrorKind::kProtocol:
      return "protocol";
    case ErrorKind::kIllPosedFit:
      return "ill-posed-fit";
    case ErrorKind::kUnsupported:
      return "unsupported";
    case ErrorKind::kUndefinedMetric:
      return "undefined-metric";
    case ErrorKind::kNormalizationDegenerate:
      return "normalization-degenerate";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

SpaceTooLargeError::SpaceTooLargeError(int players, int limit)
    : Error(ErrorKind::kSpaceTooLarge,
            "enumeration over " + std::to_string(players) +
                " players exceeds the " + std::to_string(limit) +
                "-player limit"),
      players_(players),
      limit_(limit) {}

void CheckOpenUnitInterval(double p, std::string_view what) {
  if (!std::isfinite(p) || p <= 0.0 || p >= 1.0) {
    throw InvalidArgumentError(std::string(what) +
                               " must lie in the open interval (0, 1), got " +
                               std::to_string(p));
  }
}

}  // namespace pairlens

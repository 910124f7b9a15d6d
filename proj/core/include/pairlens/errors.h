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

#ifndef PAIRLENS_ERRORS_H_
#define PAIRLENS_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pairlens {

// Every error raised by the library derives from Error and carries a kind so
// that front ends can map failures to exit codes without string matching.
enum class ErrorKind {
  kInvalidArgument,
  kInvalidMask,
  kSpaceTooLarge,
  kTransport,
  kProtocol,
  kIllPosedFit,
  kUnsupported,
  kUndefinedMetric,
  kNormalizationDegenerate,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& message)
      : Error(ErrorKind::kInvalidArgument, message) {}
};

class InvalidMaskError : public Error {
 public:
  explicit InvalidMaskError(const std::string& message)
      : Error(ErrorKind::kInvalidMask, message) {}
};

// Raised when an enumeration over all 2^n masks would exceed the player limit.
class SpaceTooLargeError : public Error {
 public:
  SpaceTooLargeError(int players, int limit);

  int players() const { return players_; }
  int limit() const { return limit_; }

 private:
  int players_;
  int limit_;
};

// Transport failure talking to a remote oracle. `batch_index` is the index of
// the request batch that failed, or -1 when the failure happened outside a
// batch (connect, handshake).
class TransportError : public Error {
 public:
  TransportError(const std::string& message, long batch_index = -1)
      : Error(ErrorKind::kTransport, message), batch_index_(batch_index) {}

  long batch_index() const { return batch_index_; }

 private:
  long batch_index_;
};

// A transport failure caused by the peer not answering in time.
class TimeoutError : public TransportError {
 public:
  explicit TimeoutError(const std::string& message) : TransportError(message) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message)
      : Error(ErrorKind::kProtocol, message) {}
};

// The weighted least-squares design does not determine every coefficient.
class IllPosedFitError : public Error {
 public:
  IllPosedFitError(const std::string& message, std::size_t deficiency)
      : Error(ErrorKind::kIllPosedFit, message), deficiency_(deficiency) {}

  std::size_t deficiency() const { return deficiency_; }

 private:
  std::size_t deficiency_;
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& message)
      : Error(ErrorKind::kUnsupported, message) {}
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& message)
      : Error(ErrorKind::kUndefinedMetric, message) {}
};

class NormalizationDegenerateError : public Error {
 public:
  explicit NormalizationDegenerateError(const std::string& message)
      : Error(ErrorKind::kNormalizationDegenerate, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorKind::kIo, message) {}
};

// Validates p strictly inside (0, 1).
void CheckOpenUnitInterval(double p, std::string_view what = "p");

}  // namespace pairlens

#endif  // PAIRLENS_ERRORS_H_

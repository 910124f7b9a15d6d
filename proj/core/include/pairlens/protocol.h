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

// Oracle wire protocol: line-delimited JSON over a byte stream.
//
//   server -> client, once:  {"n_image": 49, "n_text": 10, "max_batch": 256}
//   client -> server:        {"id": 7, "masks": ["0110...", ...]}
//   server -> client:        {"id": 7, "values": [1.25, ...]}
//
// A mask travels as a '0'/'1' string of length n_image + n_text whose
// character k is player k (images first). A server that cannot answer a
// request may reply {"id": 7, "error": "..."} instead of values. Extra
// handshake fields are allowed and preserved.

#ifndef PAIRLENS_PROTOCOL_H_
#define PAIRLENS_PROTOCOL_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairlens/mask.h"
#include "pairlens/player_space.h"

namespace pairlens {

struct Handshake {
  PlayerSpace space;
  int max_batch = 1;
  // Every field of the handshake line, including the three above.
  nlohmann::json fields;
};

std::string EncodeHandshake(const PlayerSpace& space, int max_batch,
                            const nlohmann::json& extra = nlohmann::json::object());
// Throws ProtocolError on malformed lines or non-positive sizes.
Handshake DecodeHandshake(const std::string& line);

std::string EncodeRequest(std::uint64_t id, std::span<const Mask> masks);

struct Request {
  std::uint64_t id = 0;
  std::vector<Mask> masks;
};
// Throws ProtocolError when the line is malformed; InvalidMaskError when a
// bitstring does not fit `space`.
Request DecodeRequest(const std::string& line, const PlayerSpace& space);

std::string EncodeResponse(std::uint64_t id, std::span<const double> values);
std::string EncodeErrorResponse(std::uint64_t id, const std::string& message);

// Throws ProtocolError on malformed lines, id mismatches, error replies and
// value counts other than `expected_count` (naming both counts).
std::vector<double> DecodeResponse(const std::string& line,
                                   std::uint64_t expected_id,
                                   std::size_t expected_count);

// A bidirectional line stream. Implementations throw TransportError on I/O
// failure, end of stream and timeouts.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void WriteLine(const std::string& line) = 0;
  virtual std::string ReadLine(std::chrono::milliseconds timeout) = 0;
};

// Channel over a pair of file descriptors, which it closes on destruction
// when `owns` is set.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, bool owns);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void WriteLine(const std::string& line) override;
  std::string ReadLine(std::chrono::milliseconds timeout) override;

 protected:
  void CloseFds();

 private:
  int read_fd_;
  int write_fd_;
  bool owns_;
  std::string buffer_;
};

// Endpoint strings:
//   exec:<shell command>   spawn the command, talk over its stdin/stdout
//   tcp://host:port        connect to a listening server
struct Endpoint {
  enum class Kind { kExec, kTcp };
  Kind kind;
  std::string command;  // kExec
  std::string host;     // kTcp
  int port = 0;         // kTcp

  // Throws InvalidArgumentError on unrecognized forms.
  static Endpoint Parse(const std::string& text);
  std::string ToString() const;
};

// Opens a fresh channel; throws TransportError when the endpoint cannot be
// reached within `timeout`.
std::unique_ptr<LineChannel> OpenChannel(const Endpoint& endpoint,
                                         std::chrono::milliseconds timeout);

}  // namespace pairlens

#endif  // PAIRLENS_PROTOCOL_H_

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

#ifndef PAIRLENS_REMOTE_ORACLE_H_
#define PAIRLENS_REMOTE_ORACLE_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>

#include <nlohmann/json.hpp>

#include "pairlens/game.h"
#include "pairlens/protocol.h"

namespace pairlens {

struct RemoteOptions {
  std::chrono::milliseconds timeout{30000};
  // Extra attempts per chunk after a transport failure; each one reconnects.
  int max_retries = 2;
  // When set, a handshake advertising another space is a protocol error.
  std::optional<PlayerSpace> expected_space;
};

// A game served by an external process. Masks are sent in chunks of at most
// the advertised max_batch, in order, one request at a time; the facade is
// thread-safe and serializes transport internally. Transport failures
// (including timeouts) are retried on a fresh connection since requests are
// idempotent; protocol errors are not.
class RemoteOracle final : public GameOracle {
 public:
  // Connects and reads the handshake. Throws TransportError or ProtocolError.
  static std::unique_ptr<RemoteOracle> Connect(const Endpoint& endpoint,
                                               const RemoteOptions& options = {});

  const PlayerSpace& space() const override { return handshake_.space; }
  int max_batch() const { return handshake_.max_batch; }
  const nlohmann::json& handshake_fields() const { return handshake_.fields; }
  const Endpoint& endpoint() const { return endpoint_; }

  std::uint64_t requests_sent() const;
  std::uint64_t reconnects() const;

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override;

 private:
  RemoteOracle(Endpoint endpoint, RemoteOptions options,
               std::unique_ptr<LineChannel> channel, Handshake handshake);

  void Reconnect() const;

  Endpoint endpoint_;
  RemoteOptions options_;
  Handshake handshake_;
  mutable std::mutex mutex_;
  mutable std::unique_ptr<LineChannel> channel_;
  mutable std::uint64_t next_id_ = 1;
  mutable std::uint64_t requests_sent_ = 0;
  mutable std::uint64_t reconnects_ = 0;
};

}  // namespace pairlens

#endif  // PAIRLENS_REMOTE_ORACLE_H_

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

#include "pairlens/remote_oracle.h"

#include <algorithm>

#include "pairlens/errors.h"

namespace pairlens {
namespace {

Handshake ReadHandshake(LineChannel& channel, const RemoteOptions& options) {
  Handshake handshake = DecodeHandshake(channel.ReadLine(options.timeout));
  if (options.expected_space && *options.expected_space != handshake.space) {
    throw ProtocolError("oracle advertises " + handshake.space.ToString() +
                        " but " + options.expected_space->ToString() +
                        " was expected");
  }
  return handshake;
}

}  // namespace

std::unique_ptr<RemoteOracle> RemoteOracle::Connect(const Endpoint& endpoint,
                                                    const RemoteOptions& options) {
  auto channel = OpenChannel(endpoint, options.timeout);
  Handshake handshake = ReadHandshake(*channel, options);
  return std::unique_ptr<RemoteOracle>(
      new RemoteOracle(endpoint, options, std::move(channel), std::move(handshake)));
}

RemoteOracle::RemoteOracle(Endpoint endpoint, RemoteOptions options,
                           std::unique_ptr<LineChannel> channel,
                           Handshake handshake)
    : endpoint_(std::move(endpoint)),
      options_(std::move(options)),
      handshake_(std::move(handshake)),
      channel_(std::move(channel)) {}

std::uint64_t RemoteOracle::requests_sent() const {
  std::lock_guard lock(mutex_);
  return requests_sent_;
}

std::uint64_t RemoteOracle::reconnects() const {
  std::lock_guard lock(mutex_);
  return reconnects_;
}

void RemoteOracle::Reconnect() const {
  channel_.reset();
  ++reconnects_;
  auto channel = OpenChannel(endpoint_, options_.timeout);
  const Handshake fresh = DecodeHandshake(channel->ReadLine(options_.timeout));
  if (fresh.space != handshake_.space) {
    throw ProtocolError("oracle changed its player space across reconnects: " +
                        handshake_.space.ToString() + " became " +
                        fresh.space.ToString());
  }
  channel_ = std::move(channel);
}

std::vector<double> RemoteOracle::DoEvaluate(std::span<const Mask> masks) const {
  std::lock_guard lock(mutex_);
  std::vector<double> out;
  out.reserve(masks.size());
  const auto chunk = static_cast<std::size_t>(handshake_.max_batch);
  long batch_index = 0;
  for (std::size_t begin = 0; begin < masks.size(); begin += chunk, ++batch_index) {
    const auto part = masks.subspan(begin, std::min(chunk, masks.size() - begin));
    for (int attempt = 0;; ++attempt) {
      try {
        if (!channel_) Reconnect();
        const std::uint64_t id = next_id_++;
        channel_->WriteLine(EncodeRequest(id, part));
        ++requests_sent_;
        const auto values =
            DecodeResponse(channel_->ReadLine(options_.timeout), id, part.size());
        out.insert(out.end(), values.begin(), values.end());
        break;
      } catch (const TransportError& e) {
        // The stream may hold a late reply to the failed request; never
        // reuse it.
        channel_.reset();
        if (attempt >= options_.max_retries) {
          throw TransportError("batch " + std::to_string(batch_index) +
                                   " failed after " + std::to_string(attempt + 1) +
                                   " attempt(s): " + e.what(),
                               batch_index);
        }
      }
    }
  }
  return out;
}

}  // namespace pairlens

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

// Serves any GameOracle over the wire protocol. Used by the `serve` command
// to expose synthetic and tabulated games, and by tests, which can inject
// misbehaviour to exercise client error paths.

#ifndef PAIRLENS_ORACLE_SERVER_H_
#define PAIRLENS_ORACLE_SERVER_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "pairlens/game.h"

namespace pairlens {

struct ServerFaults {
  bool shuffle = false;        // permute values within each response
  double noise = 0.0;          // add N(0, noise^2), freshly seeded per value
  bool wrong_count = false;    // drop the last value of every response
  bool malformed = false;      // answer with a line that is not JSON
  bool hang = false;           // read requests but never answer
  int die_after = -1;          // close the stream after this many replies
  // Advertise this space instead of the game's (0 keeps the real one).
  int advertise_n_image = 0;
  int advertise_n_text = 0;

  // Parses a comma-separated list such as "shuffle,noise=0.1,die-after=2".
  static ServerFaults Parse(const std::string& text);
};

struct ServeOptions {
  int max_batch = 256;
  ServerFaults faults;
  nlohmann::json extra_handshake = nlohmann::json::object();
};

// Handshakes on `out_fd`, then answers requests from `in_fd` until end of
// stream, a fault-induced stop, or `stop` becoming true. Masks of the wrong
// width get an error reply rather than ending the session.
void ServeStream(const GameOracle& game, int in_fd, int out_fd,
                 const ServeOptions& options,
                 const std::atomic<bool>* stop = nullptr);

// Listens on 127.0.0.1:`port` (0 picks a free port), reports the bound port
// through `on_listening`, and serves connections one after another. Returns
// after `max_connections` sessions (0 for no limit) or once `stop` is true.
void ServeTcp(const GameOracle& game, int port, const ServeOptions& options,
              const std::function<void(int)>& on_listening,
              int max_connections = 0, const std::atomic<bool>* stop = nullptr);

}  // namespace pairlens

#endif  // PAIRLENS_ORACLE_SERVER_H_

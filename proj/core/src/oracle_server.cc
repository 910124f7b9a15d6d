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

#include "pairlens/oracle_server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <random>
#include <sstream>
#include <thread>

#include "pairlens/errors.h"
#include "pairlens/protocol.h"

namespace pairlens {
namespace {

constexpr std::chrono::milliseconds kPollSlice{200};

bool Stopped(const std::atomic<bool>* stop) {
  return stop != nullptr && stop->load();
}

}  // namespace

ServerFaults ServerFaults::Parse(const std::string& text) {
  ServerFaults faults;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const std::string key = item.substr(0, eq);
    const std::string value = eq == std::string::npos ? "" : item.substr(eq + 1);
    try {
      if (key == "shuffle") {
        faults.shuffle = true;
      } else if (key == "noise") {
        faults.noise = value.empty() ? 0.1 : std::stod(value);
      } else if (key == "wrong-count") {
        faults.wrong_count = true;
      } else if (key == "malformed") {
        faults.malformed = true;
      } else if (key == "hang") {
        faults.hang = true;
      } else if (key == "die-after") {
        faults.die_after = std::stoi(value);
      } else if (key == "advertise") {
        // advertise=IxT
        const auto x = value.find('x');
        faults.advertise_n_image = std::stoi(value.substr(0, x));
        faults.advertise_n_text = std::stoi(value.substr(x + 1));
      } else {
        throw InvalidArgumentError("unknown server fault '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw InvalidArgumentError("bad value in server fault '" + item + "'");
    }
  }
  return faults;
}

void ServeStream(const GameOracle& game, int in_fd, int out_fd,
                 const ServeOptions& options, const std::atomic<bool>* stop) {
  const ServerFaults& faults = options.faults;
  ::signal(SIGPIPE, SIG_IGN);
  FdChannel channel(in_fd, out_fd, false);
  PlayerSpace advertised = game.space();
  if (faults.advertise_n_image > 0 && faults.advertise_n_text > 0) {
    advertised = PlayerSpace(faults.advertise_n_image, faults.advertise_n_text);
  }
  std::random_device entropy;
  std::mt19937_64 fault_rng(entropy());
  int replies = 0;
  try {
    channel.WriteLine(
        EncodeHandshake(advertised, options.max_batch, options.extra_handshake));
    for (;;) {
      if (faults.die_after >= 0 && replies >= faults.die_after) return;
      std::string line;
      try {
        line = channel.ReadLine(kPollSlice);
      } catch (const TimeoutError&) {
        if (Stopped(stop)) return;
        continue;
      } catch (const TransportError&) {
        return;
      }
      if (Stopped(stop)) return;
      if (line.empty()) continue;
      if (faults.hang) continue;

      std::uint64_t id = 0;
      std::string reply;
      try {
        Request request = DecodeRequest(line, game.space());
        id = request.id;
        if (request.masks.size() > static_cast<std::size_t>(options.max_batch)) {
          throw InvalidArgumentError("batch of " +
                                     std::to_string(request.masks.size()) +
                                     " exceeds max_batch " +
                                     std::to_string(options.max_batch));
        }
        auto values = game.Evaluate(request.masks);
        if (faults.noise > 0.0) {
          std::normal_distribution<double> gauss(0.0, faults.noise);
          for (auto& v : values) v += gauss(fault_rng);
        }
        if (faults.shuffle && values.size() > 1) {
          std::rotate(values.begin(), values.begin() + 1, values.end());
        }
        if (faults.wrong_count && !values.empty()) values.pop_back();
        reply = faults.malformed ? std::string("{\"id\": ") + std::to_string(id) +
                                       ", \"values\": [oops"
                                 : EncodeResponse(id, values);
      } catch (const Error& e) {
        reply = EncodeErrorResponse(id, e.what());
      }
      channel.WriteLine(reply);
      ++replies;
    }
  } catch (const TransportError&) {
    // Client went away.
  }
}

void ServeTcp(const GameOracle& game, int port, const ServeOptions& options,
              const std::function<void(int)>& on_listening, int max_connections,
              const std::atomic<bool>* stop) {
  const int listener = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listener < 0) throw TransportError("cannot create listening socket");
  const int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listener, 8) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(listener);
    throw TransportError("cannot listen on port " + std::to_string(port) + ": " +
                         reason);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));

  int served = 0;
  while (!Stopped(stop) && (max_connections == 0 || served < max_connections)) {
    pollfd pfd{listener, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(kPollSlice.count()));
    if (rc <= 0) continue;
    const int client = ::accept4(listener, nullptr, nullptr, SOCK_CLOEXEC);
    if (client < 0) continue;
    ServeStream(game, client, client, options, stop);
    ::shutdown(client, SHUT_RDWR);
    ::close(client);
    ++served;
  }
  ::close(listener);
}

}  // namespace pairlens

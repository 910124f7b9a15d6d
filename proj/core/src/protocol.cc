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

#include "pairlens/protocol.h"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

#include "pairlens/errors.h"

namespace pairlens {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

json ParseLine(const std::string& line, const char* what) {
  try {
    json parsed = json::parse(line);
    if (!parsed.is_object()) {
      throw ProtocolError(std::string(what) + " is not a JSON object: " + line);
    }
    return parsed;
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::string ErrnoText(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

void IgnoreSigpipeOnce() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

// Channel to a spawned child; closing the pipes lets a well-behaved server
// exit, and a stubborn one is killed.
class ProcessChannel final : public FdChannel {
 public:
  ProcessChannel(int read_fd, int write_fd, pid_t pid)
      : FdChannel(read_fd, write_fd, true), pid_(pid) {}
  ~ProcessChannel() override {
    CloseFds();
    const auto deadline = Clock::now() + std::chrono::seconds(2);
    int status = 0;
    while (::waitpid(pid_, &status, WNOHANG) == 0) {
      if (Clock::now() > deadline) {
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }

 private:
  pid_t pid_;
};

std::unique_ptr<LineChannel> SpawnProcess(const std::string& command) {
  IgnoreSigpipeOnce();
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    throw TransportError(ErrnoText("cannot create pipe"));
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError(ErrnoText("cannot create pipe"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
      ::close(fd);
    }
    throw TransportError(ErrnoText("cannot fork oracle process"));
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::make_unique<ProcessChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> ConnectTcp(const std::string& host, int port,
                                        std::chrono::milliseconds timeout) {
  IgnoreSigpipeOnce();
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* results = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &results);
      rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                            ai->ai_protocol);
    if (fd < 0) continue;
    const int flags = ::fcntl(fd, F_GETFL);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      pollfd pfd{fd, POLLOUT, 0};
      rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
      if (rc == 1) {
        int error = 0;
        socklen_t len = sizeof(error);
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &error, &len);
        errno = error;
        rc = error == 0 ? 0 : -1;
      } else {
        errno = rc == 0 ? ETIMEDOUT : errno;
        rc = -1;
      }
    }
    if (rc == 0) {
      ::fcntl(fd, F_SETFL, flags);
      ::freeaddrinfo(results);
      return std::make_unique<FdChannel>(fd, fd, true);
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(results);
  throw TransportError("cannot connect to " + host + ":" + service + ": " +
                       last_error);
}

}  // namespace

std::string EncodeHandshake(const PlayerSpace& space, int max_batch,
                            const json& extra) {
  json line = extra.is_object() ? extra : json::object();
  line["n_image"] = space.n_image();
  line["n_text"] = space.n_text();
  line["max_batch"] = max_batch;
  return line.dump();
}

Handshake DecodeHandshake(const std::string& line) {
  json fields = ParseLine(line, "handshake");
  try {
    const int n_image = fields.at("n_image").get<int>();
    const int n_text = fields.at("n_text").get<int>();
    const int max_batch = fields.at("max_batch").get<int>();
    if (n_image < 1 || n_text < 1 || max_batch < 1) {
      throw ProtocolError("handshake sizes must be positive: " + line);
    }
    return Handshake{PlayerSpace(n_image, n_text), max_batch, std::move(fields)};
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed handshake: ") + e.what());
  }
}

std::string EncodeRequest(std::uint64_t id, std::span<const Mask> masks) {
  json bits = json::array();
  for (const auto& mask : masks) bits.push_back(mask.ToBitstring());
  return json{{"id", id}, {"masks", std::move(bits)}}.dump();
}

Request DecodeRequest(const std::string& line, const PlayerSpace& space) {
  const json parsed = ParseLine(line, "request");
  Request request;
  try {
    request.id = parsed.at("id").get<std::uint64_t>();
    for (const auto& bits : parsed.at("masks")) {
      request.masks.push_back(Mask::FromBitstring(space, bits.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed request: ") + e.what());
  }
  return request;
}

std::string EncodeResponse(std::uint64_t id, std::span<const double> values) {
  return json{{"id", id},
              {"values", std::vector<double>(values.begin(), values.end())}}
      .dump();
}

std::string EncodeErrorResponse(std::uint64_t id, const std::string& message) {
  return json{{"id", id}, {"error", message}}.dump();
}

std::vector<double> DecodeResponse(const std::string& line,
                                   std::uint64_t expected_id,
                                   std::size_t expected_count) {
  const json parsed = ParseLine(line, "response");
  try {
    const auto id = parsed.at("id").get<std::uint64_t>();
    if (id != expected_id) {
      throw ProtocolError("response id " + std::to_string(id) +
                          " does not match request id " +
                          std::to_string(expected_id));
    }
    if (parsed.contains("error")) {
      throw ProtocolError("oracle rejected request " + std::to_string(id) +
                          ": " + parsed.at("error").dump());
    }
    const auto& values = parsed.at("values");
    if (!values.is_array()) throw ProtocolError("response values is not an array");
    if (values.size() != expected_count) {
      throw ProtocolError("response carries " + std::to_string(values.size()) +
                          " values, expected " + std::to_string(expected_count));
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) {
      if (!v.is_number()) {
        throw ProtocolError("response value " + v.dump() + " is not a number");
      }
      out.push_back(v.get<double>());
      if (!std::isfinite(out.back())) {
        throw ProtocolError("response value is not finite");
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed response: ") + e.what());
  }
}

FdChannel::FdChannel(int read_fd, int write_fd, bool owns)
    : read_fd_(read_fd), write_fd_(write_fd), owns_(owns) {}

FdChannel::~FdChannel() { CloseFds(); }

void FdChannel::CloseFds() {
  if (!owns_) return;
  owns_ = false;
  if (read_fd_ >= 0) ::close(read_fd_);
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  read_fd_ = write_fd_ = -1;
}

void FdChannel::WriteLine(const std::string& line) {
  std::string data = line;
  data.push_back('\n');
  std::size_t offset = 0;
  while (offset < data.size()) {
    const ssize_t n = ::write(write_fd_, data.data() + offset, data.size() - offset);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(ErrnoText("write to oracle failed"));
    }
    offset += static_cast<std::size_t>(n);
  }
}

std::string FdChannel::ReadLine(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    if (const auto pos = buffer_.find('\n'); pos != std::string::npos) {
      std::string line = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) {
      throw TimeoutError("timed out after " + std::to_string(timeout.count()) +
                           " ms waiting for the oracle");
    }
    pollfd pfd{read_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw TransportError(ErrnoText("poll on oracle stream failed"));
    }
    if (rc == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw TransportError(ErrnoText("read from oracle failed"));
    }
    if (n == 0) throw TransportError("oracle closed the stream");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Endpoint Endpoint::Parse(const std::string& text) {
  if (text.rfind("exec:", 0) == 0 && text.size() > 5) {
    return Endpoint{Kind::kExec, text.substr(5), "", 0};
  }
  if (text.rfind("tcp://", 0) == 0) {
    const std::string rest = text.substr(6);
    const auto colon = rest.rfind(':');
    if (colon != std::string::npos && colon > 0 && colon + 1 < rest.size()) {
      try {
        std::size_t used = 0;
        const int port = std::stoi(rest.substr(colon + 1), &used);
        if (used == rest.size() - colon - 1 && port > 0 && port < 65536) {
          return Endpoint{Kind::kTcp, "", rest.substr(0, colon), port};
        }
      } catch (const std::exception&) {
      }
    }
  }
  throw InvalidArgumentError("unrecognized oracle endpoint '" + text +
                             "' (expected exec:<command> or tcp://host:port)");
}

std::string Endpoint::ToString() const {
  return kind == Kind::kExec ? "exec:" + command
                             : "tcp://" + host + ":" + std::to_string(port);
}

std::unique_ptr<LineChannel> OpenChannel(const Endpoint& endpoint,
                                         std::chrono::milliseconds timeout) {
  if (endpoint.kind == Endpoint::Kind::kExec) return SpawnProcess(endpoint.command);
  return ConnectTcp(endpoint.host, endpoint.port, timeout);
}

}  // namespace pairlens

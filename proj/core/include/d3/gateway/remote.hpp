// Copyright 2026 The D3 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "d3/gateway/backends.hpp"

namespace d3::gateway {

using Json = nlohmann::ordered_json;

// Line-delimited request/response transport: one JSON object per line each
// way. Implementations serialize concurrent calls.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual std::string exchange(const std::string& request_line) = 0;
};

// Persistent TCP connection to host:port, opened on first use.
class TcpChannel final : public LineChannel {
 public:
  TcpChannel(std::string host, std::uint16_t port) : host_(std::move(host)), port_(port) {}
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  std::string exchange(const std::string& request_line) override;

 private:
  void connect_locked();

  std::string host_;
  std::uint16_t port_;
  int fd_ = -1;
  std::string buffer_;
  std::mutex mu_;
};

// Sends {"op", "inputs", "seed"} and returns the reply's "outputs" object.
// A reply carrying "error" or lacking "outputs" raises BackendError.
Json remote_call(LineChannel& channel, const std::string& op, Json inputs, std::uint64_t seed = 0);

// A suite whose every member forwards to `channel`. The remote side keeps
// its own decision thresholds.
BackendSuite make_remote_suite(std::shared_ptr<LineChannel> channel, double ppl_normalizer = 50.0);

// Server side: answers one decoded request against `suite`. Never throws;
// failures become {"error": message}.
Json handle_request(const Json& request, const BackendSuite& suite);

// Serves `suite` over TCP on 127.0.0.1:port (0 picks a free port) until
// stop() is called. Each connection runs on its own thread.
class BackendServer {
 public:
  BackendServer(BackendSuite suite, std::uint16_t port = 0);
  ~BackendServer();
  BackendServer(const BackendServer&) = delete;
  BackendServer& operator=(const BackendServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  // Blocks accepting connections until stop().
  void run();
  void stop();

 private:
  BackendSuite suite_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
};

}  // namespace d3::gateway

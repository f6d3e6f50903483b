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

#include "d3/gateway/remote.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>
#include <vector>

#include "d3/common/error.hpp"

namespace d3::gateway {

namespace {

bool write_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

// Reads up to and excluding the next '\n'. Returns false on EOF before a
// full line. `timeout_ms` < 0 blocks; otherwise `keep_going` is polled
// between waits.
template <typename KeepGoing>
bool read_line(int fd, std::string& buffer, std::string& line, int timeout_ms, KeepGoing keep_going) {
  for (;;) {
    if (auto nl = buffer.find('\n'); nl != std::string::npos) {
      line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      return true;
    }
    if (timeout_ms >= 0) {
      pollfd pfd{fd, POLLIN, 0};
      int ready = ::poll(&pfd, 1, timeout_ms);
      if (ready == 0) {
        if (!keep_going()) return false;
        continue;
      }
      if (ready < 0 && errno == EINTR) continue;
      if (ready < 0) return false;
    }
    char chunk[4096];
    ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

Json tokens_json(const Tokens& t) { return Json(t); }

Tokens tokens_from(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) throw BackendError(std::string("reply lacks token array '") + key + "'");
  return it->get<Tokens>();
}

std::vector<Tokens> token_lists_from(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) throw BackendError(std::string("reply lacks list '") + key + "'");
  return it->get<std::vector<Tokens>>();
}

double number_from(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw BackendError(std::string("reply lacks number '") + key + "'");
  return it->get<double>();
}

class RemoteEntailment final : public EntailmentScorer {
 public:
  RemoteEntailment(std::shared_ptr<LineChannel> ch, std::string role) : ch_(std::move(ch)), role_(std::move(role)) {}
  std::string name() const override { return "remote"; }
  EntailmentJudgment entail(const Sentence& premise, const Sentence& hypothesis) const override {
    Json out = remote_call(*ch_, role_ + ".entail", {{"premise", premise.text()}, {"hypothesis", hypothesis.text()}});
    EntailmentJudgment j;
    j.entail_prob = number_from(out, "entail_prob");
    if (!out.contains("label") || !out["label"].is_string()) throw BackendError("reply lacks 'label'");
    j.label = parse_entailment_label(out["label"].get<std::string>());
    return j;
  }

 private:
  std::shared_ptr<LineChannel> ch_;
  std::string role_;
};

class RemoteFluency final : public FluencyScorer {
 public:
  RemoteFluency(std::shared_ptr<LineChannel> ch, double normalizer) : FluencyScorer(normalizer), ch_(std::move(ch)) {}
  std::string name() const override { return "remote"; }
  double perplexity(const Tokens& text) const override {
    return number_from(remote_call(*ch_, "fluency.perplexity", {{"tokens", tokens_json(text)}}), "perplexity");
  }

 private:
  std::shared_ptr<LineChannel> ch_;
};

class RemoteSimilarity final : public SimilarityScorer {
 public:
  explicit RemoteSimilarity(std::shared_ptr<LineChannel> ch) : ch_(std::move(ch)) {}
  std::string name() const override { return "remote"; }
  double similarity(const Tokens& a, const Tokens& b) const override {
    return number_from(remote_call(*ch_, "similarity.score", {{"a", tokens_json(a)}, {"b", tokens_json(b)}}),
                       "similarity");
  }

 private:
  std::shared_ptr<LineChannel> ch_;
};

class RemoteInfiller final : public Infiller {
 public:
  explicit RemoteInfiller(std::shared_ptr<LineChannel> ch) : ch_(std::move(ch)) {}
  std::string name() const override { return "remote"; }
  std::vector<Tokens> propose(const Tokens& tokens, const std::vector<std::size_t>& mask_positions, std::size_t n,
                              std::uint64_t seed) const override {
    Json out = remote_call(*ch_, "infiller.propose",
                           {{"tokens", tokens_json(tokens)}, {"mask_positions", mask_positions}, {"n", n}}, seed);
    return token_lists_from(out, "candidates");
  }

 private:
  std::shared_ptr<LineChannel> ch_;
};

class RemoteContinuer final : public Continuer {
 public:
  explicit RemoteContinuer(std::shared_ptr<LineChannel> ch) : ch_(std::move(ch)) {}
  std::string name() const override { return "remote"; }
  std::vector<Tokens> propose(const Tokens& prefix, std::size_t max_new, std::size_t n,
                              std::uint64_t seed) const override {
    Json out = remote_call(*ch_, "continuer.propose",
                           {{"prefix", tokens_json(prefix)}, {"max_new", max_new}, {"n", n}}, seed);
    return token_lists_from(out, "continuations");
  }

 private:
  std::shared_ptr<LineChannel> ch_;
};

class RemoteTranslator final : public Translator {
 public:
  explicit RemoteTranslator(std::shared_ptr<LineChannel> ch) : ch_(std::move(ch)) {}
  std::string name() const override { return "remote"; }
  std::vector<Tokens> forward(const Tokens& text, std::size_t beam, std::uint64_t seed) const override {
    return call("translator.forward", text, beam, seed);
  }
  std::vector<Tokens> backward(const Tokens& text, std::size_t beam, std::uint64_t seed) const override {
    return call("translator.backward", text, beam, seed);
  }

 private:
  std::vector<Tokens> call(const char* op, const Tokens& text, std::size_t beam, std::uint64_t seed) const {
    return token_lists_from(remote_call(*ch_, op, {{"tokens", tokens_json(text)}, {"beam", beam}}, seed),
                            "hypotheses");
  }
  std::shared_ptr<LineChannel> ch_;
};

class RemoteResponder final : public Responder {
 public:
  explicit RemoteResponder(std::shared_ptr<LineChannel> ch) : ch_(std::move(ch)) {}
  std::string name() const override { return "remote"; }
  Tokens respond(const Sentence& persona, const Sentence& history, std::uint64_t seed) const override {
    return tokens_from(
        remote_call(*ch_, "responder.respond", {{"persona", persona.text()}, {"history", history.text()}}, seed),
        "response");
  }

 private:
  std::shared_ptr<LineChannel> ch_;
};

class RemotePosTagger final : public PosTagger {
 public:
  explicit RemotePosTagger(std::shared_ptr<LineChannel> ch) : ch_(std::move(ch)) {}
  std::string name() const override { return "remote"; }
  PosTag tag(std::string_view token) const override { return tag_all({std::string(token)}).at(0); }
  std::vector<PosTag> tag_all(const corpus::Tokens& tokens) const override {
    Json out = remote_call(*ch_, "pos_tagger.tag", {{"tokens", tokens_json(tokens)}});
    auto names = tokens_from(out, "tags");
    if (names.size() != tokens.size()) throw BackendError("pos_tagger.tag: tag count mismatch");
    std::vector<PosTag> tags;
    for (const auto& n : names) {
      auto t = parse_pos_tag(n);
      if (!t) throw BackendError("pos_tagger.tag: unknown tag '" + n + "'");
      tags.push_back(*t);
    }
    return tags;
  }

 private:
  std::shared_ptr<LineChannel> ch_;
};

}  // namespace

TcpChannel::~TcpChannel() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpChannel::connect_locked() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(port_);
  if (int rc = ::getaddrinfo(host_.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw BackendError("resolve " + host_ + ": " + gai_strerror(rc));
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw BackendError("cannot connect to " + host_ + ":" + port);
}

std::string TcpChannel::exchange(const std::string& request_line) {
  std::lock_guard lock(mu_);
  if (fd_ < 0) connect_locked();
  std::string line;
  if (!write_all(fd_, request_line + "\n") || !read_line(fd_, buffer_, line, -1, [] { return true; })) {
    ::close(fd_);
    fd_ = -1;
    buffer_.clear();
    throw BackendError("connection to " + host_ + ":" + std::to_string(port_) + " lost");
  }
  return line;
}

Json remote_call(LineChannel& channel, const std::string& op, Json inputs, std::uint64_t seed) {
  Json request{{"op", op}, {"inputs", std::move(inputs)}, {"seed", seed}};
  const std::string reply_line = channel.exchange(request.dump());
  Json reply;
  try {
    reply = Json::parse(reply_line);
  } catch (const Json::parse_error& e) {
    throw BackendError(op + ": malformed reply: " + e.what());
  }
  if (auto err = reply.find("error"); err != reply.end())
    throw BackendError(op + ": " + (err->is_string() ? err->get<std::string>() : err->dump()));
  auto out = reply.find("outputs");
  if (out == reply.end() || !out->is_object()) throw BackendError(op + ": reply lacks 'outputs'");
  return *out;
}

BackendSuite make_remote_suite(std::shared_ptr<LineChannel> channel, double ppl_normalizer) {
  BackendSuite s;
  s.persona_nli = std::make_shared<RemoteEntailment>(channel, "persona_nli");
  s.coherence_nli = std::make_shared<RemoteEntailment>(channel, "coherence_nli");
  s.fluency = std::make_shared<RemoteFluency>(channel, ppl_normalizer);
  s.similarity = std::make_shared<RemoteSimilarity>(channel);
  s.infiller = std::make_shared<RemoteInfiller>(channel);
  s.continuer = std::make_shared<RemoteContinuer>(channel);
  s.translator = std::make_shared<RemoteTranslator>(channel);
  s.responder = std::make_shared<RemoteResponder>(channel);
  s.pos_tagger = std::make_shared<RemotePosTagger>(channel);
  return s;
}

namespace {

Json dispatch(const std::string& op, const Json& in, std::uint64_t seed, const BackendSuite& suite) {
  auto need = [](const auto& member, const std::string& role) -> decltype(auto) {
    if (!member) throw BackendError("backend '" + role + "' not available");
    return *member;
  };
  auto entail = [&](const EntailmentScorer& nli) {
    auto j = nli.entail(Sentence(in.at("premise").get<std::string>()),
                        Sentence(in.at("hypothesis").get<std::string>()));
    return Json{{"entail_prob", j.entail_prob}, {"label", to_string(j.label)}};
  };
  if (op == "persona_nli.entail") return entail(need(suite.persona_nli, "persona_nli"));
  if (op == "coherence_nli.entail") return entail(need(suite.coherence_nli, "coherence_nli"));
  if (op == "fluency.perplexity")
    return Json{{"perplexity", need(suite.fluency, "fluency").perplexity(in.at("tokens").get<Tokens>())}};
  if (op == "similarity.score")
    return Json{{"similarity", need(suite.similarity, "similarity")
                                   .similarity(in.at("a").get<Tokens>(), in.at("b").get<Tokens>())}};
  if (op == "infiller.propose")
    return Json{{"candidates", need(suite.infiller, "infiller")
                                   .propose(in.at("tokens").get<Tokens>(),
                                            in.at("mask_positions").get<std::vector<std::size_t>>(),
                                            in.at("n").get<std::size_t>(), seed)}};
  if (op == "continuer.propose")
    return Json{{"continuations", need(suite.continuer, "continuer")
                                      .propose(in.at("prefix").get<Tokens>(), in.at("max_new").get<std::size_t>(),
                                               in.at("n").get<std::size_t>(), seed)}};
  if (op == "translator.forward")
    return Json{{"hypotheses", need(suite.translator, "translator")
                                   .forward(in.at("tokens").get<Tokens>(), in.at("beam").get<std::size_t>(), seed)}};
  if (op == "translator.backward")
    return Json{{"hypotheses", need(suite.translator, "translator")
                                   .backward(in.at("tokens").get<Tokens>(), in.at("beam").get<std::size_t>(), seed)}};
  if (op == "responder.respond")
    return Json{{"response", need(suite.responder, "responder")
                                 .respond(Sentence(in.at("persona").get<std::string>()),
                                          Sentence(in.at("history").get<std::string>()), seed)}};
  if (op == "pos_tagger.tag") {
    Json tags = Json::array();
    for (auto t : need(suite.pos_tagger, "pos_tagger").tag_all(in.at("tokens").get<Tokens>()))
      tags.push_back(to_string(t));
    return Json{{"tags", tags}};
  }
  throw BackendError("unknown op '" + op + "'");
}

}  // namespace

Json handle_request(const Json& request, const BackendSuite& suite) {
  try {
    if (!request.is_object() || !request.contains("op") || !request["op"].is_string())
      return Json{{"error", "request lacks string field 'op'"}};
    const Json inputs = request.value("inputs", Json::object());
    const std::uint64_t seed = request.value("seed", std::uint64_t{0});
    return Json{{"outputs", dispatch(request["op"].get<std::string>(), inputs, seed, suite)}};
  } catch (const std::exception& e) {
    return Json{{"error", e.what()}};
  }
}

BackendServer::BackendServer(BackendSuite suite, std::uint16_t port) : suite_(std::move(suite)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw BackendError("socket: " + std::string(std::strerror(errno)));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw BackendError("bind/listen on port " + std::to_string(port) + ": " + std::strerror(errno));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

BackendServer::~BackendServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void BackendServer::stop() { stopping_.store(true); }

void BackendServer::run() {
  std::vector<std::thread> connections;
  auto keep_going = [this] { return !stopping_.load(); };
  while (keep_going()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 50);
    if (ready <= 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    connections.emplace_back([this, fd, keep_going] {
      std::string buffer, line;
      while (read_line(fd, buffer, line, 50, keep_going)) {
        Json reply;
        try {
          reply = handle_request(Json::parse(line), suite_);
        } catch (const Json::parse_error& e) {
          reply = Json{{"error", std::string("malformed request: ") + e.what()}};
        }
        if (!write_all(fd, reply.dump() + "\n")) break;
      }
      ::close(fd);
    });
  }
  for (auto& t : connections) t.join();
}

}  // namespace d3::gateway

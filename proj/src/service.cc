// Copyright 2026 The Nextword Authors.
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

#include "nextword/service.h"

#include <sys/socket.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "nextword/error.h"
#include "nextword/utf8.h"

namespace nextword {
namespace {

using Json = nlohmann::ordered_json;

HttpReply ErrorReply(int status, std::string_view message) {
  Json j;
  j["error"] = message;
  return {status, j.dump()};
}

Json SuggestionArray(const std::vector<Suggestion>& suggestions) {
  Json list = Json::array();
  for (const Suggestion& s : suggestions) {
    list.push_back(
        {{"word", s.word}, {"score", s.score}, {"matched_order", s.matched_order}});
  }
  return list;
}

// Validates the request body; returns an error message or empty on success.
std::string ParseRequest(std::string_view body, PredictionRequest& request) {
  Json j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return "body must be a JSON object";
  auto text = j.find("text");
  if (text == j.end() || !text->is_string()) return "'text' must be a string";
  request.context_text = text->get<std::string>();
  if (request.context_text.size() > kMaxRequestTextBytes) {
    return "'text' exceeds " + std::to_string(kMaxRequestTextBytes) + " bytes";
  }
  if (!utf8::IsValid(request.context_text)) return "'text' is not valid UTF-8";
  if (auto k = j.find("k"); k != j.end() && !k->is_null()) {
    if (!k->is_number_integer()) return "'k' must be an integer";
    const auto value = k->get<int64_t>();
    if (value < 1 || value > static_cast<int64_t>(kMaxRequestK)) {
      return "'k' must lie in 1.." + std::to_string(kMaxRequestK);
    }
    request.k = static_cast<std::size_t>(value);
  }
  if (auto prefix = j.find("prefix"); prefix != j.end() && !prefix->is_null()) {
    if (!prefix->is_string()) return "'prefix' must be a string";
    request.prefix = prefix->get<std::string>();
    if (request.prefix->size() > kMaxRequestTextBytes ||
        !utf8::IsValid(*request.prefix)) {
      return "'prefix' is oversized or not valid UTF-8";
    }
  }
  return {};
}

void AddCors(httplib::Response& res) {
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  res.set_header("Access-Control-Allow-Headers", "Content-Type");
  res.set_header("Access-Control-Max-Age", "600");
}

void Send(const HttpReply& reply, httplib::Response& res) {
  res.status = reply.status;
  res.set_content(reply.body, "application/json; charset=utf-8");
}

}  // namespace

PredictionService::PredictionService(std::shared_ptr<const Engine> engine)
    : engine_(std::move(engine)) {}

void PredictionService::SetEngine(std::shared_ptr<const Engine> engine) {
  std::atomic_store(&engine_, std::move(engine));
}

std::shared_ptr<const Engine> PredictionService::engine() const {
  return std::atomic_load(&engine_);
}

std::string SuggestionsJson(const std::vector<Suggestion>& suggestions,
                            const std::string& model_id) {
  Json j;
  j["suggestions"] = SuggestionArray(suggestions);
  j["model_id"] = model_id;
  return j.dump();
}

HttpReply PredictionService::Predict(std::string_view body) const {
  const auto start = std::chrono::steady_clock::now();
  const std::shared_ptr<const Engine> engine = this->engine();
  if (!engine) return ErrorReply(503, "no model loaded");

  PredictionRequest request;
  if (std::string why = ParseRequest(body, request); !why.empty()) {
    return ErrorReply(400, why);
  }
  std::vector<Suggestion> suggestions;
  try {
    suggestions = nextword::Predict(*engine, request);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyModel) return ErrorReply(503, e.what());
    return ErrorReply(400, e.what());
  }
  Json j;
  j["suggestions"] = SuggestionArray(suggestions);
  j["model_id"] = engine->model_id;
  j["elapsed_micros"] = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return {200, j.dump()};
}

HttpReply PredictionService::Health() const {
  const std::shared_ptr<const Engine> engine = this->engine();
  if (!engine) {
    return {503, Json{{"status", "unavailable"}}.dump()};
  }
  Json j;
  j["status"] = "ok";
  j["model_id"] = engine->model_id;
  j["orders"] = engine->model.max_order();
  j["vocab_size"] = engine->model.vocab_size();
  j["script_mode"] = ScriptModeName(engine->normalization.script_mode);
  return {200, j.dump()};
}

// --- HTTP transport ---------------------------------------------------------

struct HttpServer::Impl {
  const PredictionService& service;
  ServerOptions options;
  httplib::Server server;

  Impl(const PredictionService& s, ServerOptions o)
      : service(s), options(std::move(o)) {}
};

HttpServer::HttpServer(const PredictionService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  httplib::Server& server = impl_->server;
  const std::size_t threads = std::max<std::size_t>(1, impl_->options.threads);
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server.set_payload_max_length(64 * 1024);
  server.set_keep_alive_max_count(1000);
  server.set_tcp_nodelay(true);
  // SO_REUSEADDR only: the library default also sets SO_REUSEPORT, which
  // would let a second server silently share the port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  const PredictionService* svc = &impl_->service;
  server.Post("/api/predict",
              [svc](const httplib::Request& req, httplib::Response& res) {
                AddCors(res);
                Send(svc->Predict(req.body), res);
              });
  server.Get("/api/health",
             [svc](const httplib::Request&, httplib::Response& res) {
               AddCors(res);
               Send(svc->Health(), res);
             });
  server.Options(R"(/api/.*)",
                 [](const httplib::Request&, httplib::Response& res) {
                   AddCors(res);
                   res.status = 204;
                 });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    AddCors(res);
    if (res.body.empty()) {
      Send(ErrorReply(res.status, httplib::status_message(res.status)), res);
    }
  });
  server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        AddCors(res);
        Send(ErrorReply(500, "internal error"), res);
      });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind() {
  httplib::Server& server = impl_->server;
  const ServerOptions& o = impl_->options;
  int port = o.port;
  if (port == 0) {
    port = server.bind_to_any_port(o.bind);
  } else if (!server.bind_to_port(o.bind, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::kIoFailure,
                "cannot bind " + o.bind + ":" + std::to_string(o.port));
  }
  return port;
}

void HttpServer::Serve() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

// --- load test ---------------------------------------------------------------

LoadTestResult RunLoadTest(const LoadTestOptions& options) {
  const std::size_t clients = std::max<std::size_t>(1, options.clients);
  std::vector<std::vector<double>> latencies(clients);
  std::vector<std::set<std::string>> bodies(clients);
  std::atomic<std::size_t> failures{0};
  std::atomic<std::size_t> next{0};

  std::vector<std::thread> workers;
  workers.reserve(clients);
  for (std::size_t c = 0; c < clients; ++c) {
    workers.emplace_back([&, c] {
      httplib::Client client(options.host, options.port);
      client.set_keep_alive(true);
      client.set_tcp_nodelay(true);
      client.set_read_timeout(10, 0);
      while (next.fetch_add(1) < options.requests) {
        const auto start = std::chrono::steady_clock::now();
        httplib::Result res =
            client.Post("/api/predict", options.body, "application/json");
        const auto stop = std::chrono::steady_clock::now();
        latencies[c].push_back(
            std::chrono::duration<double, std::milli>(stop - start).count());
        if (!res || res->status != 200) {
          ++failures;
          continue;
        }
        Json j = Json::parse(res->body, nullptr, false);
        if (j.is_discarded()) {
          ++failures;
          continue;
        }
        j.erase("elapsed_micros");
        bodies[c].insert(j.dump());
      }
    });
  }
  for (std::thread& t : workers) t.join();

  LoadTestResult result;
  std::vector<double> all;
  std::set<std::string> distinct;
  for (std::size_t c = 0; c < clients; ++c) {
    all.insert(all.end(), latencies[c].begin(), latencies[c].end());
    distinct.insert(bodies[c].begin(), bodies[c].end());
  }
  result.requests = all.size();
  result.failures = failures.load();
  result.distinct_bodies = distinct.size();
  if (!all.empty()) {
    std::sort(all.begin(), all.end());
    double sum = 0.0;
    for (double v : all) sum += v;
    result.mean_ms = sum / static_cast<double>(all.size());
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(all.size())));
    result.p95_ms = all[rank - 1];
    result.max_ms = all.back();
  }
  return result;
}

}  // namespace nextword

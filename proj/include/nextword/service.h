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

#ifndef NEXTWORD_SERVICE_H_
#define NEXTWORD_SERVICE_H_

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nextword/predictor.h"

namespace nextword {

inline constexpr std::size_t kMaxRequestTextBytes = 4096;
inline constexpr std::size_t kMaxRequestK = 100;

struct HttpReply {
  int status = 200;
  std::string body;  // application/json
};

// Transport-independent request handlers over an immutable engine. The
// engine can be replaced at any time; each request works on the snapshot it
// picked up, so readers never lock.
class PredictionService {
 public:
  PredictionService() = default;
  explicit PredictionService(std::shared_ptr<const Engine> engine);

  void SetEngine(std::shared_ptr<const Engine> engine);
  std::shared_ptr<const Engine> engine() const;

  // Body: {"text": string, "k"?: int, "prefix"?: string}.
  // 200 with {suggestions, model_id, elapsed_micros}; 400 on a malformed
  // body or oversized text; 503 when no model is loaded.
  HttpReply Predict(std::string_view body) const;
  // 200 with {status, model_id, orders, vocab_size, script_mode}; 503 when
  // no model is loaded.
  HttpReply Health() const;

 private:
  std::shared_ptr<const Engine> engine_;
};

// Serializes a suggestion list exactly as the predict endpoint does, minus
// the timing field.
std::string SuggestionsJson(const std::vector<Suggestion>& suggestions,
                            const std::string& model_id);

struct ServerOptions {
  std::string bind = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t threads = 64;
};

// POST /api/predict, GET /api/health and CORS preflight over HTTP/1.1.
class HttpServer {
 public:
  HttpServer(const PredictionService& service, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket; returns the bound port. Throws kIoFailure.
  int Bind();
  // Serves until Stop(); call after Bind().
  void Serve();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LoadTestOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t clients = 32;
  std::size_t requests = 1000;  // total across clients
  std::string body = R"({"text":""})";
};

struct LoadTestResult {
  std::size_t requests = 0;
  std::size_t failures = 0;        // transport errors or non-200 replies
  std::size_t distinct_bodies = 0; // after removing elapsed_micros
  double mean_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
};

// Fires `requests` POST /api/predict calls from `clients` concurrent
// connections and summarizes latency and payload agreement.
LoadTestResult RunLoadTest(const LoadTestOptions& options);

}  // namespace nextword

#endif  // NEXTWORD_SERVICE_H_

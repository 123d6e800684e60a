/* Copyright 2026 The OpenTopic Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// HTTP classification service.
//
//   POST /classify  fan out one request to several scorers
//   GET  /models    configured scorers and whether they are ready
//   GET  /healthz   liveness
//
// The wire format is described in docs/openapi.yaml.

#ifndef OPENTOPIC_SERVICE_H_
#define OPENTOPIC_SERVICE_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "opentopic/scoring.h"

namespace httplib {
class Server;
}

namespace opentopic {

struct BackendConfig {
  std::string name;
  std::string type;  // esa | embed | remote | mock
  std::string description;
  std::string path;      // esa index or embedding table
  std::string endpoint;  // remote
  std::uint64_t seed = 0;
  std::chrono::milliseconds timeout{10000};
  std::size_t max_in_flight = 8;
};

struct ServiceConfig {
  std::vector<BackendConfig> backends;
  std::string cors_origin = "*";
  std::chrono::milliseconds health_interval{5000};
};

// Relative file paths inside the config resolve against its directory.
ServiceConfig load_service_config(const std::string& path);

std::shared_ptr<Scorer> make_scorer(const BackendConfig& config);

struct Backend {
  std::string name;
  std::string description;
  std::shared_ptr<Scorer> scorer;
};

inline constexpr std::size_t kMaxLabels = 64;
inline constexpr std::size_t kMaxLabelChars = 128;

class ClassifyService {
 public:
  struct Reply {
    int status = 200;
    nlohmann::ordered_json body;
  };

  explicit ClassifyService(std::vector<Backend> backends);

  // Validates the request and scores it with every selected backend
  // concurrently. A failing backend becomes an error entry; the others are
  // unaffected.
  Reply classify(const std::string& request_body) const;
  nlohmann::ordered_json models() const;

  // Probes every remote backend once.
  void probe_remotes() const;

  const std::vector<Backend>& backends() const { return backends_; }

 private:
  std::vector<Backend> backends_;
};

class Server {
 public:
  Server(std::shared_ptr<const ClassifyService> service, ServiceConfig config);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void run();
  // Serves on a background thread.
  void start();
  void stop();

 private:
  void health_loop();

  std::shared_ptr<const ClassifyService> service_;
  ServiceConfig config_;
  std::unique_ptr<httplib::Server> http_;
  std::thread listener_;
  std::thread health_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
};

}  // namespace opentopic

#endif  // OPENTOPIC_SERVICE_H_

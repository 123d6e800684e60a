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

#include "opentopic/service.h"

#include <filesystem>
#include <fstream>
#include <future>
#include <set>

#include "httplib.h"
#include "opentopic/classifier.h"
#include "opentopic/errors.h"

namespace opentopic {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

ClassifyService::Reply bad_request(const std::string& what) {
  return {400, ojson{{"error", what}}};
}

struct ParsedRequest {
  std::string text;
  std::vector<std::string> labels;
  std::vector<std::size_t> models;
  DecisionMode mode = DecisionMode::kSingle;
  double threshold = 0.5;
  bool fallback_top1 = false;
};

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).string();
}

}  // namespace

ServiceConfig load_service_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path();
  ServiceConfig config;
  try {
    config.cors_origin = doc.value("cors_origin", config.cors_origin);
    config.health_interval =
        std::chrono::milliseconds(doc.value("health_interval_ms", 5000));
    std::set<std::string> names;
    for (const json& b : doc.at("backends")) {
      BackendConfig bc;
      bc.name = b.at("name").get<std::string>();
      bc.type = b.at("type").get<std::string>();
      bc.description = b.value("description", "");
      bc.path = resolve(base, b.value("path", ""));
      bc.endpoint = b.value("endpoint", "");
      bc.seed = b.value("seed", std::uint64_t{0});
      bc.timeout = std::chrono::milliseconds(b.value("timeout_ms", 10000));
      bc.max_in_flight = b.value("max_in_flight", std::size_t{8});
      if (bc.name.empty()) throw ValidationError(path + ": backend with empty name");
      if (!names.insert(bc.name).second) {
        throw ValidationError(path + ": duplicate backend name '" + bc.name + "'");
      }
      config.backends.push_back(std::move(bc));
    }
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return config;
}

std::shared_ptr<Scorer> make_scorer(const BackendConfig& config) {
  if (config.type == "mock") return std::make_shared<MockScorer>(config.seed);
  if (config.type == "esa") {
    return std::make_shared<EsaScorer>(
        std::make_shared<const EsaIndex>(EsaIndex::load(config.path)));
  }
  if (config.type == "embed") {
    return std::make_shared<EmbeddingScorer>(
        std::make_shared<const EmbeddingTable>(EmbeddingTable::load(config.path)));
  }
  if (config.type == "remote") {
    return std::make_shared<RemoteScorer>(
        config.endpoint, RemoteOptions{config.timeout, config.max_in_flight});
  }
  throw ValidationError("unknown backend type '" + config.type + "' for " + config.name);
}

ClassifyService::ClassifyService(std::vector<Backend> backends)
    : backends_(std::move(backends)) {}

ClassifyService::Reply ClassifyService::classify(const std::string& request_body) const {
  if (backends_.empty()) return {503, ojson{{"error", "no backends configured"}}};

  json req;
  try {
    req = json::parse(request_body);
  } catch (const json::parse_error&) {
    return bad_request("request body is not valid JSON");
  }
  if (!req.is_object()) return bad_request("request body must be a JSON object");

  ParsedRequest p;
  if (!req.contains("text") || !req["text"].is_string()) {
    return bad_request("'text' must be a string");
  }
  p.text = req["text"].get<std::string>();

  if (!req.contains("labels") || !req["labels"].is_array()) {
    return bad_request("'labels' must be an array of strings");
  }
  const json& labels = req["labels"];
  if (labels.empty() || labels.size() > kMaxLabels) {
    return bad_request("'labels' must hold 1 to 64 entries");
  }
  std::set<std::string, std::less<>> seen;
  for (const json& l : labels) {
    if (!l.is_string()) return bad_request("'labels' must be an array of strings");
    std::string label = l.get<std::string>();
    const std::string_view trimmed = trim(label);
    if (trimmed.empty()) return bad_request("empty label");
    if (utf8_length(trimmed) > kMaxLabelChars) {
      return bad_request("label longer than 128 characters");
    }
    if (!seen.emplace(trimmed).second) {
      return bad_request("duplicate label '" + std::string(trimmed) + "'");
    }
    p.labels.push_back(std::move(label));
  }

  if (req.contains("models")) {
    if (!req["models"].is_array() || req["models"].empty()) {
      return bad_request("'models' must be a non-empty array of names");
    }
    std::set<std::size_t> picked;
    for (const json& m : req["models"]) {
      if (!m.is_string()) return bad_request("'models' must be an array of strings");
      const std::string name = m.get<std::string>();
      std::size_t i = 0;
      while (i < backends_.size() && backends_[i].name != name) ++i;
      if (i == backends_.size()) return bad_request("unknown model '" + name + "'");
      if (!picked.insert(i).second) return bad_request("duplicate model '" + name + "'");
      p.models.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < backends_.size(); ++i) p.models.push_back(i);
  }

  try {
    if (req.contains("mode")) {
      if (!req["mode"].is_string()) return bad_request("'mode' must be a string");
      p.mode = parse_decision_mode(req["mode"].get<std::string>());
    }
    if (req.contains("threshold")) {
      if (!req["threshold"].is_number()) return bad_request("'threshold' must be a number");
      p.threshold = req["threshold"].get<double>();
      if (!(p.threshold > 0.0 && p.threshold < 1.0)) {
        return bad_request("'threshold' must lie in (0, 1)");
      }
    }
    if (req.contains("fallback_top1")) {
      if (!req["fallback_top1"].is_boolean()) {
        return bad_request("'fallback_top1' must be a boolean");
      }
      p.fallback_top1 = req["fallback_top1"].get<bool>();
    }
  } catch (const ValidationError& e) {
    return bad_request(e.what());
  }

  std::vector<std::future<ojson>> pending;
  pending.reserve(p.models.size());
  for (std::size_t i : p.models) {
    pending.push_back(std::async(std::launch::async, [this, i, &p] {
      const Backend& b = backends_[i];
      ojson entry;
      entry["model"] = b.name;
      const auto start = std::chrono::steady_clock::now();
      try {
        const LabelScores scores = b.scorer->score(p.text, p.labels);
        const Decision d = p.mode == DecisionMode::kSingle
                               ? decide_single(scores)
                               : decide_multi(scores, p.threshold, p.fallback_top1);
        entry["ok"] = true;
        ojson score_list = ojson::array();
        for (const auto& [label, s] : scores.entries()) {
          score_list.push_back(ojson{{"label", label}, {"score", s}});
        }
        entry["scores"] = std::move(score_list);
        entry["decision"] = ojson{{"mode", to_string(d.mode)}, {"chosen", d.chosen}, {"tie", d.tie}};
      } catch (const std::exception& e) {
        entry["ok"] = false;
        entry["error"] = e.what();
      }
      entry["latency_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
      return entry;
    }));
  }

  ojson results = ojson::array();
  for (auto& f : pending) results.push_back(f.get());
  ojson body;
  body["mode"] = to_string(p.mode);
  body["labels"] = p.labels;
  body["results"] = std::move(results);
  return {200, std::move(body)};
}

ojson ClassifyService::models() const {
  ojson out = ojson::array();
  for (const Backend& b : backends_) {
    out.push_back(ojson{{"name", b.name},
                        {"kind", b.scorer->kind()},
                        {"description", b.description},
                        {"ready", b.scorer->ready()}});
  }
  return out;
}

void ClassifyService::probe_remotes() const {
  for (const Backend& b : backends_) {
    if (auto* remote = dynamic_cast<const RemoteScorer*>(b.scorer.get())) remote->probe();
  }
}

Server::Server(std::shared_ptr<const ClassifyService> service, ServiceConfig config)
    : service_(std::move(service)),
      config_(std::move(config)),
      http_(std::make_unique<httplib::Server>()) {
  const std::string origin = config_.cors_origin;
  http_->set_default_headers({{"Access-Control-Allow-Origin", origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  http_->Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  http_->Post("/classify", [this](const httplib::Request& req, httplib::Response& res) {
    auto reply = service_->classify(req.body);
    res.status = reply.status;
    res.set_content(reply.body.dump(-1, ' ', false, json::error_handler_t::replace),
                    "application/json");
  });
  http_->Get("/models", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(service_->models().dump(), "application/json");
  });
  http_->Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(
        ojson{{"status", "ok"}, {"models", service_->backends().size()}}.dump(),
        "application/json");
  });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return http_->bind_to_any_port(host);
  return http_->bind_to_port(host, port) ? port : -1;
}

void Server::run() {
  service_->probe_remotes();
  health_ = std::thread([this] { health_loop(); });
  http_->listen_after_bind();
}

void Server::start() {
  listener_ = std::thread([this] { run(); });
  http_->wait_until_ready();
}

void Server::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  http_->stop();
  if (listener_.joinable()) listener_.join();
  if (health_.joinable()) health_.join();
}

void Server::health_loop() {
  std::unique_lock lock(mu_);
  while (!cv_.wait_for(lock, config_.health_interval, [this] { return stopping_; })) {
    lock.unlock();
    service_->probe_remotes();
    lock.lock();
  }
}

}  // namespace opentopic

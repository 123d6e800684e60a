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

#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "opentopic/errors.h"
#include "opentopic/scoring.h"

namespace opentopic {
namespace {

using json = nlohmann::json;

// Splits "http://host:port/prefix" into "http://host:port" and "/prefix".
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw ValidationError("remote endpoint must look like http://host:port, got '" +
                          endpoint + "'");
  }
  if (endpoint.compare(0, scheme, "http") != 0) {
    throw ValidationError("only http:// endpoints are supported: " + endpoint);
  }
  const auto slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) return {endpoint, ""};
  std::string prefix = endpoint.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {endpoint.substr(0, slash), prefix};
}

}  // namespace

RemoteScorer::RemoteScorer(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
  std::tie(host_, path_) = split_endpoint(endpoint_);
}

RemoteScorer::~RemoteScorer() = default;

std::unique_ptr<httplib::Client> RemoteScorer::acquire() const {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return !idle_.empty() || outstanding_ < options_.max_in_flight; });
  if (!idle_.empty()) {
    auto client = std::move(idle_.back());
    idle_.pop_back();
    return client;
  }
  ++outstanding_;
  lock.unlock();
  auto client = std::make_unique<httplib::Client>(host_);
  const auto secs = options_.timeout.count() / 1000;
  const auto usecs = (options_.timeout.count() % 1000) * 1000;
  client->set_connection_timeout(secs, usecs);
  client->set_read_timeout(secs, usecs);
  client->set_write_timeout(secs, usecs);
  client->set_keep_alive(true);
  return client;
}

// A null client means the connection was dropped after an error.
void RemoteScorer::release(std::unique_ptr<httplib::Client> client) const {
  {
    std::lock_guard lock(mu_);
    if (client) {
      idle_.push_back(std::move(client));
    } else {
      --outstanding_;
    }
  }
  cv_.notify_one();
}

LabelScores RemoteScorer::score(std::string_view text,
                                std::span<const std::string> labels) const {
  if (labels.empty()) return {};
  json request = {{"premise", std::string(text)},
                  {"hypotheses", std::vector<std::string>(labels.begin(), labels.end())}};
  const std::string body = request.dump(-1, ' ', false, json::error_handler_t::replace);

  auto client = acquire();
  auto result = client->Post(path_ + "/entail", body, "application/json");
  if (!result) {
    client.reset();
    release(nullptr);
    throw ScorerUnavailable(endpoint_ + ": " + httplib::to_string(result.error()));
  }
  release(std::move(client));

  if (result->status != 200) {
    throw ScorerUnavailable(endpoint_ + ": HTTP " + std::to_string(result->status));
  }
  json response;
  try {
    response = json::parse(result->body);
  } catch (const json::parse_error&) {
    throw ScorerUnavailable(endpoint_ + ": malformed response (not JSON)");
  }
  if (!response.is_object() || !response.contains("scores") ||
      !response["scores"].is_array()) {
    throw ScorerUnavailable(endpoint_ + ": malformed response (no scores array)");
  }
  const json& scores = response["scores"];
  if (scores.size() != labels.size()) {
    throw ScorerUnavailable(endpoint_ + ": malformed response (" +
                            std::to_string(scores.size()) + " scores for " +
                            std::to_string(labels.size()) + " labels)");
  }
  std::vector<LabelScores::Entry> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!scores[i].is_number()) {
      throw ScorerUnavailable(endpoint_ + ": malformed response (non-numeric score)");
    }
    const double s = scores[i].get<double>();
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw ScorerUnavailable(endpoint_ + ": score out of range for '" + labels[i] +
                              "': " + scores[i].dump());
    }
    out.emplace_back(labels[i], s);
  }
  return LabelScores(std::move(out));
}

bool RemoteScorer::probe() const {
  bool ok = false;
  auto client = acquire();
  auto result = client->Post(path_ + "/entail", R"({"premise":"","hypotheses":[]})",
                             "application/json");
  if (result && result->status == 200) {
    try {
      json response = json::parse(result->body);
      ok = response.is_object() && response.contains("scores") &&
           response["scores"].is_array() && response["scores"].empty();
    } catch (const json::parse_error&) {
      ok = false;
    }
    release(std::move(client));
  } else {
    client.reset();
    release(nullptr);
  }
  ready_.store(ok);
  return ok;
}

}  // namespace opentopic

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

#include <chrono>
#include <thread>

#include "doctest.h"
#include "opentopic/errors.h"
#include "opentopic/scoring.h"
#include "support/entail_stub.h"

using namespace opentopic;
using opentopic::testing::EntailStub;
using opentopic::testing::first_wins;

namespace {

RemoteOptions fast() {
  RemoteOptions o;
  o.timeout = std::chrono::milliseconds(2000);
  return o;
}

}  // namespace

TEST_CASE("scores pass through in caller label order") {
  EntailStub stub(first_wins);
  RemoteScorer scorer(stub.endpoint(), fast());
  const std::vector<std::string> labels{"Sports", "Politics & Government"};
  const LabelScores s = scorer.score("A late goal settled the derby.", labels);
  REQUIRE(s.size() == 2);
  CHECK(s[0].first == "Sports");
  CHECK(s[0].second == 0.9);
  CHECK(s[1].second == 0.1);
  // Hypotheses are the labels, unmodified.
  CHECK(stub.requests().back() == labels);
  CHECK(scorer.kind() == "remote");
}

TEST_CASE("out-of-range scores are rejected") {
  for (double bad : {1.7, -0.01}) {
    EntailStub stub([bad](const std::string&, const std::vector<std::string>& h) {
      auto j = nlohmann::json::array();
      for (std::size_t i = 0; i < h.size(); ++i) j.push_back(i == 0 ? bad : 0.5);
      return j;
    });
    RemoteScorer scorer(stub.endpoint(), fast());
    const std::vector<std::string> labels{"a", "b"};
    CHECK_THROWS_WITH_AS(scorer.score("t", labels), doctest::Contains("out of range"),
                         ScorerUnavailable);
  }
}

TEST_CASE("a response missing a label is rejected") {
  EntailStub stub([](const std::string&, const std::vector<std::string>& h) {
    auto j = nlohmann::json::array();
    for (std::size_t i = 0; i + 1 < h.size(); ++i) j.push_back(0.5);
    return j;
  });
  RemoteScorer scorer(stub.endpoint(), fast());
  const std::vector<std::string> labels{"a", "b", "c"};
  CHECK_THROWS_AS(scorer.score("t", labels), ScorerUnavailable);
}

TEST_CASE("non-numeric scores are rejected") {
  EntailStub stub([](const std::string&, const std::vector<std::string>& h) {
    auto j = nlohmann::json::array();
    for (std::size_t i = 0; i < h.size(); ++i) j.push_back("high");
    return j;
  });
  RemoteScorer scorer(stub.endpoint(), fast());
  const std::vector<std::string> labels{"a"};
  CHECK_THROWS_AS(scorer.score("t", labels), ScorerUnavailable);
}

TEST_CASE("server down raises ScorerUnavailable and probe reports not ready") {
  EntailStub stub(first_wins);
  const std::string endpoint = stub.endpoint();
  RemoteScorer scorer(endpoint, fast());
  CHECK(scorer.probe());
  CHECK(scorer.ready());
  stub.stop();
  const std::vector<std::string> labels{"a"};
  CHECK_THROWS_AS(scorer.score("t", labels), ScorerUnavailable);
  CHECK_FALSE(scorer.probe());
  CHECK_FALSE(scorer.ready());
}

TEST_CASE("empty label set makes no request") {
  EntailStub stub(first_wins);
  RemoteScorer scorer(stub.endpoint(), fast());
  CHECK(scorer.score("t", {}).empty());
  CHECK(stub.calls() == 0);
}

TEST_CASE("endpoint validation") {
  CHECK_THROWS_AS(RemoteScorer("localhost:8000"), ValidationError);
  CHECK_THROWS_AS(RemoteScorer("https://example.org"), ValidationError);
  CHECK_NOTHROW(RemoteScorer("http://127.0.0.1:1/prefix/"));
}

TEST_CASE("path prefix is honored") {
  httplib::Server server;
  server.Post("/v1/entail", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"scores": [0.25]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  RemoteScorer scorer("http://127.0.0.1:" + std::to_string(port) + "/v1/", fast());
  const std::vector<std::string> labels{"x"};
  CHECK(scorer.score("t", labels).at("x") == 0.25);
  server.stop();
  t.join();
}

TEST_CASE("concurrent callers share the bounded pool") {
  EntailStub stub(first_wins);
  RemoteOptions o = fast();
  o.max_in_flight = 2;
  RemoteScorer scorer(stub.endpoint(), o);
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      const std::vector<std::string> labels{"a", "b"};
      for (int k = 0; k < 5; ++k) ok += scorer.score("t", labels).at("a") == 0.9;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok == 40);
  CHECK(stub.calls() == 40);
}

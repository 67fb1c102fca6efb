#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include <citeval/engine.hpp>
#include <citeval/errors.hpp>
#include <citeval/remote.hpp>

using namespace citeval;
using nlohmann::json;

namespace {

/// In-process stand-in for the inference sidecar. A pair is entailment when
/// premise equals hypothesis or contains it, neutral otherwise; sentences
/// split at full-width commas.
class FakeSidecar {
 public:
  std::atomic<int> fail_next{0};
  std::atomic<bool> bad_label{false};
  std::atomic<bool> drop_one{false};
  std::atomic<bool> bad_score{false};
  std::atomic<bool> garbage{false};
  std::atomic<int> nli_requests{0};
  std::atomic<bool> reject{false};

  FakeSidecar() {
    server_.Post("/nli", [this](const httplib::Request& req, httplib::Response& res) {
      ++nli_requests;
      if (fail_next > 0) {
        --fail_next;
        res.status = 503;
        return;
      }
      if (reject) {
        res.status = 400;
        return;
      }
      if (garbage) {
        res.set_content("<html>", "text/html");
        return;
      }
      auto body = json::parse(req.body);
      json verdicts = json::array();
      for (const auto& p : body["pairs"]) {
        std::string premise = p["premise"], hypothesis = p["hypothesis"];
        bool ent = premise.find(hypothesis) != std::string::npos;
        verdicts.push_back({{"label", bad_label ? "maybe" : ent ? "entailment" : "neutral"},
                            {"score", bad_score ? 1.5 : ent ? 0.97 : 0.6}});
      }
      if (drop_one && !verdicts.empty()) verdicts.erase(verdicts.end() - 1);
      res.set_content(json{{"verdicts", verdicts}}.dump(), "application/json");
    });
    server_.Post("/claimsplit", [](const httplib::Request& req, httplib::Response& res) {
      auto body = json::parse(req.body);
      json claims = json::array();
      for (const auto& s : body["sentences"]) {
        std::string text = s;
        std::vector<std::string> parts;
        const std::string comma = "，";
        std::size_t start = 0, pos;
        while ((pos = text.find(comma, start)) != std::string::npos) {
          parts.push_back(text.substr(start, pos - start));
          start = pos + comma.size();
        }
        parts.push_back(text.substr(start));
        claims.push_back(parts);
      }
      res.set_content(json{{"claims", claims}}.dump(), "application/json");
    });
    server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok","models":{"nli":"fake","claimsplit":"fake"}})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeSidecar() {
    server_.stop();
    thread_.join();
  }

  RemoteConfig config() const {
    RemoteConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_);
    c.backoff = std::chrono::milliseconds(1);
    c.timeout = std::chrono::seconds(5);
    return c;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST_CASE("remote verdicts are aligned with the request") {
  FakeSidecar sidecar;
  RemoteClient client(sidecar.config());
  std::vector<NliPair> pairs = {{"北京是首都", "北京"}, {"北京是首都", "上海"}};
  auto v = client.classify_batch(pairs);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == Verdict{Label::entailment, 0.97});
  CHECK(v[1] == Verdict{Label::neutral, 0.6});
  CHECK(client.attempts() == 1);
}

TEST_CASE("large batches go out as sub-batches") {
  FakeSidecar sidecar;
  auto cfg = sidecar.config();
  cfg.max_batch = 2;
  RemoteClient client(cfg);
  std::vector<NliPair> pairs;
  for (int i = 0; i < 5; ++i) pairs.push_back({"p" + std::to_string(i), i % 2 ? "p" : "x"});
  auto v = client.classify_batch(pairs);
  REQUIRE(v.size() == 5);
  CHECK(sidecar.nli_requests == 3);
  for (int i = 0; i < 5; ++i) CHECK(v[i].label == (i % 2 ? Label::entailment : Label::neutral));
}

TEST_CASE("claim splits") {
  FakeSidecar sidecar;
  RemoteClient client(sidecar.config());
  std::vector<std::string> s = {"西瓜富含水分，热量低", "原子句"};
  auto c = client.split_batch(s);
  CHECK(c == std::vector<std::vector<std::string>>{{"西瓜富含水分", "热量低"}, {"原子句"}});
}

TEST_CASE("protocol violations raise") {
  FakeSidecar sidecar;
  RemoteClient client(sidecar.config());
  std::vector<NliPair> pairs = {{"a", "b"}, {"c", "d"}};
  sidecar.bad_label = true;
  CHECK_THROWS_AS(client.classify_batch(pairs), ProtocolError);
  sidecar.bad_label = false;
  sidecar.drop_one = true;
  CHECK_THROWS_AS(client.classify_batch(pairs), ProtocolError);
  sidecar.drop_one = false;
  sidecar.bad_score = true;
  CHECK_THROWS_AS(client.classify_batch(pairs), ProtocolError);
  sidecar.bad_score = false;
  sidecar.garbage = true;
  CHECK_THROWS_AS(client.classify_batch(pairs), ProtocolError);
  sidecar.garbage = false;
  sidecar.reject = true;
  auto before = client.attempts();
  CHECK_THROWS_AS(client.classify_batch(pairs), BackendError);
  CHECK(client.attempts() == before + 1);
}

TEST_CASE("transient 5xx is retried once and succeeds") {
  FakeSidecar sidecar;
  RemoteClient client(sidecar.config());
  sidecar.fail_next = 1;
  std::vector<NliPair> pairs = {{"ab", "a"}};
  auto v = client.classify_batch(pairs);
  CHECK(v[0].label == Label::entailment);
  CHECK(client.attempts() == 2);
}

TEST_CASE("persistent failure gives up after the retry budget") {
  FakeSidecar sidecar;
  auto cfg = sidecar.config();
  cfg.max_retries = 2;
  RemoteClient client(cfg);
  sidecar.fail_next = 100;
  std::vector<NliPair> pairs = {{"ab", "a"}};
  CHECK_THROWS_WITH_AS(client.classify_batch(pairs), doctest::Contains("unavailable after 3 attempts"), BackendError);
  CHECK(client.attempts() == 3);

  RemoteConfig dead;
  dead.endpoint = "http://127.0.0.1:1";
  dead.max_retries = 1;
  dead.backoff = std::chrono::milliseconds(1);
  RemoteClient unreachable(dead);
  CHECK_THROWS_AS(unreachable.classify_batch(pairs), BackendError);
  CHECK_THROWS_AS(unreachable.health(), BackendError);
}

TEST_CASE("health check") {
  FakeSidecar sidecar;
  RemoteClient client(sidecar.config());
  auto h = client.health();
  CHECK(h["status"] == "ok");
  CHECK(h["models"]["nli"] == "fake");
  CHECK_THROWS_AS(RemoteClient(RemoteConfig{}), ConfigError);
}

TEST_CASE("engine over the remote client") {
  FakeSidecar sidecar;
  auto client = std::make_shared<RemoteClient>(sidecar.config());
  VerificationEngine engine(client, client);
  CHECK(engine.classify("北京是首都", "北京").label == Label::entailment);
  CHECK(engine.classify("北京是首都", "北京").label == Label::entailment);
  CHECK(sidecar.nli_requests == 1);
  CHECK(engine.split("甲，乙").claims == std::vector<std::string>{"甲", "乙"});
}

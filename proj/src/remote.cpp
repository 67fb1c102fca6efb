#include "citeval/remote.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>

#include "citeval/errors.hpp"

namespace citeval {

using nlohmann::json;

namespace {

httplib::Client make_client(const RemoteConfig& cfg) {
  httplib::Client cli(cfg.endpoint);
  cli.set_connection_timeout(cfg.timeout);
  cli.set_read_timeout(cfg.timeout);
  cli.set_write_timeout(cfg.timeout);
  return cli;
}

json parse_body(const std::string& body, const std::string& path) {
  try {
    return json::parse(body);
  } catch (const json::exception&) {
    throw ProtocolError("response from " + path + " is not valid JSON");
  }
}

}  // namespace

RemoteClient::RemoteClient(RemoteConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw ConfigError("remote endpoint not configured");
  if (config_.max_batch == 0) throw ConfigError("remote max_batch must be at least 1");
}

json RemoteClient::post(const std::string& path, const json& body) {
  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.backoff * attempt);
    auto cli = make_client(config_);
    ++attempts_;
    auto res = cli.Post(path, payload, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError(config_.endpoint + path + " rejected the request: HTTP " + std::to_string(res->status));
    }
    return parse_body(res->body, path);
  }
  throw BackendError(config_.endpoint + path + " unavailable after " + std::to_string(config_.max_retries + 1) +
                     " attempts (" + last_error + ")");
}

std::vector<Verdict> RemoteClient::classify_batch(std::span<const NliPair> pairs) {
  std::vector<Verdict> out;
  out.reserve(pairs.size());
  for (std::size_t begin = 0; begin < pairs.size(); begin += config_.max_batch) {
    auto chunk = pairs.subspan(begin, std::min(config_.max_batch, pairs.size() - begin));
    json req = {{"pairs", json::array()}};
    for (const auto& p : chunk) req["pairs"].push_back({{"premise", p.premise}, {"hypothesis", p.hypothesis}});
    json res = post("/nli", req);
    if (!res.is_object() || !res.contains("verdicts") || !res["verdicts"].is_array()) {
      throw ProtocolError("/nli response lacks a verdicts array");
    }
    const auto& verdicts = res["verdicts"];
    if (verdicts.size() != chunk.size()) {
      throw ProtocolError("/nli returned " + std::to_string(verdicts.size()) + " verdicts for " +
                          std::to_string(chunk.size()) + " pairs");
    }
    for (const auto& v : verdicts) {
      if (!v.is_object() || !v.contains("label") || !v["label"].is_string()) {
        throw ProtocolError("/nli verdict lacks a string label");
      }
      Verdict verdict{parse_label(v["label"].get<std::string>()), std::nullopt};
      if (v.contains("score") && !v["score"].is_null()) {
        if (!v["score"].is_number()) throw ProtocolError("/nli score must be a number");
        double score = v["score"].get<double>();
        if (score < 0.0 || score > 1.0) throw ProtocolError("/nli score outside [0,1]");
        verdict.score = score;
      }
      out.push_back(verdict);
    }
  }
  return out;
}

std::vector<std::vector<std::string>> RemoteClient::split_batch(std::span<const std::string> sentences) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (std::size_t begin = 0; begin < sentences.size(); begin += config_.max_batch) {
    auto chunk = sentences.subspan(begin, std::min(config_.max_batch, sentences.size() - begin));
    json req = {{"sentences", std::vector<std::string>(chunk.begin(), chunk.end())}};
    json res = post("/claimsplit", req);
    if (!res.is_object() || !res.contains("claims") || !res["claims"].is_array()) {
      throw ProtocolError("/claimsplit response lacks a claims array");
    }
    const auto& claims = res["claims"];
    if (claims.size() != chunk.size()) {
      throw ProtocolError("/claimsplit returned " + std::to_string(claims.size()) + " claim lists for " +
                          std::to_string(chunk.size()) + " sentences");
    }
    for (const auto& list : claims) {
      if (!list.is_array()) throw ProtocolError("/claimsplit entries must be arrays of strings");
      std::vector<std::string> items;
      for (const auto& c : list) {
        if (!c.is_string()) throw ProtocolError("/claimsplit entries must be arrays of strings");
        items.push_back(c.get<std::string>());
      }
      out.push_back(std::move(items));
    }
  }
  return out;
}

json RemoteClient::health() {
  auto cli = make_client(config_);
  auto res = cli.Get("/healthz");
  if (!res) throw BackendError(config_.endpoint + "/healthz unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BackendError(config_.endpoint + "/healthz returned HTTP " + std::to_string(res->status));
  json body = parse_body(res->body, "/healthz");
  if (!body.is_object() || body.value("status", "") != "ok") throw ProtocolError("/healthz status is not ok");
  return body;
}

}  // namespace citeval

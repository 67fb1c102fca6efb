#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "citeval/backends.hpp"

namespace citeval {

struct RemoteConfig {
  /// Base URL of the inference sidecar, e.g. "http://127.0.0.1:8080".
  std::string endpoint;
  std::size_t max_batch = 32;
  /// Extra attempts after the first one on connection failures and 5xx.
  int max_retries = 3;
  std::chrono::milliseconds backoff{200};
  std::chrono::seconds timeout{120};
};

/// HTTP client for the inference sidecar:
///   POST /nli        {"pairs":[{"premise","hypothesis"}]} -> {"verdicts":[{"label","score"}]}
///   POST /claimsplit {"sentences":[...]}                  -> {"claims":[[...],...]}
///   GET  /healthz                                         -> {"status":"ok","models":{...}}
/// Requests larger than max_batch are sent as consecutive sub-batches.
class RemoteClient : public EntailmentBackend, public ClaimSplitBackend {
 public:
  explicit RemoteClient(RemoteConfig config);

  std::vector<Verdict> classify_batch(std::span<const NliPair> pairs) override;
  std::vector<std::vector<std::string>> split_batch(std::span<const std::string> sentences) override;
  nlohmann::json health();

  /// Number of HTTP attempts made so far, retries included.
  std::size_t attempts() const { return attempts_.load(); }

 private:
  nlohmann::json post(const std::string& path, const nlohmann::json& body);

  RemoteConfig config_;
  std::atomic<std::size_t> attempts_{0};
};

}  // namespace citeval

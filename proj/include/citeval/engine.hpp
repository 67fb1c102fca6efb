#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citeval/backends.hpp"

namespace citeval {

class Diagnostics;

/// Hex SHA-256 of the UTF-8 bytes.
std::string content_hash(std::string_view text);

/// Joins premise parts with a newline, the one concatenation rule used for
/// cited documents, sentence groups and claim lists.
std::string join_premise(std::span<const std::string> parts);

struct EngineOptions {
  bool cache_enabled = true;
  /// Premises longer than this many characters keep only their head.
  std::optional<std::size_t> premise_limit;
};

struct EngineStats {
  std::size_t nli_requests = 0;
  std::size_t nli_cache_hits = 0;
  std::size_t nli_backend_pairs = 0;
  std::size_t split_requests = 0;
  std::size_t split_cache_hits = 0;
  std::size_t split_backend_sentences = 0;
};

/// Entailment and claim-split backends behind a content-hash cache.
///
/// Safe to share between threads. Concurrent misses on the same key may both
/// reach the backend; the first stored result wins, so with deterministic
/// backends the outcome does not depend on completion order.
class VerificationEngine {
 public:
  VerificationEngine(std::shared_ptr<EntailmentBackend> nli, std::shared_ptr<ClaimSplitBackend> splitter,
                     EngineOptions options = {}, Diagnostics* diag = nullptr);

  /// An empty premise is neutral without consulting the backend.
  Verdict classify(std::string_view premise, std::string_view hypothesis);
  std::vector<Verdict> classify_batch(std::span<const NliPair> pairs);

  ClaimSet split(std::string_view sentence);
  std::vector<ClaimSet> split_batch(std::span<const std::string> sentences);

  /// Cache persistence: `dir/nli.jsonl` and `dir/claims.jsonl`, sorted by key.
  void load_cache(const std::filesystem::path& dir);
  void save_cache(const std::filesystem::path& dir) const;

  EngineStats stats() const;
  const EngineOptions& options() const { return options_; }

 private:
  std::string effective_premise(std::string_view premise);

  std::shared_ptr<EntailmentBackend> nli_;
  std::shared_ptr<ClaimSplitBackend> splitter_;
  EngineOptions options_;
  Diagnostics* diag_;

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, Verdict> verdicts_;
  std::unordered_map<std::string, std::vector<std::string>> claims_;

  std::atomic<std::size_t> nli_requests_{0};
  std::atomic<std::size_t> nli_hits_{0};
  std::atomic<std::size_t> nli_backend_{0};
  std::atomic<std::size_t> split_requests_{0};
  std::atomic<std::size_t> split_hits_{0};
  std::atomic<std::size_t> split_backend_{0};
};

}  // namespace citeval

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "citeval/corpus.hpp"
#include "citeval/engine.hpp"
#include "citeval/metrics.hpp"

namespace citeval {

class Diagnostics;

struct RunConfig {
  std::filesystem::path dataset;
  /// JSON lines of {"id", "summary"}; without it the reference summaries are
  /// evaluated.
  std::optional<std::filesystem::path> predictions;
  MaskPolicy mask_policy = MaskPolicy::automatic;
  std::optional<std::filesystem::path> oracle;
  std::optional<std::string> endpoint;
  SchemaFormat schema = SchemaFormat::canonical;
  DocumentText document_text = DocumentText::auto_select;
  MarkerConfig markers = MarkerConfig::defaults();
  std::optional<std::size_t> max_doc_len;
  std::optional<std::size_t> premise_limit;
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> cache_dir;
};

enum class RunStatus { ok, partial, failed };
std::string_view to_string(RunStatus status);

struct SampleIssue {
  std::string sample_id;
  std::string message;
};

struct RunOutcome {
  RunStatus status = RunStatus::ok;
  std::size_t evaluated = 0;
  std::vector<SampleIssue> skipped;
  std::vector<SampleIssue> failed;
  std::vector<RecordError> dataset_errors;
  std::optional<CorpusReport> corpus;
};

/// Exactly one of oracle/endpoint must be set. Throws ConfigError otherwise.
struct Backends {
  std::shared_ptr<EntailmentBackend> nli;
  std::shared_ptr<ClaimSplitBackend> splitter;
};
Backends make_backends(const std::optional<std::filesystem::path>& oracle, const std::optional<std::string>& endpoint,
                       Diagnostics* diag);

/// Reads system summaries keyed by sample id.
std::map<std::string, std::string> load_predictions(const std::filesystem::path& path);

/// Evaluates every sample and writes, under out_dir:
///   samples.jsonl  one report per line, ordered by sample id
///   corpus.json    the macro-averaged corpus report
///   status.json    status, skipped/failed samples, dataset errors, warnings
/// Throws ConfigError/DatasetError for problems that stop the whole run.
RunOutcome run_evaluate(const RunConfig& config, Diagnostics& diag);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
/// is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace citeval

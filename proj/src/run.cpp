#include "citeval/run.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "citeval/diagnostics.hpp"
#include "citeval/errors.hpp"
#include "citeval/oracle.hpp"
#include "citeval/remote.hpp"
#include "citeval/report.hpp"
#include "citeval/text.hpp"

namespace citeval {

using nlohmann::json;

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ok:
      return "ok";
    case RunStatus::partial:
      return "partial";
    case RunStatus::failed:
      return "failed";
  }
  return "failed";
}

Backends make_backends(const std::optional<std::filesystem::path>& oracle, const std::optional<std::string>& endpoint,
                       Diagnostics* diag) {
  if (oracle.has_value() == endpoint.has_value()) {
    throw ConfigError("configure exactly one backend source: --oracle FILE or --endpoint URL");
  }
  if (oracle) {
    auto table = std::make_shared<TableOracle>(TableOracle::from_file(*oracle, diag));
    return {table, table};
  }
  auto client = std::make_shared<RemoteClient>(RemoteConfig{*endpoint});
  return {client, client};
}

std::map<std::string, std::string> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot read predictions file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      const json& id = j.contains("id") ? j.at("id") : j.at("sample_id");
      std::string key = id.is_string() ? id.get<std::string>() : std::to_string(id.get<long long>());
      const json& summary = j.contains("summary") ? j.at("summary") : j.at("prediction");
      if (!out.emplace(key, summary.get<std::string>()).second) {
        throw DatasetError("duplicate prediction for sample '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw DatasetError("predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << content;
  if (!out) throw Error("failed to write " + path.string());
}

json issues_json(const std::vector<SampleIssue>& issues) {
  json arr = json::array();
  for (const auto& i : issues) arr.push_back({{"sample_id", i.sample_id}, {"message", i.message}});
  return arr;
}

}  // namespace

RunOutcome run_evaluate(const RunConfig& config, Diagnostics& diag) {
  if (config.jobs == 0) throw ConfigError("--jobs must be at least 1");
  if (config.max_doc_len && *config.max_doc_len == 0) throw ConfigError("--max-doc-len must be at least 1");

  DatasetSchema schema{config.schema, config.document_text, MarkerGrammar(config.markers)};
  auto loaded = load_dataset(config.dataset, schema);
  auto backends = make_backends(config.oracle, config.endpoint, &diag);
  VerificationEngine engine(backends.nli, backends.splitter, EngineOptions{true, config.premise_limit}, &diag);
  if (config.cache_dir) engine.load_cache(*config.cache_dir);

  std::optional<std::map<std::string, std::string>> predictions;
  if (config.predictions) predictions = load_predictions(*config.predictions);

  if (config.mask_policy == MaskPolicy::human &&
      std::none_of(loaded.samples.begin(), loaded.samples.end(),
                   [](const Sample& s) { return s.human_citations.has_value(); })) {
    throw ConfigError("mask policy 'human' needs human_citations in the dataset");
  }

  RunOutcome outcome;
  outcome.dataset_errors = loaded.errors;

  struct Job {
    const Sample* sample;
    Sample chunked;
    std::string system;
  };
  std::vector<Job> jobs;
  for (const auto& s : loaded.samples) {
    std::string system = s.summary_markup;
    if (predictions) {
      auto it = predictions->find(s.sample_id);
      if (it == predictions->end()) {
        outcome.skipped.push_back({s.sample_id, "no prediction for this sample"});
        continue;
      }
      system = it->second;
    }
    Job job{&s, {}, std::move(system)};
    if (config.max_doc_len) job.chunked = chunk_sample(s, *config.max_doc_len);
    jobs.push_back(std::move(job));
  }

  const EvalConfig eval{config.mask_policy, schema.markers};
  std::vector<std::optional<SampleReport>> reports(jobs.size());
  std::vector<std::optional<std::string>> errors(jobs.size());
  parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
    const Sample& sample = config.max_doc_len ? jobs[i].chunked : *jobs[i].sample;
    try {
      reports[i] = evaluate_sample(sample, jobs[i].system, eval, engine, &diag);
    } catch (const SampleError& e) {
      errors[i] = e.what();
    }
  });

  std::vector<SampleReport> done;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (reports[i]) {
      done.push_back(std::move(*reports[i]));
    } else {
      outcome.failed.push_back({jobs[i].sample->sample_id, errors[i].value_or("unknown error")});
    }
  }
  std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  auto by_id = [](const SampleIssue& a, const SampleIssue& b) { return a.sample_id < b.sample_id; };
  std::sort(outcome.skipped.begin(), outcome.skipped.end(), by_id);
  std::sort(outcome.failed.begin(), outcome.failed.end(), by_id);
  outcome.evaluated = done.size();
  if (!done.empty()) outcome.corpus = aggregate(done);

  if (done.empty()) {
    outcome.status = RunStatus::failed;
  } else if (!outcome.skipped.empty() || !outcome.failed.empty() || !outcome.dataset_errors.empty()) {
    outcome.status = RunStatus::partial;
  }

  std::filesystem::create_directories(config.out_dir);
  std::string lines;
  for (const auto& r : done) lines += to_json(r).dump() + "\n";
  write_file(config.out_dir / "samples.jsonl", lines);
  write_file(config.out_dir / "corpus.json", (outcome.corpus ? to_json(*outcome.corpus) : json(nullptr)).dump(2) + "\n");

  json dataset_errors = json::array();
  for (const auto& e : outcome.dataset_errors) dataset_errors.push_back({{"line", e.line}, {"message", e.message}});
  auto warnings = diag.warnings();
  std::sort(warnings.begin(), warnings.end());
  json status = {{"status", to_string(outcome.status)},
                 {"evaluated", outcome.evaluated},
                 {"skipped", issues_json(outcome.skipped)},
                 {"failed", issues_json(outcome.failed)},
                 {"dataset_errors", std::move(dataset_errors)},
                 {"warnings", warnings}};
  write_file(config.out_dir / "status.json", status.dump(2) + "\n");

  if (config.cache_dir) engine.save_cache(*config.cache_dir);
  return outcome;
}

}  // namespace citeval

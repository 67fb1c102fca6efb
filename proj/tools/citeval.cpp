// citeval: attribution and summarization metrics for cited summaries.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "citeval/corpus.hpp"
#include "citeval/diagnostics.hpp"
#include "citeval/errors.hpp"
#include "citeval/metrics.hpp"
#include "citeval/report.hpp"
#include "citeval/run.hpp"
#include "citeval/text.hpp"

namespace {

using nlohmann::json;
using namespace citeval;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

struct DataOptions {
  std::string schema = "canonical";
  std::string doc_text = "auto";
  std::string markers_file;
  std::optional<std::size_t> max_doc_len;

  void add_to(CLI::App* cmd, bool with_chunking = true) {
    cmd->add_option("--schema", schema, "Dataset record layout")
        ->check(CLI::IsMember({"canonical", "webcites"}))
        ->capture_default_str();
    cmd->add_option("--doc-text", doc_text, "Document field used as premise")
        ->check(CLI::IsMember({"auto", "snippet", "content"}))
        ->capture_default_str();
    cmd->add_option("--markers", markers_file, "JSON file with a \"markers\" section (citation grammar)")
        ->check(CLI::ExistingFile);
    if (with_chunking) {
      cmd->add_option("--max-doc-len", max_doc_len, "Chunk documents into passages of at most N characters")
          ->check(CLI::PositiveNumber);
    }
  }

  MarkerConfig marker_config() const {
    if (markers_file.empty()) return MarkerConfig::defaults();
    std::ifstream in(markers_file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("markers file is not valid JSON: " + std::string(e.what()));
    }
    return MarkerConfig::from_json(j.contains("markers") ? j.at("markers") : j);
  }

  DocumentText document_text() const {
    if (doc_text == "snippet") return DocumentText::snippet;
    if (doc_text == "content") return DocumentText::content;
    return DocumentText::auto_select;
  }

  DatasetSchema dataset_schema() const {
    return {parse_schema_format(schema), document_text(), MarkerGrammar(marker_config())};
  }
};

struct BackendOptions {
  std::optional<std::string> oracle;
  std::optional<std::string> endpoint;

  void add_to(CLI::App* cmd) {
    auto* o = cmd->add_option("--oracle", oracle, "Table-oracle fixture JSON")->check(CLI::ExistingFile);
    auto* e = cmd->add_option("--endpoint", endpoint, "Inference sidecar base URL (default: $ATTRIB_EVAL_ENDPOINT)");
    o->excludes(e);
  }

  // Flags and config file take precedence over the environment.
  void resolve() {
    if (!oracle && !endpoint) {
      if (const char* env = std::getenv("ATTRIB_EVAL_ENDPOINT"); env != nullptr && *env != '\0') endpoint = env;
    }
  }

  std::optional<std::filesystem::path> oracle_path() const {
    return oracle ? std::optional<std::filesystem::path>(*oracle) : std::nullopt;
  }
};

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed to write " + out_path);
}

json record_errors_json(const std::string& path, const std::vector<RecordError>& errors) {
  json arr = json::array();
  for (const auto& e : errors) arr.push_back({{"file", path}, {"line", e.line}, {"message", e.message}});
  return arr;
}

std::vector<Sample> load_or_throw(const std::string& path, const DatasetSchema& schema, json& errors) {
  auto loaded = load_dataset(path, schema);
  for (auto& e : record_errors_json(path, loaded.errors)) errors.push_back(std::move(e));
  for (const auto& e : loaded.errors) std::cerr << path << ":" << e.line << ": " << e.message << '\n';
  return std::move(loaded.samples);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribution and summarization evaluation for summaries with inline citations"};
  app.set_config("--config", "", "TOML/INI config file; command-line flags override it");
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Do not echo warnings to stderr");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score summaries against a dataset");
  RunConfig run;
  std::string dataset, predictions, mask_policy = "auto", out_dir, cache_dir;
  DataOptions eval_data;
  BackendOptions eval_backend;
  std::optional<std::size_t> premise_limit;
  evaluate->add_option("--dataset", dataset, "Dataset JSON lines")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--predictions", predictions, "System summaries as JSON lines {id, summary}")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--mask-policy", mask_policy, "Citation mask policy")
      ->check(CLI::IsMember({"default", "auto", "human"}))
      ->capture_default_str();
  evaluate->add_option("--out", out_dir, "Output directory")->required();
  evaluate->add_option("--jobs", run.jobs, "Samples evaluated in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evaluate->add_option("--cache", cache_dir, "Directory for the persistent verdict cache");
  evaluate->add_option("--premise-limit", premise_limit, "Truncate premises to N characters")
      ->check(CLI::PositiveNumber);
  eval_data.add_to(evaluate);
  eval_backend.add_to(evaluate);

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics of one or more dataset files");
  std::vector<std::string> stats_inputs;
  std::string stats_out;
  DataOptions stats_data;
  stats->add_option("--input", stats_inputs, "Dataset file (repeatable)")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", stats_out, "Write the JSON report here instead of stdout");
  stats_data.add_to(stats);

  // chunk
  auto* chunk = app.add_subcommand("chunk", "Split documents into passages and renumber citations");
  std::string chunk_input, chunk_out;
  std::size_t chunk_len = 512;
  DataOptions chunk_data;
  chunk->add_option("--input", chunk_input, "Dataset file")->required()->check(CLI::ExistingFile);
  chunk->add_option("--out", chunk_out, "Output dataset (canonical JSON lines)")->required();
  chunk->add_option("--max-doc-len", chunk_len, "Maximum passage length in characters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  chunk_data.add_to(chunk, false);

  // agreement
  auto* agreement = app.add_subcommand("agreement", "Kappa between evaluator and human citations");
  std::string agree_dataset, agree_policy = "auto", agree_out;
  DataOptions agree_data;
  BackendOptions agree_backend;
  agreement->add_option("--dataset", agree_dataset, "Dataset with human-cited summaries")
      ->required()
      ->check(CLI::ExistingFile);
  agreement->add_option("--mask-policy", agree_policy, "Citation mask policy")
      ->check(CLI::IsMember({"default", "auto", "human"}))
      ->capture_default_str();
  agreement->add_option("--out", agree_out, "Write the JSON report here instead of stdout");
  agree_data.add_to(agreement, false);
  agree_backend.add_to(agreement);

  // claimsplit-quality
  auto* quality = app.add_subcommand("claimsplit-quality", "Redundancy, #splits, correctness, completeness");
  std::string quality_dataset, quality_sentences, quality_out;
  DataOptions quality_data;
  BackendOptions quality_backend;
  auto* qd = quality->add_option("--dataset", quality_dataset, "Use the reference summary sentences of a dataset")
                 ->check(CLI::ExistingFile);
  auto* qs = quality->add_option("--sentences", quality_sentences, "Plain text file, one sentence per line")
                 ->check(CLI::ExistingFile);
  qd->excludes(qs);
  quality->add_option("--out", quality_out, "Write the JSON report here instead of stdout");
  quality_data.add_to(quality, false);
  quality_backend.add_to(quality);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"status", "failed"}, {"error", e.what()}}.dump() << '\n';
    return kExitUsage;
  }

  Diagnostics diag(quiet ? nullptr : &std::cerr);
  try {
    if (*evaluate) {
      eval_backend.resolve();
      run.dataset = dataset;
      if (!predictions.empty()) run.predictions = predictions;
      run.mask_policy = parse_mask_policy(mask_policy);
      run.oracle = eval_backend.oracle_path();
      run.endpoint = eval_backend.endpoint;
      run.schema = parse_schema_format(eval_data.schema);
      run.document_text = eval_data.document_text();
      run.markers = eval_data.marker_config();
      run.max_doc_len = eval_data.max_doc_len;
      run.premise_limit = premise_limit;
      run.out_dir = out_dir;
      if (!cache_dir.empty()) run.cache_dir = cache_dir;

      auto outcome = run_evaluate(run, diag);
      if (outcome.corpus) std::cout << render_table(*outcome.corpus, "system");
      for (const auto& s : outcome.skipped) std::cerr << "skipped " << s.sample_id << ": " << s.message << '\n';
      for (const auto& f : outcome.failed) std::cerr << "failed " << f.sample_id << ": " << f.message << '\n';
      std::cerr << "status: " << to_string(outcome.status) << " (" << outcome.evaluated << " evaluated)\n";
      if (outcome.status == RunStatus::ok) return kExitOk;
      return outcome.status == RunStatus::partial ? kExitPartial : kExitError;
    }

    if (*stats) {
      auto schema = stats_data.dataset_schema();
      json errors = json::array();
      json files = json::array();
      std::vector<Sample> all;
      for (const auto& path : stats_inputs) {
        auto samples = load_or_throw(path, schema, errors);
        if (stats_data.max_doc_len) {
          for (auto& s : samples) s = chunk_sample(s, *stats_data.max_doc_len);
        }
        files.push_back({{"path", path}, {"samples", samples.size()}});
        all.insert(all.end(), std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.end()));
      }
      json report = {{"files", files}, {"stats", stats_to_json(corpus_stats(all, schema.markers))}, {"errors", errors}};
      emit(report, stats_out);
      return errors.empty() ? kExitOk : kExitPartial;
    }

    if (*chunk) {
      auto schema = chunk_data.dataset_schema();
      json errors = json::array();
      auto samples = load_or_throw(chunk_input, schema, errors);
      std::ofstream out(chunk_out, std::ios::trunc);
      std::size_t passages = 0;
      for (const auto& s : samples) {
        auto chunked = chunk_sample(s, chunk_len);
        passages += chunked.documents.size();
        out << sample_to_json(chunked).dump() << '\n';
      }
      if (!out) throw Error("failed to write " + chunk_out);
      std::cerr << "chunked " << samples.size() << " samples into " << passages << " passages\n";
      return errors.empty() ? kExitOk : kExitPartial;
    }

    if (*agreement) {
      agree_backend.resolve();
      auto schema = agree_data.dataset_schema();
      json errors = json::array();
      auto samples = load_or_throw(agree_dataset, schema, errors);
      auto backends = make_backends(agree_backend.oracle_path(), agree_backend.endpoint, &diag);
      VerificationEngine engine(backends.nli, backends.splitter, {}, &diag);
      auto result = citation_agreement(samples, parse_mask_policy(agree_policy), schema.markers, engine);
      json report = to_json(result);
      report["mask_policy"] = agree_policy;
      report["errors"] = errors;
      emit(report, agree_out);
      return errors.empty() ? kExitOk : kExitPartial;
    }

    if (*quality) {
      quality_backend.resolve();
      std::vector<std::string> sentences;
      json errors = json::array();
      if (!quality_dataset.empty()) {
        auto schema = quality_data.dataset_schema();
        for (const auto& s : load_or_throw(quality_dataset, schema, errors)) {
          for (auto& sentence : segment_summary(s.summary_markup, schema.markers).sentences) {
            sentences.push_back(std::move(sentence.text));
          }
        }
      } else if (!quality_sentences.empty()) {
        std::ifstream in(quality_sentences);
        for (std::string line; std::getline(in, line);) {
          if (!text::trim(line).empty()) sentences.emplace_back(text::trim(line));
        }
      } else {
        throw ConfigError("claimsplit-quality needs --dataset or --sentences");
      }
      auto backends = make_backends(quality_backend.oracle_path(), quality_backend.endpoint, &diag);
      VerificationEngine engine(backends.nli, backends.splitter, {}, &diag);
      json report = to_json(claimsplit_quality(sentences, engine));
      report["errors"] = errors;
      emit(report, quality_out);
      return errors.empty() ? kExitOk : kExitPartial;
    }
  } catch (const std::exception& e) {
    std::cerr << json{{"status", "failed"}, {"error", e.what()}}.dump() << '\n';
    return kExitError;
  }
  return kExitOk;
}

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "citeval/segmenter.hpp"

namespace citeval {

struct Document {
  DocId id = 0;
  std::string text;
  std::optional<std::string> title;
  std::optional<std::string> url;
  std::optional<std::string> snippet;
  friend bool operator==(const Document&, const Document&) = default;
};

struct Sample {
  std::string sample_id;
  std::string query;
  std::vector<Document> documents;
  std::string summary_markup;
  std::optional<std::vector<CitationSet>> human_citations;
  std::optional<std::vector<std::vector<std::string>>> human_extraction;
  friend bool operator==(const Sample&, const Sample&) = default;

  bool has_document(DocId id) const { return id >= 1 && static_cast<std::size_t>(id) <= documents.size(); }
};

/// Which record layout a dataset file uses.
enum class SchemaFormat {
  canonical,  ///< {id, query, documents:[{title,url,snippet,content}], summary, human_citations?}
  webcites,   ///< field-name adapter for the released dataset files
};

/// Which document field becomes the entailment premise.
enum class DocumentText { auto_select, snippet, content };

struct DatasetSchema {
  SchemaFormat format = SchemaFormat::canonical;
  DocumentText document_text = DocumentText::auto_select;
  MarkerGrammar markers;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  std::vector<Sample> samples;
  std::vector<RecordError> errors;
};

SchemaFormat parse_schema_format(std::string_view name);

/// Reads a JSON-lines dataset. Blank lines are skipped; malformed records are
/// rejected individually and reported with their 1-based line number.
/// Throws DatasetError when the file cannot be opened.
LoadResult load_dataset(const std::filesystem::path& path, const DatasetSchema& schema);
LoadResult parse_dataset(std::istream& in, const DatasetSchema& schema);

/// Builds one Sample from a JSON record; throws DatasetError on a schema
/// violation.
Sample sample_from_json(const nlohmann::json& record, const DatasetSchema& schema, std::size_t line);

/// Canonical-format JSON for a Sample.
nlohmann::json sample_to_json(const Sample& sample);

struct CorpusStats {
  std::size_t sample_count = 0;
  double docs_per_query = 0.0;
  double doc_length = 0.0;
  double summary_length = 0.0;
  double sentences_per_summary = 0.0;
  double citations_per_sentence = 0.0;
};

nlohmann::json stats_to_json(const CorpusStats& stats);

/// Throws ConfigError on an empty sample list.
CorpusStats corpus_stats(const std::vector<Sample>& samples, const MarkerGrammar& grammar);

/// Greedy sentence packing of a web page into passages of at most `max_len`
/// characters. Sentences longer than `max_len` are hard-split.
std::vector<std::string> chunk_page(std::string_view page_text, std::size_t max_len);

/// Page text split at sentence boundaries; pieces keep their trailing
/// whitespace so they concatenate back to the input.
std::vector<std::string_view> split_page_sentences(std::string_view page_text);

/// Replaces every document by its passages and renumbers them 1..n in page
/// order. Human citations and extractions refer to the old ids and are
/// dropped.
Sample chunk_sample(const Sample& sample, std::size_t max_len);

}  // namespace citeval

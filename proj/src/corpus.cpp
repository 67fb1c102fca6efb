#include "citeval/corpus.hpp"

#include <fstream>
#include <initializer_list>
#include <istream>
#include <unordered_set>

#include "citeval/errors.hpp"
#include "citeval/text.hpp"

namespace citeval {

using nlohmann::json;

namespace {

constexpr std::u32string_view kClosingQuotes = U"”’\"'）)」』》〉";

const json* find_field(const json& obj, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    auto it = obj.find(name);
    if (it != obj.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

std::string require_string(const json& obj, std::initializer_list<const char*> names, std::string_view what) {
  const json* v = find_field(obj, names);
  if (v == nullptr) throw DatasetError("missing " + std::string(what));
  if (!v->is_string()) throw DatasetError(std::string(what) + " must be a string");
  return v->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, std::initializer_list<const char*> names) {
  const json* v = find_field(obj, names);
  if (v == nullptr) return std::nullopt;
  if (!v->is_string()) throw DatasetError(std::string(*names.begin()) + " must be a string");
  return v->get<std::string>();
}

std::string sample_id_of(const json& record, bool webcites, std::size_t line) {
  const json* v = webcites ? find_field(record, {"id", "sample_id", "qid"}) : find_field(record, {"id"});
  if (v == nullptr) return "line-" + std::to_string(line);
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer()) return std::to_string(v->get<long long>());
  throw DatasetError("id must be a string or an integer");
}

Document document_from_json(const json& d, DocId id, bool webcites, DocumentText which) {
  if (!d.is_object()) throw DatasetError("document " + std::to_string(id) + " must be an object");
  Document doc;
  doc.id = id;
  doc.title = optional_string(d, {"title"});
  doc.url = optional_string(d, {"url"});
  doc.snippet = webcites ? optional_string(d, {"snippet", "abstract"}) : optional_string(d, {"snippet"});
  auto content = webcites ? optional_string(d, {"content", "full_content", "text"})
                          : optional_string(d, {"content", "text"});
  switch (which) {
    case DocumentText::content:
      doc.text = content.value_or("");
      break;
    case DocumentText::snippet:
      doc.text = doc.snippet.value_or("");
      break;
    case DocumentText::auto_select:
      doc.text = content && !content->empty() ? *content : doc.snippet.value_or("");
      break;
  }
  if (text::trim(doc.text).empty()) throw DatasetError("document " + std::to_string(id) + " has no text");
  return doc;
}

void check_citations(const Sample& s, const CitationSet& cites, std::string_view where) {
  for (DocId id : cites) {
    if (!s.has_document(id)) {
      throw DatasetError("dangling citation [" + std::to_string(id) + "] in " + std::string(where) + " (sample has " +
                         std::to_string(s.documents.size()) + " documents)");
    }
  }
}

}  // namespace

SchemaFormat parse_schema_format(std::string_view name) {
  if (name == "canonical") return SchemaFormat::canonical;
  if (name == "webcites") return SchemaFormat::webcites;
  throw ConfigError("unknown schema '" + std::string(name) + "' (expected canonical or webcites)");
}

Sample sample_from_json(const json& record, const DatasetSchema& schema, std::size_t line) {
  if (!record.is_object()) throw DatasetError("record must be a JSON object");
  const bool webcites = schema.format == SchemaFormat::webcites;

  Sample s;
  s.sample_id = sample_id_of(record, webcites, line);
  s.query = webcites ? require_string(record, {"query", "question"}, "query")
                     : require_string(record, {"query"}, "query");
  s.summary_markup = webcites ? require_string(record, {"summary", "answer", "output", "target"}, "summary")
                              : require_string(record, {"summary"}, "summary");

  const json* docs = webcites ? find_field(record, {"documents", "docs", "search_results"})
                              : find_field(record, {"documents"});
  if (docs == nullptr) throw DatasetError("missing documents");
  if (!docs->is_array() || docs->empty()) throw DatasetError("documents must be a non-empty array");
  for (const auto& d : *docs) {
    s.documents.push_back(document_from_json(d, static_cast<DocId>(s.documents.size() + 1), webcites,
                                             schema.document_text));
  }

  if (const json* hc = find_field(record, {"human_citations"})) {
    if (!hc->is_array()) throw DatasetError("human_citations must be an array of id lists");
    std::vector<CitationSet> cites;
    for (const auto& row : *hc) {
      if (!row.is_array()) throw DatasetError("human_citations must be an array of id lists");
      CitationSet set;
      for (const auto& id : row) {
        if (!id.is_number_integer()) throw DatasetError("citation ids must be integers");
        set.insert(id.get<DocId>());
      }
      cites.push_back(std::move(set));
    }
    s.human_citations = std::move(cites);
  }

  if (const json* he = find_field(record, webcites ? std::initializer_list<const char*>{"human_extraction", "extraction"}
                                                   : std::initializer_list<const char*>{"human_extraction"})) {
    try {
      s.human_extraction = he->get<std::vector<std::vector<std::string>>>();
    } catch (const json::exception&) {
      throw DatasetError("human_extraction must be an array of string lists");
    }
  }

  auto parsed = segment_summary(s.summary_markup, schema.markers);
  for (const auto& sentence : parsed.sentences) {
    check_citations(s, sentence.citations, "summary sentence " + std::to_string(sentence.index));
  }
  if (s.human_citations) {
    for (std::size_t i = 0; i < s.human_citations->size(); ++i) {
      check_citations(s, (*s.human_citations)[i], "human_citations[" + std::to_string(i) + "]");
    }
  } else if (webcites) {
    std::vector<CitationSet> cites;
    for (const auto& sentence : parsed.sentences) cites.push_back(sentence.citations);
    s.human_citations = std::move(cites);
  }
  return s;
}

json sample_to_json(const Sample& s) {
  json docs = json::array();
  for (const auto& d : s.documents) {
    json j = json::object();
    if (d.title) j["title"] = *d.title;
    if (d.url) j["url"] = *d.url;
    if (d.snippet) j["snippet"] = *d.snippet;
    j["content"] = d.text;
    docs.push_back(std::move(j));
  }
  json out = {{"id", s.sample_id}, {"query", s.query}, {"documents", std::move(docs)}, {"summary", s.summary_markup}};
  if (s.human_citations) {
    json hc = json::array();
    for (const auto& set : *s.human_citations) hc.push_back(std::vector<DocId>(set.begin(), set.end()));
    out["human_citations"] = std::move(hc);
  }
  if (s.human_extraction) out["human_extraction"] = *s.human_extraction;
  return out;
}

LoadResult parse_dataset(std::istream& in, const DatasetSchema& schema) {
  LoadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      json record = json::parse(line);
      Sample s = sample_from_json(record, schema, line_no);
      if (!seen.insert(s.sample_id).second) throw DatasetError("duplicate sample id '" + s.sample_id + "'");
      result.samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      result.errors.push_back({line_no, std::string("malformed JSON: ") + e.what()});
    } catch (const DatasetError& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

LoadResult load_dataset(const std::filesystem::path& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot read dataset file " + path.string());
  return parse_dataset(in, schema);
}

json stats_to_json(const CorpusStats& st) {
  return {{"sample_count", st.sample_count},
          {"docs_per_query", st.docs_per_query},
          {"doc_length", st.doc_length},
          {"summary_length", st.summary_length},
          {"sentences_per_summary", st.sentences_per_summary},
          {"citations_per_sentence", st.citations_per_sentence}};
}

CorpusStats corpus_stats(const std::vector<Sample>& samples, const MarkerGrammar& grammar) {
  if (samples.empty()) throw ConfigError("corpus statistics need at least one sample");
  // Every total is an integer count, so the means do not depend on order.
  std::size_t docs = 0;
  std::size_t doc_len = 0;
  std::size_t summary_len = 0;
  std::size_t sentences = 0;
  std::size_t citations = 0;
  for (const auto& s : samples) {
    docs += s.documents.size();
    for (const auto& d : s.documents) doc_len += text::measured_length(d.text);
    auto parsed = segment_summary(s.summary_markup, grammar);
    summary_len += text::measured_length(parsed.plain_text);
    sentences += parsed.sentences.size();
    for (const auto& sentence : parsed.sentences) citations += sentence.citations.size();
  }
  const auto n = static_cast<double>(samples.size());
  CorpusStats st;
  st.sample_count = samples.size();
  st.docs_per_query = static_cast<double>(docs) / n;
  st.doc_length = docs == 0 ? 0.0 : static_cast<double>(doc_len) / static_cast<double>(docs);
  st.summary_length = static_cast<double>(summary_len) / n;
  st.sentences_per_summary = static_cast<double>(sentences) / n;
  st.citations_per_sentence = sentences == 0 ? 0.0 : static_cast<double>(citations) / static_cast<double>(sentences);
  return st;
}

std::vector<std::string_view> split_page_sentences(std::string_view page) {
  static const MarkerGrammar grammar;
  std::vector<std::string_view> pieces;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < page.size()) {
    auto cp = text::decode_at(page, pos);
    pos += cp.size;
    bool boundary = false;
    if (cp.value == U'\n') {
      boundary = true;
    } else if (grammar.is_terminator(cp.value)) {
      while (pos < page.size()) {
        auto next = text::decode_at(page, pos);
        if (!grammar.is_terminator(next.value) && kClosingQuotes.find(next.value) == std::u32string_view::npos) break;
        pos += next.size;
      }
      // ASCII punctuation ends a sentence only before whitespace or the end.
      boundary = cp.value >= 0x80 || pos >= page.size() || text::is_space(text::decode_at(page, pos).value);
    }
    if (!boundary) continue;
    while (pos < page.size()) {
      auto next = text::decode_at(page, pos);
      if (!text::is_space(next.value)) break;
      pos += next.size;
    }
    pieces.push_back(page.substr(start, pos - start));
    start = pos;
  }
  if (start < page.size()) pieces.push_back(page.substr(start));
  return pieces;
}

std::vector<std::string> chunk_page(std::string_view page, std::size_t max_len) {
  if (max_len == 0) throw ConfigError("max_len must be at least 1");
  std::vector<std::string> passages;
  std::string current;
  std::size_t current_len = 0;
  for (std::string_view piece : split_page_sentences(page)) {
    const std::size_t len = text::codepoint_count(piece);
    if (current_len + len <= max_len) {
      current.append(piece);
      current_len += len;
      continue;
    }
    if (!current.empty()) passages.push_back(std::move(current));
    current.clear();
    current_len = 0;
    std::string_view rest = piece;
    std::size_t rest_len = len;
    while (rest_len > max_len) {
      auto cut = text::prefix_bytes(rest, max_len);
      passages.emplace_back(rest.substr(0, cut));
      rest.remove_prefix(cut);
      rest_len -= max_len;
    }
    current.assign(rest);
    current_len = rest_len;
  }
  if (!current.empty()) passages.push_back(std::move(current));
  return passages;
}

Sample chunk_sample(const Sample& sample, std::size_t max_len) {
  Sample out;
  out.sample_id = sample.sample_id;
  out.query = sample.query;
  out.summary_markup = sample.summary_markup;
  for (const auto& doc : sample.documents) {
    for (auto& passage : chunk_page(doc.text, max_len)) {
      if (text::trim(passage).empty()) continue;
      Document d;
      d.id = static_cast<DocId>(out.documents.size() + 1);
      d.text = std::move(passage);
      d.title = doc.title;
      d.url = doc.url;
      out.documents.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace citeval

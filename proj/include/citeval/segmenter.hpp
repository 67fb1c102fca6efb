#pragma once

#include <cstddef>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace citeval {

class Diagnostics;

using DocId = int;
using CitationSet = std::set<DocId>;

/// Citation marker grammar. Each pattern is an ECMAScript regex whose first
/// capture group holds the id list; ids are the digit runs inside it.
/// `suspect_patterns` match bracket constructs that look like citations; any
/// such match not covered by a valid marker is reported and left in the text.
struct MarkerConfig {
  std::vector<std::string> patterns;
  std::vector<std::string> suspect_patterns;
  /// Sentence terminators, UTF-8.
  std::string terminators;

  static MarkerConfig defaults();
  /// Reads the "markers" section of a config object; missing keys keep
  /// their defaults.
  static MarkerConfig from_json(const nlohmann::json& section);
};

/// A located citation marker inside summary markup.
struct Marker {
  std::size_t begin;
  std::size_t end;
  std::vector<DocId> ids;
};

/// Compiled form of MarkerConfig. Copyable and immutable once built.
class MarkerGrammar {
 public:
  MarkerGrammar();
  explicit MarkerGrammar(const MarkerConfig& config);

  /// Non-overlapping markers in position order.
  std::vector<Marker> find_markers(std::string_view markup, Diagnostics* diag = nullptr) const;
  bool is_terminator(char32_t cp) const;
  const MarkerConfig& config() const { return config_; }

 private:
  MarkerConfig config_;
  std::vector<std::regex> patterns_;
  std::vector<std::regex> suspects_;
  std::u32string terminators_;
};

/// Half-open byte interval into the markup.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Sentence {
  std::size_t index = 0;
  std::string text;
  CitationSet citations;
  Span raw_span;
  std::optional<bool> mask;
};

struct ParsedSummary {
  std::vector<Sentence> sentences;
  std::string plain_text;
};

/// Splits summary markup into sentences and attaches every marker to the
/// sentence it follows or sits inside.
ParsedSummary segment_summary(std::string_view markup, const MarkerGrammar& grammar,
                              Diagnostics* diag = nullptr);

/// Removes every recognized marker, keeping all other bytes in order.
std::string strip_markers(std::string_view markup, const MarkerGrammar& grammar);

/// Writes sentences back as markup: text followed by "[i][j]" markers,
/// joined by `separator`.
std::string render_markup(const std::vector<Sentence>& sentences, std::string_view separator = "");

}  // namespace citeval

#include "citeval/segmenter.hpp"

#include <algorithm>
#include <charconv>

#include <unicode/uchar.h>

#include "citeval/diagnostics.hpp"
#include "citeval/errors.hpp"
#include "citeval/text.hpp"

namespace citeval {

namespace {

constexpr std::u32string_view kClosers = U"”’\"'）)」』》〉";

bool is_closer(char32_t cp) { return kClosers.find(cp) != std::u32string_view::npos; }

bool is_horizontal_space(char32_t cp) { return cp != U'\n' && text::is_space(cp); }

bool is_ascii_alnum(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

std::vector<DocId> parse_ids(std::string_view list) {
  std::vector<DocId> ids;
  std::size_t i = 0;
  while (i < list.size()) {
    if (list[i] < '0' || list[i] > '9') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < list.size() && list[j] >= '0' && list[j] <= '9') ++j;
    DocId id = 0;
    auto [ptr, ec] = std::from_chars(list.data() + i, list.data() + j, id);
    if (ec != std::errc{}) return {};
    ids.push_back(id);
    i = j;
  }
  return ids;
}

std::u32string decode_all(std::string_view s) {
  std::u32string out;
  for (const auto& cp : text::decode(s)) out.push_back(cp.value);
  return out;
}

}  // namespace

MarkerConfig MarkerConfig::defaults() {
  MarkerConfig c;
  c.patterns = {
      R"(\[(\d+(?:\s*(?:,|，|、)\s*\d+)*)\])",
      R"(【(\d+(?:\s*(?:,|，|、)\s*\d+)*)】)",
  };
  c.suspect_patterns = {
      R"(\[(?:[\d\s,\-~]|–)*\])",
      R"(【(?:[\d\s,\-~]|–|，|、)*】)",
  };
  c.terminators = "。！？；…!?.";
  return c;
}

MarkerConfig MarkerConfig::from_json(const nlohmann::json& section) {
  MarkerConfig c = defaults();
  if (!section.is_object()) throw ConfigError("markers section must be a JSON object");
  if (section.contains("patterns")) c.patterns = section.at("patterns").get<std::vector<std::string>>();
  if (section.contains("suspect_patterns")) {
    c.suspect_patterns = section.at("suspect_patterns").get<std::vector<std::string>>();
  }
  if (section.contains("terminators")) c.terminators = section.at("terminators").get<std::string>();
  if (c.patterns.empty()) throw ConfigError("markers.patterns must not be empty");
  return c;
}

MarkerGrammar::MarkerGrammar() : MarkerGrammar(MarkerConfig::defaults()) {}

MarkerGrammar::MarkerGrammar(const MarkerConfig& config)
    : config_(config), terminators_(decode_all(config.terminators)) {
  try {
    for (const auto& p : config_.patterns) patterns_.emplace_back(p, std::regex::ECMAScript);
    for (const auto& p : config_.suspect_patterns) suspects_.emplace_back(p, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ConfigError(std::string("invalid marker pattern: ") + e.what());
  }
  for (const auto& re : patterns_) {
    if (re.mark_count() < 1) throw ConfigError("marker pattern needs a capture group for the id list");
  }
}

bool MarkerGrammar::is_terminator(char32_t cp) const {
  return terminators_.find(cp) != std::u32string::npos;
}

std::vector<Marker> MarkerGrammar::find_markers(std::string_view markup, Diagnostics* diag) const {
  std::vector<Marker> found;
  const char* first = markup.data();
  const char* last = markup.data() + markup.size();
  for (const auto& re : patterns_) {
    for (std::cregex_iterator it(first, last, re), end; it != end; ++it) {
      const auto& m = *it;
      auto begin = static_cast<std::size_t>(m.position(0));
      auto ids = parse_ids(std::string_view(m[1].first, static_cast<std::size_t>(m[1].length())));
      bool valid = !ids.empty() && std::all_of(ids.begin(), ids.end(), [](DocId id) { return id >= 1; });
      if (!valid) continue;
      found.push_back({begin, begin + static_cast<std::size_t>(m.length(0)), std::move(ids)});
    }
  }
  std::sort(found.begin(), found.end(), [](const Marker& a, const Marker& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end > b.end;
  });
  std::vector<Marker> markers;
  for (auto& m : found) {
    if (!markers.empty() && m.begin < markers.back().end) continue;
    markers.push_back(std::move(m));
  }

  if (diag != nullptr) {
    for (const auto& re : suspects_) {
      for (std::cregex_iterator it(first, last, re), end; it != end; ++it) {
        auto begin = static_cast<std::size_t>(it->position(0));
        auto stop = begin + static_cast<std::size_t>(it->length(0));
        bool covered = std::any_of(markers.begin(), markers.end(), [&](const Marker& m) {
          return m.begin <= begin && stop <= m.end;
        });
        if (!covered) {
          diag->warn("unparseable citation marker '" + it->str() + "' at byte " + std::to_string(begin) +
                     " left in text");
        }
      }
    }
  }
  return markers;
}

namespace {

struct RawSentence {
  Span span;
  CitationSet citations;
};

class Segmenter {
 public:
  Segmenter(std::string_view markup, const MarkerGrammar& grammar, Diagnostics* diag)
      : markup_(markup), grammar_(grammar), markers_(grammar.find_markers(markup, diag)) {}

  std::vector<RawSentence> run() {
    std::size_t pos = 0;
    while (pos < markup_.size()) {
      if (const Marker* m = marker_at(pos)) {
        if (!start_) start_ = pos;
        cites_.insert(m->ids.begin(), m->ids.end());
        pos = m->end;
        continue;
      }
      auto cp = text::decode_at(markup_, pos);
      if (cp.value == U'\n') {
        close(pos);
        pos += cp.size;
        continue;
      }
      if (text::is_space(cp.value)) {
        pos += cp.size;
        continue;
      }
      if (!start_) start_ = pos;
      if (grammar_.is_terminator(cp.value) && splits_here(cp)) {
        pos = absorb_tail(pos + cp.size);
        close(pos);
        continue;
      }
      if (cp.value < U'0' || cp.value > U'9') only_digits_ = false;
      pos += cp.size;
    }
    close(markup_.size());
    return std::move(out_);
  }

  const std::vector<Marker>& markers() const { return markers_; }

 private:
  const Marker* marker_at(std::size_t pos) const {
    auto it = std::lower_bound(markers_.begin(), markers_.end(), pos,
                               [](const Marker& m, std::size_t p) { return m.begin < p; });
    return it != markers_.end() && it->begin == pos ? &*it : nullptr;
  }

  // Latin punctuation splits only when it plausibly ends a sentence: not an
  // enumerator ("1."), not inside a token ("3.5", "U.S."), not followed by a
  // lowercase word ("e.g. the").
  bool splits_here(const text::CodePoint& cp) const {
    if (cp.value >= 0x80) return true;
    if (cp.value == U'.' && only_digits_) return false;
    std::size_t p = cp.offset + cp.size;
    while (p < markup_.size()) {
      auto next = text::decode_at(markup_, p);
      if (!grammar_.is_terminator(next.value)) break;
      p += next.size;
    }
    if (p >= markup_.size()) return true;
    auto adjacent = text::decode_at(markup_, p);
    if (is_ascii_alnum(adjacent.value)) return false;
    while (p < markup_.size()) {
      auto next = text::decode_at(markup_, p);
      if (!is_horizontal_space(next.value)) return !u_islower(static_cast<UChar32>(next.value));
      p += next.size;
    }
    return true;
  }

  // Consumes further terminators and closing quotes, then any markers that
  // follow (possibly separated by horizontal whitespace).
  std::size_t absorb_tail(std::size_t p) {
    while (p < markup_.size() && marker_at(p) == nullptr) {
      auto cp = text::decode_at(markup_, p);
      if (!grammar_.is_terminator(cp.value) && !is_closer(cp.value)) break;
      p += cp.size;
    }
    for (;;) {
      std::size_t q = p;
      while (q < markup_.size()) {
        auto cp = text::decode_at(markup_, q);
        if (!is_horizontal_space(cp.value)) break;
        q += cp.size;
      }
      const Marker* m = q < markup_.size() ? marker_at(q) : nullptr;
      if (m == nullptr) return p;
      cites_.insert(m->ids.begin(), m->ids.end());
      p = m->end;
    }
  }

  void close(std::size_t end) {
    if (start_) out_.push_back({{*start_, end}, std::move(cites_)});
    start_.reset();
    cites_.clear();
    only_digits_ = true;
  }

  std::string_view markup_;
  const MarkerGrammar& grammar_;
  std::vector<Marker> markers_;
  std::vector<RawSentence> out_;
  std::optional<std::size_t> start_;
  CitationSet cites_;
  bool only_digits_ = true;
};

std::string strip_range(std::string_view markup, const std::vector<Marker>& markers, Span span) {
  std::string out;
  std::size_t pos = span.begin;
  for (const auto& m : markers) {
    if (m.end <= span.begin || m.begin >= span.end) continue;
    out.append(markup.substr(pos, m.begin - pos));
    pos = m.end;
  }
  if (pos < span.end) out.append(markup.substr(pos, span.end - pos));
  return out;
}

bool is_vacuous(std::string_view s, const MarkerGrammar& grammar) {
  for (std::size_t i = 0; i < s.size();) {
    auto cp = text::decode_at(s, i);
    i += cp.size;
    if (!text::is_space(cp.value) && !grammar.is_terminator(cp.value) && !is_closer(cp.value)) return false;
  }
  return true;
}

}  // namespace

ParsedSummary segment_summary(std::string_view markup, const MarkerGrammar& grammar, Diagnostics* diag) {
  Segmenter seg(markup, grammar, diag);
  auto raw = seg.run();
  const auto& markers = seg.markers();

  // Fragments with no real text (stray punctuation, marker-only lines) fold
  // into the previous sentence, or into the next one at the very start.
  std::vector<RawSentence> merged;
  std::optional<RawSentence> carry;
  for (auto& r : raw) {
    if (carry) {
      r.span.begin = carry->span.begin;
      r.citations.insert(carry->citations.begin(), carry->citations.end());
      carry.reset();
    }
    if (!is_vacuous(strip_range(markup, markers, r.span), grammar)) {
      merged.push_back(std::move(r));
    } else if (!merged.empty()) {
      merged.back().span.end = r.span.end;
      merged.back().citations.insert(r.citations.begin(), r.citations.end());
    } else {
      carry = std::move(r);
    }
  }
  if (carry && !carry->citations.empty() && diag != nullptr) {
    diag->warn("citations without any sentence text were dropped");
  }

  ParsedSummary parsed;
  for (auto& r : merged) {
    Sentence s;
    s.index = parsed.sentences.size();
    s.text = std::string(text::trim(strip_range(markup, markers, r.span)));
    s.citations = std::move(r.citations);
    s.raw_span = r.span;
    if (!parsed.sentences.empty()) {
      auto prev_end = parsed.sentences.back().raw_span.end;
      parsed.plain_text.append(markup.substr(prev_end, s.raw_span.begin - prev_end));
    }
    parsed.plain_text.append(s.text);
    parsed.sentences.push_back(std::move(s));
  }
  return parsed;
}

std::string strip_markers(std::string_view markup, const MarkerGrammar& grammar) {
  return strip_range(markup, grammar.find_markers(markup), {0, markup.size()});
}

std::string render_markup(const std::vector<Sentence>& sentences, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out.append(separator);
    out.append(sentences[i].text);
    for (DocId id : sentences[i].citations) out.append("[" + std::to_string(id) + "]");
  }
  return out;
}

}  // namespace citeval

#include <doctest.h>

#include <citeval/diagnostics.hpp>
#include <citeval/errors.hpp>
#include <citeval/segmenter.hpp>

#include "support/gen.hpp"

using namespace citeval;

namespace {

const MarkerGrammar& grammar() {
  static const MarkerGrammar g;
  return g;
}

std::vector<CitationSet> cites(const ParsedSummary& p) {
  std::vector<CitationSet> out;
  for (const auto& s : p.sentences) out.push_back(s.citations);
  return out;
}

std::vector<std::string> texts(const ParsedSummary& p) {
  std::vector<std::string> out;
  for (const auto& s : p.sentences) out.push_back(s.text);
  return out;
}

}  // namespace

TEST_CASE("adjacent markers after the terminator") {
  auto p = segment_summary("北京是中国的首都[1][2]。它有悠久历史[2]。", grammar());
  CHECK(texts(p) == std::vector<std::string>{"北京是中国的首都。", "它有悠久历史。"});
  CHECK(cites(p) == std::vector<CitationSet>{{1, 2}, {2}});
  CHECK(p.plain_text == "北京是中国的首都。它有悠久历史。");
}

TEST_CASE("marker-free sentence") {
  auto p = segment_summary("Papaya can taste bitter for several reasons.", grammar());
  REQUIRE(p.sentences.size() == 1);
  CHECK(p.sentences[0].citations.empty());
  CHECK(p.sentences[0].text == "Papaya can taste bitter for several reasons.");
}

TEST_CASE("comma lists and full-width brackets") {
  auto p = segment_summary("A[1,3]。B【2】。", grammar());
  CHECK(cites(p) == std::vector<CitationSet>{{1, 3}, {2}});
  CHECK(texts(p) == std::vector<std::string>{"A。", "B。"});
}

TEST_CASE("markers following the terminator are absorbed by the previous sentence") {
  auto p = segment_summary("First fact.[1][2] Second fact.[3]", grammar());
  CHECK(texts(p) == std::vector<std::string>{"First fact.", "Second fact."});
  CHECK(cites(p) == std::vector<CitationSet>{{1, 2}, {3}});
  CHECK(p.plain_text == "First fact. Second fact.");
}

TEST_CASE("mid-sentence markers attach to the enclosing sentence") {
  auto p = segment_summary("西瓜[1]富含水分。热量低[2]，适合夏天[3]。", grammar());
  CHECK(cites(p) == std::vector<CitationSet>{{1}, {2, 3}});
}

TEST_CASE("abbreviation and enumerator periods do not split") {
  auto p = segment_summary("See e.g. the report by Dr. smith. It has 3.5 points. Next one.", grammar());
  CHECK(texts(p) == std::vector<std::string>{"See e.g. the report by Dr. smith.", "It has 3.5 points.", "Next one."});
  auto q = segment_summary("Steps: 1. wash it. Then cut.", grammar());
  CHECK(q.sentences.size() == 2);
}

TEST_CASE("newlines are hard boundaries and closers stay with their sentence") {
  auto p = segment_summary("他说：“很好。”[1]\n第二行[2]", grammar());
  CHECK(texts(p) == std::vector<std::string>{"他说：“很好。”", "第二行"});
  CHECK(cites(p) == std::vector<CitationSet>{{1}, {2}});
  CHECK(p.plain_text == "他说：“很好。”\n第二行");
}

TEST_CASE("runs of terminators stay in one sentence") {
  auto p = segment_summary("真的吗？！是的……[1]", grammar());
  CHECK(texts(p) == std::vector<std::string>{"真的吗？！", "是的……"});
}

TEST_CASE("empty and whitespace summaries have no sentences") {
  CHECK(segment_summary("", grammar()).sentences.empty());
  CHECK(segment_summary("  \n ", grammar()).sentences.empty());
}

TEST_CASE("markers without text are dropped with a warning") {
  Diagnostics diag;
  auto p = segment_summary("[1][2]", grammar(), &diag);
  CHECK(p.sentences.empty());
  CHECK(diag.count() == 1);
}

TEST_CASE("unparseable bracket constructs are warned about and kept") {
  Diagnostics diag;
  auto p = segment_summary("甲[1-3]。乙[]。", grammar(), &diag);
  CHECK(diag.count() == 2);
  CHECK(texts(p) == std::vector<std::string>{"甲[1-3]。", "乙[]。"});
  CHECK(cites(p) == std::vector<CitationSet>{{}, {}});
}

TEST_CASE("raw spans are ordered and cover the markup") {
  std::string m = "A[1]。B[2]。";
  auto p = segment_summary(m, grammar());
  REQUIRE(p.sentences.size() == 2);
  CHECK(p.sentences[0].raw_span == Span{0, 7});
  CHECK(p.sentences[1].raw_span == Span{7, m.size()});
}

TEST_CASE("strip_markers examples") {
  CHECK(strip_markers("甲[1]。乙[2][3]。", grammar()) == "甲。乙。");
  CHECK(strip_markers("no markers here.", grammar()) == "no markers here.");
  CHECK(strip_markers("x【12】y", grammar()) == "xy");
}

TEST_CASE("custom marker grammar") {
  MarkerConfig c = MarkerConfig::defaults();
  c.patterns = {R"(\^(\d+))"};
  c.suspect_patterns.clear();
  MarkerGrammar g(c);
  auto p = segment_summary("One.^1 Two.^2^3", g);
  CHECK(cites(p) == std::vector<CitationSet>{{1}, {2, 3}});
  c.patterns = {R"(\d+)"};
  CHECK_THROWS_AS(MarkerGrammar{c}, ConfigError);
  CHECK_THROWS_AS(MarkerConfig::from_json(nlohmann::json{{"patterns", nlohmann::json::array()}}), ConfigError);
  auto j = MarkerConfig::from_json(nlohmann::json{{"terminators", "。"}});
  CHECK(j.terminators == "。");
  CHECK(j.patterns == MarkerConfig::defaults().patterns);
}

TEST_CASE("render_markup writes markers after each sentence") {
  std::vector<Sentence> s = {{0, "甲。", {2, 1}, {}, {}}, {1, "乙。", {}, {}, {}}};
  CHECK(render_markup(s) == "甲。[1][2]乙。");
  CHECK(render_markup(s, " ") == "甲。[1][2] 乙。");
}

TEST_CASE("segmenter properties on random markup") {
  gen::Rng rng(17);
  for (int c = 0; c < 1000; ++c) {
    CAPTURE(c);
    auto m = gen::markup(rng);
    CAPTURE(m.markup);
    auto p = segment_summary(m.markup, grammar());

    // Sentences and their citation sets are recovered as written.
    REQUIRE(p.sentences.size() == m.citations.size());
    CHECK(cites(p) == m.citations);

    // Stripping is idempotent and plain_text never grows.
    auto stripped = strip_markers(m.markup, grammar());
    CHECK(strip_markers(stripped, grammar()) == stripped);
    CHECK(p.plain_text.size() <= m.markup.size());
    CHECK(p.plain_text == stripped);

    // The union of sentence citations equals every id the patterns match.
    CitationSet all_ids, union_ids;
    for (const auto& mk : grammar().find_markers(m.markup)) all_ids.insert(mk.ids.begin(), mk.ids.end());
    for (const auto& s : p.sentences) union_ids.insert(s.citations.begin(), s.citations.end());
    CHECK(union_ids == all_ids);

    // Re-serializing and re-parsing keeps the citation sets.
    auto again = segment_summary(render_markup(p.sentences, " "), grammar());
    CHECK(cites(again) == cites(p));

    for (std::size_t i = 0; i < p.sentences.size(); ++i) {
      CHECK(p.sentences[i].index == i);
      CHECK_FALSE(p.sentences[i].text.empty());
      if (i > 0) CHECK(p.sentences[i - 1].raw_span.end <= p.sentences[i].raw_span.begin);
    }
  }
}

#include "citeval/report.hpp"

#include <cstdio>
#include <sstream>

namespace citeval {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json ids(const CitationSet& set) { return json(std::vector<DocId>(set.begin(), set.end())); }

json aggregate_json(const MetricAggregate& m) {
  return {{"mean", optional_number(m.mean)}, {"included", m.included}, {"excluded", m.excluded}};
}

std::string cell(const std::optional<double>& v, double scale) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v * scale);
  return buf;
}

}  // namespace

json to_json(const SampleReport& r) {
  json sentences = json::array();
  for (const auto& s : r.sentences) {
    sentences.push_back({{"index", s.index},
                         {"cited", ids(s.cited)},
                         {"effective", ids(s.effective)},
                         {"oracle", ids(s.oracle)},
                         {"citation_precision", s.citation_precision},
                         {"citation_recall", s.citation_recall},
                         {"ais", s.ais},
                         {"acs", s.acs}});
  }
  return {{"sample_id", r.sample_id},
          {"length", r.length},
          {"self_bleu", optional_number(r.self_bleu)},
          {"claim_precision", r.claim.precision},
          {"claim_recall", r.claim.recall},
          {"claim_f1", r.claim.f1},
          {"citation_precision", optional_number(r.citation_precision)},
          {"citation_recall", optional_number(r.citation_recall)},
          {"citation_f1", optional_number(r.citation_f1)},
          {"ais", optional_number(r.ais)},
          {"acs", optional_number(r.acs)},
          {"sentence_count", r.sentence_count},
          {"masked_sentence_count", r.masked_sentence_count},
          {"sentences", std::move(sentences)}};
}

json to_json(const CorpusReport& c) {
  return {{"sample_count", c.sample_count},
          {"length", aggregate_json(c.length)},
          {"self_bleu", aggregate_json(c.self_bleu)},
          {"claim_precision", aggregate_json(c.claim_precision)},
          {"claim_recall", aggregate_json(c.claim_recall)},
          {"claim_f1", aggregate_json(c.claim_f1)},
          {"claim_f1_of_means", optional_number(c.claim_f1_of_means)},
          {"citation_precision", aggregate_json(c.citation_precision)},
          {"citation_recall", aggregate_json(c.citation_recall)},
          {"citation_f1", aggregate_json(c.citation_f1)},
          {"citation_f1_of_means", optional_number(c.citation_f1_of_means)},
          {"ais", aggregate_json(c.ais)},
          {"acs", aggregate_json(c.acs)},
          {"masked_sentence_count", aggregate_json(c.masked_sentence_count)}};
}

json to_json(const ClaimSplitQuality& q) {
  return {{"sentence_count", q.sentence_count},
          {"redundancy", q.redundancy},
          {"n_splits", q.n_splits},
          {"correctness", q.correctness},
          {"completeness", q.completeness}};
}

json to_json(const AgreementResult& a) {
  return {{"pairs", a.pairs}, {"kappa", a.kappa}, {"accuracy", a.accuracy}};
}

std::string render_table(const CorpusReport& c, std::string_view system_name) {
  // The F1 columns use the harmonic mean of the corpus-level means.
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %6s %9s %6s %6s %6s %6s %6s %6s %6s %6s\n", "System", "Len.", "Self-BLEU",
                "C.Prec", "C.Rec", "C.F1", "Ci.Pre", "Ci.Rec", "Ci.F1", "AIS", "ACS");
  out << line;
  std::snprintf(line, sizeof line, "%-16.16s %6s %9s %6s %6s %6s %6s %6s %6s %6s %6s\n",
                std::string(system_name).c_str(), cell(c.length.mean, 1.0).c_str(),
                cell(c.self_bleu.mean, 1.0).c_str(), cell(c.claim_precision.mean, 100.0).c_str(),
                cell(c.claim_recall.mean, 100.0).c_str(), cell(c.claim_f1_of_means, 100.0).c_str(),
                cell(c.citation_precision.mean, 100.0).c_str(), cell(c.citation_recall.mean, 100.0).c_str(),
                cell(c.citation_f1_of_means, 100.0).c_str(), cell(c.ais.mean, 100.0).c_str(),
                cell(c.acs.mean, 100.0).c_str());
  out << line;
  return out.str();
}

}  // namespace citeval

#include "citeval/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "citeval/bleu.hpp"
#include "citeval/diagnostics.hpp"
#include "citeval/text.hpp"

namespace citeval {

double harmonic_mean(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::size_t summary_length(const ParsedSummary& parsed) { return text::measured_length(parsed.plain_text); }

std::optional<double> self_bleu(const ParsedSummary& parsed) {
  const auto& sentences = parsed.sentences;
  if (sentences.size() < 2) return std::nullopt;
  std::vector<bleu::Tokens> tokens;
  for (const auto& s : sentences) tokens.push_back(text::bleu_tokens(s.text));
  double total = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::vector<bleu::Tokens> refs;
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      if (j != i) refs.push_back(tokens[j]);
    }
    total += bleu::sentence_bleu(tokens[i], refs);
  }
  return total / static_cast<double>(tokens.size());
}

namespace {

std::vector<std::string> sentence_texts(const ParsedSummary& parsed) {
  std::vector<std::string> out;
  for (const auto& s : parsed.sentences) out.push_back(s.text);
  return out;
}

double entailed_fraction(const ParsedSummary& claimed, const std::string& premise, VerificationEngine& engine) {
  std::vector<NliPair> pairs;
  for (const auto& set : engine.split_batch(sentence_texts(claimed))) {
    for (const auto& c : set.claims) pairs.push_back({premise, c});
  }
  auto verdicts = engine.classify_batch(pairs);
  auto hits = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.label == Label::entailment; });
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

std::size_t intersection_size(const CitationSet& a, const CitationSet& b) {
  std::size_t n = 0;
  for (DocId id : a) n += b.count(id);
  return n;
}

}  // namespace

Prf claim_scores(const ParsedSummary& system, const ParsedSummary& reference, VerificationEngine& engine) {
  if (system.sentences.empty() || reference.sentences.empty()) {
    throw std::invalid_argument("claim scores need non-empty system and reference summaries");
  }
  Prf out;
  out.precision = entailed_fraction(system, reference.plain_text, engine);
  out.recall = entailed_fraction(reference, system.plain_text, engine);
  out.f1 = harmonic_mean(out.precision, out.recall);
  return out;
}

AttributionResult evaluate_attribution(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                       std::span<const Document> documents, VerificationEngine& engine) {
  const auto& sentences = parsed.sentences;
  if (mask.size() != sentences.size()) throw std::invalid_argument("citation mask size differs from sentence count");

  AttributionResult result;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  std::size_t ais_hits = 0;
  std::size_t acs_hits = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!mask[i]) continue;
    SentenceAttribution a;
    a.index = i;
    a.cited = sentences[i].citations;
    for (std::size_t j = i; j < sentences.size(); ++j) {
      if (!sentences[j].citations.empty()) {
        a.effective = sentences[j].citations;
        break;
      }
    }
    a.oracle = oracle_citations(sentences[i].text, documents, engine);
    const auto overlap = static_cast<double>(intersection_size(a.effective, a.oracle));
    a.citation_precision = a.effective.empty() ? 0.0 : overlap / static_cast<double>(a.effective.size());
    a.citation_recall = a.oracle.empty() ? 0.0 : overlap / static_cast<double>(a.oracle.size());
    a.ais = is_attributable(sentences[i].text, a.cited, documents, engine);
    a.acs = is_attributable(sentences[i].text, a.oracle, documents, engine);

    precision_sum += a.citation_precision;
    recall_sum += a.citation_recall;
    ais_hits += a.ais ? 1 : 0;
    acs_hits += a.acs ? 1 : 0;
    result.sentences.push_back(std::move(a));
  }

  result.masked_count = result.sentences.size();
  if (result.masked_count == 0) return result;
  const auto n = static_cast<double>(result.masked_count);
  Prf citation{precision_sum / n, recall_sum / n, 0.0};
  citation.f1 = harmonic_mean(citation.precision, citation.recall);
  result.citation = citation;
  result.ais = static_cast<double>(ais_hits) / n;
  result.acs = static_cast<double>(acs_hits) / n;
  return result;
}

std::optional<Prf> citation_scores(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                   std::span<const Document> documents, VerificationEngine& engine) {
  return evaluate_attribution(parsed, mask, documents, engine).citation;
}

std::optional<double> ais_score(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                std::span<const Document> documents, VerificationEngine& engine) {
  return evaluate_attribution(parsed, mask, documents, engine).ais;
}

std::optional<double> acs_score(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                std::span<const Document> documents, VerificationEngine& engine) {
  return evaluate_attribution(parsed, mask, documents, engine).acs;
}

ClaimSplitQuality claimsplit_quality(std::span<const std::string> sentences, VerificationEngine& engine) {
  if (sentences.empty()) throw std::invalid_argument("claim-split quality needs at least one sentence");
  ClaimSplitQuality q;
  q.sentence_count = sentences.size();
  auto sets = engine.split_batch(sentences);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& claims = sets[i].claims;
    const auto total = static_cast<double>(claims.size());
    const auto kept = dedupe_claims(sets[i], engine).claims.size();
    q.redundancy += (total - static_cast<double>(kept)) / total;
    q.n_splits += static_cast<double>(kept);

    std::vector<NliPair> pairs;
    for (const auto& c : claims) pairs.push_back({sentences[i], c});
    auto verdicts = engine.classify_batch(pairs);
    auto entailed = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.label == Label::entailment; });
    q.correctness += static_cast<double>(entailed) / total;

    if (engine.classify(join_premise(claims), sentences[i]).label == Label::entailment) q.completeness += 1.0;
  }
  const auto n = static_cast<double>(sentences.size());
  q.redundancy /= n;
  q.n_splits /= n;
  q.correctness /= n;
  q.completeness /= n;
  return q;
}

double cohens_kappa(const std::vector<bool>& predicted, const std::vector<bool>& human) {
  if (predicted.size() != human.size()) throw std::invalid_argument("kappa needs equally long decision lists");
  if (predicted.empty()) throw std::invalid_argument("kappa needs at least one decision");
  const auto n = static_cast<double>(predicted.size());
  std::size_t agree = 0;
  std::size_t pred_yes = 0;
  std::size_t human_yes = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    agree += predicted[i] == human[i] ? 1 : 0;
    pred_yes += predicted[i] ? 1 : 0;
    human_yes += human[i] ? 1 : 0;
  }
  const double observed = static_cast<double>(agree) / n;
  const double p_pred = static_cast<double>(pred_yes) / n;
  const double p_human = static_cast<double>(human_yes) / n;
  const double expected = p_pred * p_human + (1.0 - p_pred) * (1.0 - p_human);
  if (expected == 1.0) return 1.0;
  return (observed - expected) / (1.0 - expected);
}

AgreementResult citation_agreement(std::span<const Sample> samples, MaskPolicy policy, const MarkerGrammar& grammar,
                                   VerificationEngine& engine) {
  std::vector<bool> predicted;
  std::vector<bool> human;
  for (const auto& sample : samples) {
    auto parsed = segment_summary(sample.summary_markup, grammar);
    if (parsed.sentences.empty()) continue;
    std::vector<CitationSet> human_cites;
    if (sample.human_citations && sample.human_citations->size() == parsed.sentences.size()) {
      human_cites = *sample.human_citations;
    } else {
      for (const auto& s : parsed.sentences) human_cites.push_back(s.citations);
    }
    auto mask = predict_citation_mask(parsed, engine, policy, &human_cites);
    for (std::size_t i = 0; i < parsed.sentences.size(); ++i) {
      if (!mask[i]) continue;
      auto oracle = oracle_citations(parsed.sentences[i].text, sample.documents, engine);
      for (const auto& d : sample.documents) {
        predicted.push_back(oracle.count(d.id) > 0);
        human.push_back(human_cites[i].count(d.id) > 0);
      }
    }
  }
  AgreementResult r;
  r.pairs = predicted.size();
  if (r.pairs == 0) throw std::invalid_argument("no (sentence, document) pairs to compare");
  r.kappa = cohens_kappa(predicted, human);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) agree += predicted[i] == human[i] ? 1 : 0;
  r.accuracy = static_cast<double>(agree) / static_cast<double>(r.pairs);
  return r;
}

SampleReport evaluate_sample(const Sample& sample, std::string_view system_markup, const EvalConfig& config,
                             VerificationEngine& engine, Diagnostics* diag) {
  try {
    SampleReport report;
    report.sample_id = sample.sample_id;
    auto system = segment_summary(system_markup, config.markers, diag);
    auto reference = segment_summary(sample.summary_markup, config.markers, diag);
    report.length = summary_length(system);
    report.self_bleu = self_bleu(system);
    report.sentence_count = system.sentences.size();

    if (diag != nullptr) {
      for (const auto& s : system.sentences) {
        for (DocId id : s.citations) {
          if (!sample.has_document(id)) {
            diag->warn("sample " + sample.sample_id + " sentence " + std::to_string(s.index) +
                       " cites unknown document [" + std::to_string(id) + "]");
          }
        }
      }
    }

    if (system.sentences.empty() || reference.sentences.empty()) {
      if (diag != nullptr) diag->warn("sample " + sample.sample_id + ": empty summary, claim scores set to 0");
    } else {
      report.claim = claim_scores(system, reference, engine);
    }
    if (system.sentences.empty()) return report;

    const std::vector<CitationSet>* human = sample.human_citations ? &*sample.human_citations : nullptr;
    auto mask = predict_citation_mask(system, engine, config.mask_policy, human);
    auto attribution = evaluate_attribution(system, mask, sample.documents, engine);
    report.masked_sentence_count = attribution.masked_count;
    if (attribution.citation) {
      report.citation_precision = attribution.citation->precision;
      report.citation_recall = attribution.citation->recall;
      report.citation_f1 = attribution.citation->f1;
    }
    report.ais = attribution.ais;
    report.acs = attribution.acs;
    report.sentences = std::move(attribution.sentences);
    return report;
  } catch (const SampleError&) {
    throw;
  } catch (const std::exception& e) {
    throw SampleError(sample.sample_id, e.what());
  }
}

namespace {

// Values are summed in sorted order so the mean is independent of the order
// of the reports.
template <typename Get>
MetricAggregate aggregate_field(std::span<const SampleReport> reports, Get get) {
  std::vector<double> values;
  for (const auto& r : reports) {
    if (auto v = get(r)) values.push_back(*v);
  }
  MetricAggregate agg;
  agg.included = values.size();
  agg.excluded = reports.size() - values.size();
  if (values.empty()) return agg;
  std::sort(values.begin(), values.end());
  agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return agg;
}

}  // namespace

CorpusReport aggregate(std::span<const SampleReport> reports) {
  if (reports.empty()) throw std::invalid_argument("cannot aggregate an empty report list");
  using O = std::optional<double>;
  CorpusReport c;
  c.sample_count = reports.size();
  c.length = aggregate_field(reports, [](const SampleReport& r) { return O(static_cast<double>(r.length)); });
  c.self_bleu = aggregate_field(reports, [](const SampleReport& r) { return r.self_bleu; });
  c.claim_precision = aggregate_field(reports, [](const SampleReport& r) { return O(r.claim.precision); });
  c.claim_recall = aggregate_field(reports, [](const SampleReport& r) { return O(r.claim.recall); });
  c.claim_f1 = aggregate_field(reports, [](const SampleReport& r) { return O(r.claim.f1); });
  c.citation_precision = aggregate_field(reports, [](const SampleReport& r) { return r.citation_precision; });
  c.citation_recall = aggregate_field(reports, [](const SampleReport& r) { return r.citation_recall; });
  c.citation_f1 = aggregate_field(reports, [](const SampleReport& r) { return r.citation_f1; });
  c.ais = aggregate_field(reports, [](const SampleReport& r) { return r.ais; });
  c.acs = aggregate_field(reports, [](const SampleReport& r) { return r.acs; });
  c.masked_sentence_count =
      aggregate_field(reports, [](const SampleReport& r) { return O(static_cast<double>(r.masked_sentence_count)); });
  c.claim_f1_of_means = harmonic_mean(*c.claim_precision.mean, *c.claim_recall.mean);
  if (c.citation_precision.mean && c.citation_recall.mean) {
    c.citation_f1_of_means = harmonic_mean(*c.citation_precision.mean, *c.citation_recall.mean);
  }
  return c;
}

}  // namespace citeval

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citeval/corpus.hpp"
#include "citeval/engine.hpp"
#include "citeval/errors.hpp"
#include "citeval/segmenter.hpp"
#include "citeval/verifier.hpp"

namespace citeval {

class Diagnostics;

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 2pr/(p+r), or 0 when both are 0.
double harmonic_mean(double precision, double recall);

/// Characters of the marker-free text for CJK summaries, words otherwise.
std::size_t summary_length(const ParsedSummary& parsed);

/// Mean BLEU-4 of each sentence against the other sentences; nullopt for
/// fewer than two sentences.
std::optional<double> self_bleu(const ParsedSummary& parsed);

/// Precision: share of system sub-claims entailed by the reference text.
/// Recall: share of reference sub-claims entailed by the system text.
Prf claim_scores(const ParsedSummary& system, const ParsedSummary& reference, VerificationEngine& engine);

/// Per-sentence attribution detail, recorded for masked sentences.
struct SentenceAttribution {
  std::size_t index = 0;
  CitationSet cited;
  /// Citations used for precision/recall: own ones, else those of the nearest
  /// later sentence that cites anything.
  CitationSet effective;
  CitationSet oracle;
  double citation_precision = 0.0;
  double citation_recall = 0.0;
  bool ais = false;
  bool acs = false;
};

struct AttributionResult {
  std::vector<SentenceAttribution> sentences;
  std::size_t masked_count = 0;
  std::optional<Prf> citation;
  std::optional<double> ais;
  std::optional<double> acs;
};

/// Citation precision/recall/F1, AIS and ACS over the masked sentences.
/// All fields are nullopt when no sentence is masked.
AttributionResult evaluate_attribution(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                       std::span<const Document> documents, VerificationEngine& engine);

std::optional<Prf> citation_scores(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                   std::span<const Document> documents, VerificationEngine& engine);
std::optional<double> ais_score(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                std::span<const Document> documents, VerificationEngine& engine);
std::optional<double> acs_score(const ParsedSummary& parsed, const std::vector<bool>& mask,
                                std::span<const Document> documents, VerificationEngine& engine);

struct ClaimSplitQuality {
  std::size_t sentence_count = 0;
  double redundancy = 0.0;
  double n_splits = 0.0;
  double correctness = 0.0;
  double completeness = 0.0;
};

/// Quality of the claim-split backend on the given source sentences, each
/// metric averaged over sentences.
ClaimSplitQuality claimsplit_quality(std::span<const std::string> sentences, VerificationEngine& engine);

/// Cohen's kappa of two binary raters; 1 when chance agreement is 1.
double cohens_kappa(const std::vector<bool>& predicted, const std::vector<bool>& human);

struct AgreementResult {
  std::size_t pairs = 0;
  double kappa = 0.0;
  double accuracy = 0.0;
};

/// Agreement between oracle citations and human citations on every
/// (masked reference sentence, document) pair of the samples.
AgreementResult citation_agreement(std::span<const Sample> samples, MaskPolicy policy, const MarkerGrammar& grammar,
                                   VerificationEngine& engine);

struct EvalConfig {
  MaskPolicy mask_policy = MaskPolicy::automatic;
  MarkerGrammar markers;
};

struct SampleReport {
  std::string sample_id;
  std::size_t length = 0;
  std::optional<double> self_bleu;
  Prf claim;
  std::optional<double> citation_precision;
  std::optional<double> citation_recall;
  std::optional<double> citation_f1;
  std::optional<double> ais;
  std::optional<double> acs;
  std::size_t sentence_count = 0;
  std::size_t masked_sentence_count = 0;
  std::vector<SentenceAttribution> sentences;
};

/// Raised by evaluate_sample; the message carries the sample id.
class SampleError : public Error {
 public:
  SampleError(std::string sample_id, const std::string& message)
      : Error("sample " + sample_id + ": " + message), sample_id_(std::move(sample_id)) {}
  const std::string& sample_id() const { return sample_id_; }

 private:
  std::string sample_id_;
};

SampleReport evaluate_sample(const Sample& sample, std::string_view system_markup, const EvalConfig& config,
                             VerificationEngine& engine, Diagnostics* diag = nullptr);

struct MetricAggregate {
  std::optional<double> mean;
  std::size_t included = 0;
  std::size_t excluded = 0;
};

struct CorpusReport {
  std::size_t sample_count = 0;
  MetricAggregate length;
  MetricAggregate self_bleu;
  MetricAggregate claim_precision;
  MetricAggregate claim_recall;
  MetricAggregate claim_f1;
  MetricAggregate citation_precision;
  MetricAggregate citation_recall;
  MetricAggregate citation_f1;
  MetricAggregate ais;
  MetricAggregate acs;
  MetricAggregate masked_sentence_count;
  /// Harmonic mean of the corpus-level mean precision and recall.
  std::optional<double> claim_f1_of_means;
  std::optional<double> citation_f1_of_means;
};

/// Macro average over samples, skipping nulls. Throws on empty input.
CorpusReport aggregate(std::span<const SampleReport> reports);

}  // namespace citeval

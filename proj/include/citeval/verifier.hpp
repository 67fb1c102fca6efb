#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "citeval/backends.hpp"
#include "citeval/corpus.hpp"
#include "citeval/engine.hpp"
#include "citeval/segmenter.hpp"

namespace citeval {

/// How a single document relates to a sentence.
enum class SupportLabel { full, partial, contradiction, none };

enum class MaskPolicy { all_ones, automatic, human };

std::string_view to_string(SupportLabel label);
std::string_view to_string(MaskPolicy policy);
/// Accepts "default", "auto" and "human".
MaskPolicy parse_mask_policy(std::string_view name);

const Document* find_document(std::span<const Document> documents, DocId id);

/// full on sentence-level entailment, contradiction on sentence-level
/// contradiction, partial when the sentence is neutral but some sub-claim is
/// entailed, none otherwise.
SupportLabel classify_support(std::string_view sentence, const Document& document, VerificationEngine& engine);

/// Ids of every document that fully or partially supports the sentence.
CitationSet oracle_citations(std::string_view sentence, std::span<const Document> documents,
                             VerificationEngine& engine);

/// A sentence is attributable to its citations when none of them contradicts
/// it on its own and their concatenation (ascending id order) entails either
/// the sentence or every one of its sub-claims. Ids that name no document
/// contribute nothing; an empty citation set is never attributable.
bool is_attributable(std::string_view sentence, const CitationSet& cited, std::span<const Document> documents,
                     VerificationEngine& engine);

/// Citation mask per sentence.
///  all_ones:  every sentence needs citations.
///  human:     a sentence needs citations iff its human citation set is
///             non-empty; `human` must have one entry per sentence.
///  automatic: a sentence needs citations iff it cites something or it is
///             not entailed by the other sentences that do cite something.
std::vector<bool> predict_citation_mask(const ParsedSummary& parsed, VerificationEngine& engine, MaskPolicy policy,
                                        const std::vector<CitationSet>* human = nullptr);

/// Keep-first removal of sub-claims that mutually entail an earlier kept one.
ClaimSet dedupe_claims(const ClaimSet& claims, VerificationEngine& engine);

}  // namespace citeval

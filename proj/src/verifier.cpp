#include "citeval/verifier.hpp"

#include <stdexcept>

#include "citeval/errors.hpp"
#include "citeval/text.hpp"

namespace citeval {

std::string_view to_string(SupportLabel label) {
  switch (label) {
    case SupportLabel::full:
      return "full";
    case SupportLabel::partial:
      return "partial";
    case SupportLabel::contradiction:
      return "contradiction";
    case SupportLabel::none:
      return "none";
  }
  return "none";
}

std::string_view to_string(MaskPolicy policy) {
  switch (policy) {
    case MaskPolicy::all_ones:
      return "default";
    case MaskPolicy::automatic:
      return "auto";
    case MaskPolicy::human:
      return "human";
  }
  return "default";
}

MaskPolicy parse_mask_policy(std::string_view name) {
  if (name == "default") return MaskPolicy::all_ones;
  if (name == "auto") return MaskPolicy::automatic;
  if (name == "human") return MaskPolicy::human;
  throw ConfigError("unknown mask policy '" + std::string(name) + "' (expected default, auto or human)");
}

const Document* find_document(std::span<const Document> documents, DocId id) {
  for (const auto& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

namespace {

void require_sentence(std::string_view sentence) {
  if (text::trim(sentence).empty()) throw std::invalid_argument("sentence text must be non-empty");
}

// Support labels for several documents at once: one batch for the sentence,
// one for the sub-claims of every document left neutral.
std::vector<SupportLabel> support_labels(std::string_view sentence, std::span<const Document* const> docs,
                                         VerificationEngine& engine) {
  require_sentence(sentence);
  std::vector<NliPair> pairs;
  for (const Document* d : docs) pairs.push_back({d->text, std::string(sentence)});
  auto verdicts = engine.classify_batch(pairs);

  std::vector<SupportLabel> labels(docs.size(), SupportLabel::none);
  std::vector<std::size_t> neutral;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (verdicts[i].label == Label::entailment) {
      labels[i] = SupportLabel::full;
    } else if (verdicts[i].label == Label::contradiction) {
      labels[i] = SupportLabel::contradiction;
    } else {
      neutral.push_back(i);
    }
  }
  if (neutral.empty()) return labels;

  auto claims = engine.split(sentence).claims;
  std::vector<NliPair> claim_pairs;
  for (std::size_t i : neutral) {
    for (const auto& c : claims) claim_pairs.push_back({docs[i]->text, c});
  }
  auto claim_verdicts = engine.classify_batch(claim_pairs);
  for (std::size_t k = 0; k < neutral.size(); ++k) {
    for (std::size_t c = 0; c < claims.size(); ++c) {
      if (claim_verdicts[k * claims.size() + c].label == Label::entailment) {
        labels[neutral[k]] = SupportLabel::partial;
        break;
      }
    }
  }
  return labels;
}

}  // namespace

SupportLabel classify_support(std::string_view sentence, const Document& document, VerificationEngine& engine) {
  const Document* docs[] = {&document};
  return support_labels(sentence, docs, engine).front();
}

CitationSet oracle_citations(std::string_view sentence, std::span<const Document> documents,
                             VerificationEngine& engine) {
  if (documents.empty()) throw std::invalid_argument("oracle citations need at least one document");
  std::vector<const Document*> docs;
  for (const auto& d : documents) docs.push_back(&d);
  auto labels = support_labels(sentence, docs, engine);
  CitationSet ref;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (labels[i] == SupportLabel::full || labels[i] == SupportLabel::partial) ref.insert(docs[i]->id);
  }
  return ref;
}

bool is_attributable(std::string_view sentence, const CitationSet& cited, std::span<const Document> documents,
                     VerificationEngine& engine) {
  require_sentence(sentence);
  std::vector<std::string> texts;
  for (DocId id : cited) {
    if (const Document* d = find_document(documents, id)) texts.push_back(d->text);
  }
  if (texts.empty()) return false;

  std::vector<NliPair> individual;
  for (const auto& t : texts) individual.push_back({t, std::string(sentence)});
  for (const auto& v : engine.classify_batch(individual)) {
    if (v.label == Label::contradiction) return false;
  }

  const std::string premise = join_premise(texts);
  if (engine.classify(premise, sentence).label == Label::entailment) return true;

  auto claims = engine.split(sentence).claims;
  std::vector<NliPair> claim_pairs;
  for (const auto& c : claims) claim_pairs.push_back({premise, c});
  for (const auto& v : engine.classify_batch(claim_pairs)) {
    if (v.label != Label::entailment) return false;
  }
  return true;
}

std::vector<bool> predict_citation_mask(const ParsedSummary& parsed, VerificationEngine& engine, MaskPolicy policy,
                                        const std::vector<CitationSet>* human) {
  const auto& sentences = parsed.sentences;
  if (sentences.empty()) throw std::invalid_argument("citation mask needs at least one sentence");
  std::vector<bool> mask(sentences.size(), true);
  switch (policy) {
    case MaskPolicy::all_ones:
      return mask;
    case MaskPolicy::human:
      if (human == nullptr) throw ConfigError("human mask policy needs human citations");
      if (human->size() != sentences.size()) {
        throw ConfigError("human mask policy needs one human citation set per sentence (" +
                          std::to_string(human->size()) + " for " + std::to_string(sentences.size()) +
                          " sentences)");
      }
      for (std::size_t i = 0; i < sentences.size(); ++i) mask[i] = !(*human)[i].empty();
      return mask;
    case MaskPolicy::automatic:
      break;
  }

  std::vector<NliPair> pairs;
  std::vector<std::size_t> uncited;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!sentences[i].citations.empty()) continue;
    std::vector<std::string> rest;
    for (std::size_t j = 0; j < sentences.size(); ++j) {
      if (j != i && !sentences[j].citations.empty()) rest.push_back(sentences[j].text);
    }
    pairs.push_back({join_premise(rest), sentences[i].text});
    uncited.push_back(i);
  }
  auto verdicts = engine.classify_batch(pairs);
  for (std::size_t k = 0; k < uncited.size(); ++k) mask[uncited[k]] = verdicts[k].label != Label::entailment;
  return mask;
}

ClaimSet dedupe_claims(const ClaimSet& claims, VerificationEngine& engine) {
  if (claims.claims.empty()) throw std::invalid_argument("cannot dedupe an empty claim set");
  ClaimSet out{claims.source, {}};
  for (const auto& claim : claims.claims) {
    bool redundant = false;
    for (const auto& kept : out.claims) {
      if (engine.classify(kept, claim).label == Label::entailment &&
          engine.classify(claim, kept).label == Label::entailment) {
        redundant = true;
        break;
      }
    }
    if (!redundant) out.claims.push_back(claim);
  }
  return out;
}

}  // namespace citeval

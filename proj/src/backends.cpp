#include "citeval/backends.hpp"

#include "citeval/errors.hpp"

namespace citeval {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::entailment:
      return "entailment";
    case Label::contradiction:
      return "contradiction";
    case Label::neutral:
      return "neutral";
  }
  return "neutral";
}

Label parse_label(std::string_view name) {
  if (name == "entailment") return Label::entailment;
  if (name == "contradiction") return Label::contradiction;
  if (name == "neutral") return Label::neutral;
  throw ProtocolError("label '" + std::string(name) + "' is not one of entailment|contradiction|neutral");
}

Verdict EntailmentBackend::classify(std::string premise, std::string hypothesis) {
  NliPair pair{std::move(premise), std::move(hypothesis)};
  auto out = classify_batch(std::span<const NliPair>(&pair, 1));
  if (out.size() != 1) throw ProtocolError("backend returned " + std::to_string(out.size()) + " verdicts for 1 pair");
  return out.front();
}

}  // namespace citeval

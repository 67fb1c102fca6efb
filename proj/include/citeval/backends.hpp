#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace citeval {

enum class Label { entailment, contradiction, neutral };

std::string_view to_string(Label label);
/// Throws ProtocolError for anything outside the three-value set.
Label parse_label(std::string_view name);

struct Verdict {
  Label label = Label::neutral;
  std::optional<double> score;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Sub-claims of one sentence. Never empty; an indivisible sentence is its
/// own single claim.
struct ClaimSet {
  std::string source;
  std::vector<std::string> claims;
  friend bool operator==(const ClaimSet&, const ClaimSet&) = default;
};

struct NliPair {
  std::string premise;
  std::string hypothesis;
};

/// Entailment model: does the premise entail, contradict, or say nothing
/// about the hypothesis. Results are positionally aligned with the input.
class EntailmentBackend {
 public:
  virtual ~EntailmentBackend() = default;
  virtual std::vector<Verdict> classify_batch(std::span<const NliPair> pairs) = 0;
  Verdict classify(std::string premise, std::string hypothesis);
};

/// Claim-split model. May return an empty list for a sentence; the engine
/// turns that into a singleton.
class ClaimSplitBackend {
 public:
  virtual ~ClaimSplitBackend() = default;
  virtual std::vector<std::vector<std::string>> split_batch(std::span<const std::string> sentences) = 0;
};

}  // namespace citeval

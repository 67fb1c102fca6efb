#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "citeval/backends.hpp"

namespace citeval {

class Diagnostics;

/// strict: lookups outside the fixture table raise OracleMissError.
/// lenient: unknown NLI pairs are neutral, unknown sentences split into
/// themselves (with a warning).
enum class OracleMode { strict, lenient };

/// Table-driven backend for both entailment and claim splitting. Keys are
/// NFC-normalized and trimmed; a premise that contains its hypothesis
/// verbatim (in particular an equal one) is always entailment.
///
/// Fixture file layout:
///   {"nli_mode": "strict"|"lenient", "split_mode": "strict"|"lenient",
///    "nli":    [{"premise": ..., "hypothesis": ..., "label": ..., "score": 0.9?}],
///    "claims": [{"sentence": ..., "claims": [...]}]}
class TableOracle : public EntailmentBackend, public ClaimSplitBackend {
 public:
  TableOracle(OracleMode nli_mode = OracleMode::lenient, OracleMode split_mode = OracleMode::lenient,
              Diagnostics* diag = nullptr);

  static TableOracle from_json(const nlohmann::json& fixture, Diagnostics* diag = nullptr);
  static TableOracle from_file(const std::filesystem::path& path, Diagnostics* diag = nullptr);

  void add_verdict(std::string_view premise, std::string_view hypothesis, Verdict verdict);
  void add_claims(std::string_view sentence, std::vector<std::string> claims);

  std::vector<Verdict> classify_batch(std::span<const NliPair> pairs) override;
  std::vector<std::vector<std::string>> split_batch(std::span<const std::string> sentences) override;

  std::size_t nli_entries() const { return nli_.size(); }
  std::size_t claim_entries() const { return claims_.size(); }

 private:
  Verdict lookup(const NliPair& pair) const;

  OracleMode nli_mode_;
  OracleMode split_mode_;
  Diagnostics* diag_;
  std::map<std::pair<std::string, std::string>, Verdict> nli_;
  std::map<std::string, std::vector<std::string>> claims_;
};

}  // namespace citeval

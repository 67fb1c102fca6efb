#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "citeval/metrics.hpp"

namespace citeval {

nlohmann::json to_json(const SampleReport& report);
nlohmann::json to_json(const CorpusReport& report);
nlohmann::json to_json(const ClaimSplitQuality& quality);
nlohmann::json to_json(const AgreementResult& agreement);

/// One-row results table: Len., Self-BLEU, Claim P/R/F1, Citation P/R/F1,
/// AIS, ACS. Fractions are shown as percentages; nulls as "-".
std::string render_table(const CorpusReport& report, std::string_view system_name);

}  // namespace citeval

#include "citeval/oracle.hpp"

#include <fstream>

#include "citeval/diagnostics.hpp"
#include "citeval/errors.hpp"
#include "citeval/text.hpp"

namespace citeval {

namespace {

OracleMode parse_mode(const nlohmann::json& fixture, const char* key) {
  if (!fixture.contains(key)) return OracleMode::lenient;
  auto name = fixture.at(key).get<std::string>();
  if (name == "strict") return OracleMode::strict;
  if (name == "lenient") return OracleMode::lenient;
  throw ConfigError(std::string(key) + " must be strict or lenient, got '" + name + "'");
}

std::string shorten(std::string_view s) {
  constexpr std::size_t kMax = 60;
  if (text::codepoint_count(s) <= kMax) return std::string(s);
  return std::string(s.substr(0, text::prefix_bytes(s, kMax))) + "...";
}

}  // namespace

TableOracle::TableOracle(OracleMode nli_mode, OracleMode split_mode, Diagnostics* diag)
    : nli_mode_(nli_mode), split_mode_(split_mode), diag_(diag) {}

TableOracle TableOracle::from_json(const nlohmann::json& fixture, Diagnostics* diag) {
  if (!fixture.is_object()) throw ConfigError("oracle fixture must be a JSON object");
  TableOracle oracle(parse_mode(fixture, "nli_mode"), parse_mode(fixture, "split_mode"), diag);
  try {
    for (const auto& e : fixture.value("nli", nlohmann::json::array())) {
      Verdict v{parse_label(e.at("label").get<std::string>()), std::nullopt};
      if (e.contains("score")) v.score = e.at("score").get<double>();
      oracle.add_verdict(e.at("premise").get<std::string>(), e.at("hypothesis").get<std::string>(), v);
    }
    for (const auto& e : fixture.value("claims", nlohmann::json::array())) {
      oracle.add_claims(e.at("sentence").get<std::string>(), e.at("claims").get<std::vector<std::string>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed oracle fixture: ") + e.what());
  } catch (const ProtocolError& e) {
    throw ConfigError(std::string("malformed oracle fixture: ") + e.what());
  }
  return oracle;
}

TableOracle TableOracle::from_file(const std::filesystem::path& path, Diagnostics* diag) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read oracle fixture " + path.string());
  nlohmann::json fixture;
  try {
    fixture = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("oracle fixture " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(fixture, diag);
}

void TableOracle::add_verdict(std::string_view premise, std::string_view hypothesis, Verdict verdict) {
  if (verdict.score && (*verdict.score < 0.0 || *verdict.score > 1.0)) {
    throw ConfigError("oracle score outside [0,1]");
  }
  nli_[{text::normalize_key(premise), text::normalize_key(hypothesis)}] = verdict;
}

void TableOracle::add_claims(std::string_view sentence, std::vector<std::string> claims) {
  claims_[text::normalize_key(sentence)] = std::move(claims);
}

Verdict TableOracle::lookup(const NliPair& pair) const {
  auto premise = text::normalize_key(pair.premise);
  auto hypothesis = text::normalize_key(pair.hypothesis);
  if (!hypothesis.empty() && premise.find(hypothesis) != std::string::npos) return {Label::entailment, 1.0};
  auto it = nli_.find({premise, hypothesis});
  if (it != nli_.end()) return it->second;
  if (nli_mode_ == OracleMode::strict) {
    throw OracleMissError("no oracle entry for premise '" + shorten(premise) + "' / hypothesis '" +
                          shorten(hypothesis) + "'");
  }
  return {Label::neutral, std::nullopt};
}

std::vector<Verdict> TableOracle::classify_batch(std::span<const NliPair> pairs) {
  std::vector<Verdict> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(lookup(p));
  return out;
}

std::vector<std::vector<std::string>> TableOracle::split_batch(std::span<const std::string> sentences) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    auto it = claims_.find(text::normalize_key(s));
    if (it != claims_.end()) {
      out.push_back(it->second);
      continue;
    }
    if (split_mode_ == OracleMode::strict) throw OracleMissError("no oracle claim split for '" + shorten(s) + "'");
    if (diag_ != nullptr) diag_->warn("no oracle claim split for '" + shorten(s) + "'; using the sentence itself");
    out.push_back({s});
  }
  return out;
}

}  // namespace citeval

#include "citeval/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "citeval/diagnostics.hpp"
#include "citeval/errors.hpp"
#include "citeval/text.hpp"

namespace citeval {

using nlohmann::json;

std::string content_hash(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex.append(buf, 2);
  }
  return hex;
}

std::string join_premise(std::span<const std::string> parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out.append(parts[i]);
  }
  return out;
}

VerificationEngine::VerificationEngine(std::shared_ptr<EntailmentBackend> nli,
                                       std::shared_ptr<ClaimSplitBackend> splitter, EngineOptions options,
                                       Diagnostics* diag)
    : nli_(std::move(nli)), splitter_(std::move(splitter)), options_(options), diag_(diag) {
  if (!nli_ || !splitter_) throw ConfigError("verification engine needs both an entailment and a claim-split backend");
  if (options_.premise_limit && *options_.premise_limit == 0) throw ConfigError("premise limit must be positive");
}

std::string VerificationEngine::effective_premise(std::string_view premise) {
  if (options_.premise_limit) {
    const std::size_t limit = *options_.premise_limit;
    const std::size_t cut = text::prefix_bytes(premise, limit);
    if (cut < premise.size()) {
      if (diag_ != nullptr) {
        diag_->warn("premise of " + std::to_string(text::codepoint_count(premise)) + " characters truncated to " +
                    std::to_string(limit));
      }
      return std::string(premise.substr(0, cut));
    }
  }
  return std::string(premise);
}

Verdict VerificationEngine::classify(std::string_view premise, std::string_view hypothesis) {
  NliPair pair{std::string(premise), std::string(hypothesis)};
  return classify_batch(std::span<const NliPair>(&pair, 1)).front();
}

std::vector<Verdict> VerificationEngine::classify_batch(std::span<const NliPair> pairs) {
  std::vector<std::optional<Verdict>> results(pairs.size());
  std::vector<std::string> keys(pairs.size());
  std::vector<NliPair> misses;
  std::vector<std::string> miss_keys;
  std::unordered_map<std::string, std::size_t> miss_index;
  std::vector<std::size_t> slot_of(pairs.size(), 0);

  nli_requests_ += pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (text::trim(pairs[i].hypothesis).empty()) throw std::invalid_argument("entailment hypothesis must be non-empty");
    std::string premise = effective_premise(pairs[i].premise);
    if (text::trim(premise).empty()) {
      results[i] = Verdict{Label::neutral, std::nullopt};
      continue;
    }
    keys[i] = content_hash(premise) + ":" + content_hash(pairs[i].hypothesis);
    if (options_.cache_enabled) {
      std::shared_lock lock(mu_);
      auto it = verdicts_.find(keys[i]);
      if (it != verdicts_.end()) {
        results[i] = it->second;
        ++nli_hits_;
        continue;
      }
    }
    auto [it, fresh] = miss_index.try_emplace(keys[i], misses.size());
    if (fresh || !options_.cache_enabled) {
      if (!fresh) it->second = misses.size();
      misses.push_back({std::move(premise), pairs[i].hypothesis});
      miss_keys.push_back(keys[i]);
    }
    slot_of[i] = it->second;
  }

  if (!misses.empty()) {
    auto fetched = nli_->classify_batch(misses);
    if (fetched.size() != misses.size()) {
      throw ProtocolError("entailment backend returned " + std::to_string(fetched.size()) + " verdicts for " +
                          std::to_string(misses.size()) + " pairs");
    }
    nli_backend_ += misses.size();
    if (options_.cache_enabled) {
      std::unique_lock lock(mu_);
      for (std::size_t k = 0; k < misses.size(); ++k) {
        auto [it, inserted] = verdicts_.try_emplace(miss_keys[k], fetched[k]);
        fetched[k] = it->second;
      }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!results[i]) results[i] = fetched[slot_of[i]];
    }
  }

  std::vector<Verdict> out;
  out.reserve(pairs.size());
  for (auto& r : results) out.push_back(*r);
  return out;
}

ClaimSet VerificationEngine::split(std::string_view sentence) {
  std::string s(sentence);
  return split_batch(std::span<const std::string>(&s, 1)).front();
}

std::vector<ClaimSet> VerificationEngine::split_batch(std::span<const std::string> sentences) {
  std::vector<std::optional<std::vector<std::string>>> results(sentences.size());
  std::vector<std::string> keys(sentences.size());
  std::vector<std::string> misses;
  std::vector<std::size_t> miss_slots;

  split_requests_ += sentences.size();
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (text::trim(sentences[i]).empty()) throw std::invalid_argument("claim split needs a non-empty sentence");
    keys[i] = content_hash(sentences[i]);
    if (options_.cache_enabled) {
      std::shared_lock lock(mu_);
      auto it = claims_.find(keys[i]);
      if (it != claims_.end()) {
        results[i] = it->second;
        ++split_hits_;
        continue;
      }
    }
    misses.push_back(sentences[i]);
    miss_slots.push_back(i);
  }

  if (!misses.empty()) {
    auto fetched = splitter_->split_batch(misses);
    if (fetched.size() != misses.size()) {
      throw ProtocolError("claim-split backend returned " + std::to_string(fetched.size()) + " lists for " +
                          std::to_string(misses.size()) + " sentences");
    }
    split_backend_ += misses.size();
    for (std::size_t k = 0; k < misses.size(); ++k) {
      auto& claims = fetched[k];
      std::erase_if(claims, [](const std::string& c) { return text::trim(c).empty(); });
      if (claims.empty()) {
        if (diag_ != nullptr) diag_->warn("empty claim split replaced by the sentence itself");
        claims.push_back(misses[k]);
      }
      const std::size_t i = miss_slots[k];
      if (options_.cache_enabled) {
        std::unique_lock lock(mu_);
        auto [it, inserted] = claims_.try_emplace(keys[i], std::move(claims));
        results[i] = it->second;
      } else {
        results[i] = std::move(claims);
      }
    }
  }

  std::vector<ClaimSet> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) out.push_back({sentences[i], std::move(*results[i])});
  return out;
}

void VerificationEngine::load_cache(const std::filesystem::path& dir) {
  auto read_lines = [](const std::filesystem::path& file, auto&& handle) {
    std::ifstream in(file);
    if (!in) return;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        handle(json::parse(line));
      } catch (const std::exception& e) {
        throw ConfigError("corrupt cache file " + file.string() + " line " + std::to_string(line_no) + ": " +
                          e.what());
      }
    }
  };
  std::unique_lock lock(mu_);
  read_lines(dir / "nli.jsonl", [&](const json& j) {
    Verdict v{parse_label(j.at("label").get<std::string>()), std::nullopt};
    if (j.contains("score") && !j.at("score").is_null()) v.score = j.at("score").get<double>();
    verdicts_.try_emplace(j.at("key").get<std::string>(), v);
  });
  read_lines(dir / "claims.jsonl", [&](const json& j) {
    claims_.try_emplace(j.at("key").get<std::string>(), j.at("claims").get<std::vector<std::string>>());
  });
}

void VerificationEngine::save_cache(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::shared_lock lock(mu_);

  std::vector<const std::pair<const std::string, Verdict>*> verdicts;
  for (const auto& e : verdicts_) verdicts.push_back(&e);
  std::sort(verdicts.begin(), verdicts.end(), [](auto* a, auto* b) { return a->first < b->first; });
  std::ofstream nli(dir / "nli.jsonl", std::ios::trunc);
  for (const auto* e : verdicts) {
    json j = {{"key", e->first}, {"label", to_string(e->second.label)}};
    if (e->second.score) j["score"] = *e->second.score;
    nli << j.dump() << '\n';
  }

  std::vector<const std::pair<const std::string, std::vector<std::string>>*> claims;
  for (const auto& e : claims_) claims.push_back(&e);
  std::sort(claims.begin(), claims.end(), [](auto* a, auto* b) { return a->first < b->first; });
  std::ofstream cl(dir / "claims.jsonl", std::ios::trunc);
  for (const auto* e : claims) cl << json{{"key", e->first}, {"claims", e->second}}.dump() << '\n';

  if (!nli || !cl) throw Error("failed to write cache to " + dir.string());
}

EngineStats VerificationEngine::stats() const {
  return {nli_requests_.load(), nli_hits_.load(), nli_backend_.load(),
          split_requests_.load(), split_hits_.load(), split_backend_.load()};
}

}  // namespace citeval

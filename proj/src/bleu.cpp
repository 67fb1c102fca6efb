#include "citeval/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

namespace citeval::bleu {

namespace {

using NGramCounts = std::map<std::vector<std::string>, int>;

NGramCounts count_ngrams(const Tokens& tokens, std::size_t n) {
  NGramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

double sentence_bleu(const Tokens& hypothesis, const std::vector<Tokens>& references) {
  if (hypothesis.empty() || references.empty()) return 0.0;

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    NGramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : count_ngrams(ref, n)) max_ref[gram] = std::max(max_ref[gram], count);
    }
    int matched = 0;
    int total = 0;
    for (const auto& [gram, count] : count_ngrams(hypothesis, n)) {
      total += count;
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) matched += std::min(count, it->second);
    }
    const double precision = matched == 0 ? kPrecisionFloor : static_cast<double>(matched) / total;
    log_sum += std::log(precision);
  }

  const auto hyp_len = static_cast<long>(hypothesis.size());
  long ref_len = static_cast<long>(references.front().size());
  for (const auto& ref : references) {
    const auto len = static_cast<long>(ref.size());
    const long d = std::labs(len - hyp_len);
    const long best = std::labs(ref_len - hyp_len);
    if (d < best || (d == best && len < ref_len)) ref_len = len;
  }
  const double brevity = hyp_len > ref_len ? 1.0 : std::exp(1.0 - static_cast<double>(ref_len) / hyp_len);
  return 100.0 * brevity * std::exp(log_sum / kMaxOrder);
}

}  // namespace citeval::bleu

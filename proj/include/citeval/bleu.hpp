#pragma once

#include <string>
#include <vector>

namespace citeval::bleu {

inline constexpr int kMaxOrder = 4;
/// Stand-in for a zero modified precision in the geometric mean.
inline constexpr double kPrecisionFloor = 1e-9;

using Tokens = std::vector<std::string>;

/// Sentence-level BLEU-4 on a 0..100 scale: clipped n-gram precisions
/// against all references, uniform geometric mean, brevity penalty against
/// the closest reference length (shorter wins ties). Zero precisions,
/// including orders longer than the hypothesis, use kPrecisionFloor.
double sentence_bleu(const Tokens& hypothesis, const std::vector<Tokens>& references);

}  // namespace citeval::bleu

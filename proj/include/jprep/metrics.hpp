#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jprep {

struct MissingTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One aligned (prediction, target) pair.
struct PredictionRow {
  std::string id;
  std::vector<std::string> prediction;
  std::vector<std::string> target;
};

struct ExactMatchResult {
  double rate = 0.0;
  std::vector<bool> correct;  // aligned with the input rows
};

// Token-sequence equality; by canonical rendering this coincides with
// detokenized-string equality.
ExactMatchResult exact_match(const std::vector<PredictionRow>& rows);

// Corpus-level BLEU with uniform 1..4-gram weights, clipped counts and the
// brevity penalty. A level with zero matches contributes the smoothed
// precision (1 / (2 * total prediction length)) / (level n-gram count); a
// level with no n-grams at all contributes 1 / (2 * total prediction length).
// Empty prediction sets score 0.
double bleu4(const std::vector<PredictionRow>& rows);

// Token-level edit distance divided by max(len(pred), len(target)); 0 when
// both are empty.
double norm_levenshtein(const std::vector<std::string>& pred,
                        const std::vector<std::string>& target);

double mean_norm_levenshtein(const std::vector<PredictionRow>& rows);

struct McNemarResult {
  double p = 1.0;
  std::size_t n00 = 0;  // both wrong
  std::size_t n01 = 0;  // a wrong, b correct
  std::size_t n10 = 0;  // a correct, b wrong
  std::size_t n11 = 0;  // both correct
};

// Paired test over aligned correctness vectors. Exact two-sided binomial
// p = min(1, 2 * P(X <= min(n10, n01))) when the discordant count is below
// 25; otherwise chi-square with continuity correction. Zero discordant
// pairs give p = 1 by convention.
McNemarResult mcnemar(const std::vector<bool>& correct_a,
                      const std::vector<bool>& correct_b);

// Discordant-pair odds ratio n10 / n01, with the Haldane-Anscombe +1/2
// correction applied to both cells when either is zero.
double odds_ratio_paired(std::size_t n10, std::size_t n01);

// Holm step-down adjustment, returned in the input order.
std::vector<double> holm_adjust(const std::vector<double>& pvalues);

}  // namespace jprep

#include "jprep/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

namespace jprep {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::uint64_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens,
                         std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                  tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++counts[std::move(gram)];
  }
  return counts;
}

}  // namespace

ExactMatchResult exact_match(const std::vector<PredictionRow>& rows) {
  ExactMatchResult result;
  result.correct.reserve(rows.size());
  std::size_t hits = 0;
  for (const PredictionRow& row : rows) {
    const bool ok = row.prediction == row.target;
    result.correct.push_back(ok);
    if (ok) ++hits;
  }
  result.rate = rows.empty() ? 0.0
                             : static_cast<double>(hits) /
                                   static_cast<double>(rows.size());
  return result;
}

double bleu4(const std::vector<PredictionRow>& rows) {
  std::array<std::uint64_t, 4> matched{};
  std::array<std::uint64_t, 4> total{};
  std::uint64_t pred_len = 0;
  std::uint64_t ref_len = 0;
  for (const PredictionRow& row : rows) {
    pred_len += row.prediction.size();
    ref_len += row.target.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const NgramCounts pred = count_ngrams(row.prediction, n);
      if (pred.empty()) continue;
      const NgramCounts ref = count_ngrams(row.target, n);
      total[n - 1] += row.prediction.size() - n + 1;
      for (const auto& [gram, count] : pred) {
        const auto it = ref.find(gram);
        if (it != ref.end()) matched[n - 1] += std::min(count, it->second);
      }
    }
  }
  if (pred_len == 0) return 0.0;

  const double smooth = 1.0 / (2.0 * static_cast<double>(pred_len));
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double precision;
    if (total[n] == 0) {
      precision = smooth;
    } else if (matched[n] == 0) {
      precision = smooth / static_cast<double>(total[n]);
    } else {
      precision = static_cast<double>(matched[n]) /
                  static_cast<double>(total[n]);
    }
    log_sum += 0.25 * std::log(precision);
  }
  const double bp =
      pred_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(pred_len));
  return bp * std::exp(log_sum);
}

double norm_levenshtein(const std::vector<std::string>& pred,
                        const std::vector<std::string>& target) {
  if (pred.empty() && target.empty()) return 0.0;
  const std::size_t rows = pred.size();
  const std::size_t cols = target.size();
  std::vector<std::size_t> prev(cols + 1);
  std::vector<std::size_t> cur(cols + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= rows; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= cols; ++j) {
      const std::size_t subst = prev[j - 1] + (pred[i - 1] == target[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[cols]) /
         static_cast<double>(std::max(rows, cols));
}

double mean_norm_levenshtein(const std::vector<PredictionRow>& rows) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const PredictionRow& row : rows) {
    sum += norm_levenshtein(row.prediction, row.target);
  }
  return sum / static_cast<double>(rows.size());
}

McNemarResult mcnemar(const std::vector<bool>& correct_a,
                      const std::vector<bool>& correct_b) {
  if (correct_a.size() != correct_b.size()) {
    throw std::invalid_argument("mcnemar: unaligned correctness vectors");
  }
  McNemarResult result;
  for (std::size_t i = 0; i < correct_a.size(); ++i) {
    if (correct_a[i] && correct_b[i]) {
      ++result.n11;
    } else if (correct_a[i]) {
      ++result.n10;
    } else if (correct_b[i]) {
      ++result.n01;
    } else {
      ++result.n00;
    }
  }
  const std::uint64_t d = result.n10 + result.n01;
  if (d == 0) {
    result.p = 1.0;
  } else if (d < 25) {
    const std::uint64_t k = std::min(result.n10, result.n01);
    std::uint64_t coeff = 1;  // C(d, 0)
    std::uint64_t tail = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
      coeff = coeff * (d - i + 1) / i;
      tail += coeff;
    }
    const double p = 2.0 * static_cast<double>(tail) /
                     std::pow(2.0, static_cast<double>(d));
    result.p = std::min(1.0, p);
  } else {
    const double diff =
        std::abs(static_cast<double>(result.n10) -
                 static_cast<double>(result.n01));
    const double stat = (diff - 1.0) * (diff - 1.0) / static_cast<double>(d);
    result.p = std::erfc(std::sqrt(stat / 2.0));
  }
  return result;
}

double odds_ratio_paired(std::size_t n10, std::size_t n01) {
  if (n10 == 0 || n01 == 0) {
    return (static_cast<double>(n10) + 0.5) /
           (static_cast<double>(n01) + 0.5);
  }
  return static_cast<double>(n10) / static_cast<double>(n01);
}

std::vector<double> holm_adjust(const std::vector<double>& pvalues) {
  const std::size_t m = pvalues.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return pvalues[a] < pvalues[b];
                   });
  std::vector<double> adjusted(m, 0.0);
  double running = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double scaled = std::min(
        1.0, static_cast<double>(m - rank) * pvalues[order[rank]]);
    running = std::max(running, scaled);
    adjusted[order[rank]] = running;
  }
  return adjusted;
}

}  // namespace jprep

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jprep/lexer.hpp"
#include "jprep/metrics.hpp"
#include "jprep/rng.hpp"
#include "support/oracles.hpp"

using namespace jprep;
using jprep::testsupport::levenshtein_oracle;
using jprep::testsupport::mcnemar_enumeration;

namespace {

PredictionRow row(std::vector<std::string> pred, std::vector<std::string> target) {
  PredictionRow r;
  r.prediction = std::move(pred);
  r.target = std::move(target);
  return r;
}

std::vector<std::string> toks(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

// Correctness vectors realizing the requested contingency cells.
void fill_cells(std::size_t n10, std::size_t n01, std::size_t n11,
                std::size_t n00, std::vector<bool>& a, std::vector<bool>& b) {
  a.clear();
  b.clear();
  for (std::size_t i = 0; i < n10; ++i) { a.push_back(true);  b.push_back(false); }
  for (std::size_t i = 0; i < n01; ++i) { a.push_back(false); b.push_back(true);  }
  for (std::size_t i = 0; i < n11; ++i) { a.push_back(true);  b.push_back(true);  }
  for (std::size_t i = 0; i < n00; ++i) { a.push_back(false); b.push_back(false); }
}

}  // namespace

TEST_CASE("exact match counts identical token sequences") {
  const std::vector<PredictionRow> rows = {
      row(toks({"a", "b"}), toks({"a", "b"})),
      row(toks({"a", "b"}), toks({"a", "c"})),
      row(toks({"x"}), toks({"x"})),
      row(toks({"x", "y", "z"}), toks({"x", "y", "z"}))};
  const ExactMatchResult result = exact_match(rows);
  CHECK(result.rate == doctest::Approx(0.75));
  REQUIRE(result.correct.size() == 4);
  CHECK(result.correct[0]);
  CHECK(!result.correct[1]);
  CHECK(result.correct[2]);
  CHECK(result.correct[3]);
  CHECK(exact_match({}).rate == 0.0);
}

TEST_CASE("exact match agrees with rendered-string equality") {
  const std::vector<std::vector<std::string>> seqs = {
      toks({"a", "+", "+", "b"}), toks({"a", "++", "b"}),
      toks({"f", "(", ")", ";"}), toks({"f", "(", ")", ";"})};
  for (const auto& p : seqs) {
    for (const auto& t : seqs) {
      const bool tokens_equal = p == t;
      const bool strings_equal = detokenize(p) == detokenize(t);
      CHECK(tokens_equal == strings_equal);
    }
  }
}

TEST_CASE("bleu is one only for identical sequences of length four or more") {
  CHECK(bleu4({row(toks({"a", "b", "c", "d"}), toks({"a", "b", "c", "d"}))}) ==
        doctest::Approx(1.0));
  CHECK(bleu4({row(toks({"a", "b", "c", "d", "e"}),
                   toks({"a", "b", "c", "d", "e"}))}) == doctest::Approx(1.0));
  // Identical but too short for 4-grams: the smoothed level pulls it under 1.
  const double short_score =
      bleu4({row(toks({"a", "b", "c"}), toks({"a", "b", "c"}))});
  CHECK(short_score < 1.0);
  CHECK(short_score > 0.0);
}

TEST_CASE("bleu matches the hand-computed single-substitution case") {
  const double score = bleu4(
      {row(toks({"a", "b", "c", "d", "f"}), toks({"a", "b", "c", "d", "e"}))});
  CHECK(score == doctest::Approx(std::pow(0.2, 0.25)).epsilon(1e-9));
  CHECK(std::abs(score - 0.6687) < 0.0005);
}

TEST_CASE("bleu on disjoint tokens stays near zero") {
  const double score = bleu4(
      {row(toks({"a", "b", "c", "d", "e"}), toks({"v", "w", "x", "y", "z"}))});
  CHECK(score > 0.0);
  CHECK(score < 0.05);
}

TEST_CASE("bleu pools counts over the corpus") {
  const std::vector<PredictionRow> rows = {
      row(toks({"a", "b", "c", "d"}), toks({"a", "b", "c", "d"})),
      row(toks({"e"}), toks({"f"}))};
  // Pooled unigram precision 4/5; levels 2..4 stay perfect.
  CHECK(bleu4(rows) == doctest::Approx(std::pow(0.8, 0.25)).epsilon(1e-9));
}

TEST_CASE("bleu applies the brevity penalty") {
  const double score =
      bleu4({row(toks({"a", "b"}), toks({"a", "b", "c", "d"}))});
  // Precisions 1, 1, 1/4, 1/4 (smoothed); BP = exp(1 - 4/2).
  CHECK(score == doctest::Approx(std::exp(-1.0) * 0.5).epsilon(1e-9));
}

TEST_CASE("bleu scores zero without prediction tokens") {
  CHECK(bleu4({}) == 0.0);
  CHECK(bleu4({row({}, toks({"a", "b"}))}) == 0.0);
}

TEST_CASE("normalized levenshtein hand cases") {
  CHECK(norm_levenshtein(toks({"a", "b", "c"}), toks({"a", "b", "c"})) == 0.0);
  CHECK(norm_levenshtein(toks({"a", "b", "c"}), toks({"a", "x", "c"})) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(norm_levenshtein({}, toks({"a", "b", "c", "d"})) == 1.0);
  CHECK(norm_levenshtein(toks({"a"}), {}) == 1.0);
  CHECK(norm_levenshtein({}, {}) == 0.0);
  CHECK(norm_levenshtein(toks({"a", "b"}), toks({"b", "a"})) == 1.0);
}

TEST_CASE("normalized levenshtein equals the full-matrix oracle") {
  const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
  DetRng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> p(rng.below(13));
    std::vector<std::string> t(rng.below(13));
    for (auto& tok : p) tok = alphabet[rng.below(alphabet.size())];
    for (auto& tok : t) tok = alphabet[rng.below(alphabet.size())];
    const std::size_t dist = levenshtein_oracle(p, t);
    const double expected =
        p.empty() && t.empty()
            ? 0.0
            : static_cast<double>(dist) /
                  static_cast<double>(std::max(p.size(), t.size()));
    REQUIRE(norm_levenshtein(p, t) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mean normalized levenshtein averages rows") {
  const std::vector<PredictionRow> rows = {
      row(toks({"a", "b", "c"}), toks({"a", "b", "c"})),
      row(toks({"a", "b", "c"}), toks({"a", "x", "c"}))};
  CHECK(mean_norm_levenshtein(rows) == doctest::Approx(1.0 / 6.0));
  CHECK(mean_norm_levenshtein({}) == 0.0);
}

TEST_CASE("mcnemar counts cells from aligned vectors") {
  std::vector<bool> a;
  std::vector<bool> b;
  fill_cells(3, 2, 4, 1, a, b);
  const McNemarResult result = mcnemar(a, b);
  CHECK(result.n10 == 3);
  CHECK(result.n01 == 2);
  CHECK(result.n11 == 4);
  CHECK(result.n00 == 1);
}

TEST_CASE("mcnemar hand cases") {
  std::vector<bool> a;
  std::vector<bool> b;
  fill_cells(10, 0, 0, 0, a, b);
  CHECK(mcnemar(a, b).p == doctest::Approx(2.0 / 1024.0).epsilon(1e-12));

  fill_cells(5, 5, 0, 0, a, b);
  CHECK(mcnemar(a, b).p == 1.0);

  fill_cells(0, 0, 3, 2, a, b);
  CHECK(mcnemar(a, b).p == 1.0);
}

TEST_CASE("mcnemar exact branch matches binomial enumeration") {
  std::vector<bool> a;
  std::vector<bool> b;
  for (std::size_t n10 = 0; n10 <= 20; ++n10) {
    for (std::size_t n01 = 0; n10 + n01 <= 20; ++n01) {
      if (n10 + n01 == 0) continue;
      fill_cells(n10, n01, 2, 1, a, b);
      const double expected = mcnemar_enumeration(n10, n01);
      REQUIRE(std::abs(mcnemar(a, b).p - expected) < 1e-12);
    }
  }
}

TEST_CASE("mcnemar uses the exact branch through 24 discordant pairs") {
  std::vector<bool> a;
  std::vector<bool> b;
  fill_cells(13, 11, 0, 0, a, b);
  CHECK(mcnemar(a, b).p == doctest::Approx(mcnemar_enumeration(13, 11))
                               .epsilon(1e-12));
}

TEST_CASE("mcnemar switches to chi-square at 25 discordant pairs") {
  std::vector<bool> a;
  std::vector<bool> b;
  fill_cells(25, 0, 0, 0, a, b);
  const double p = mcnemar(a, b).p;
  CHECK(p > 0.0);
  CHECK(p < 1e-4);

  // Balanced cells under the continuity correction stay insignificant.
  fill_cells(13, 12, 0, 0, a, b);
  CHECK(mcnemar(a, b).p > 0.5);
}

TEST_CASE("mcnemar is symmetric in its arguments") {
  std::vector<bool> a;
  std::vector<bool> b;
  fill_cells(7, 3, 5, 5, a, b);
  const McNemarResult ab = mcnemar(a, b);
  const McNemarResult ba = mcnemar(b, a);
  CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-15));
  CHECK(ab.n10 == ba.n01);
  CHECK(ab.n01 == ba.n10);
  CHECK(ab.n11 == ba.n11);
  CHECK(ab.n00 == ba.n00);
}

TEST_CASE("mcnemar rejects unaligned vectors") {
  CHECK_THROWS_AS(mcnemar({true}, {true, false}), std::invalid_argument);
}

TEST_CASE("paired odds ratio with and without correction") {
  CHECK(odds_ratio_paired(10, 1) == doctest::Approx(10.0));
  CHECK(odds_ratio_paired(4, 4) == doctest::Approx(1.0));
  CHECK(odds_ratio_paired(10, 0) == doctest::Approx(21.0));
  CHECK(odds_ratio_paired(0, 10) == doctest::Approx(1.0 / 21.0));
  CHECK(odds_ratio_paired(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("holm adjustment matches the worked example") {
  const std::vector<double> adjusted = holm_adjust({0.01, 0.04, 0.03});
  REQUIRE(adjusted.size() == 3);
  CHECK(adjusted[0] == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(adjusted[1] == doctest::Approx(0.06).epsilon(1e-15));
  CHECK(adjusted[2] == doctest::Approx(0.06).epsilon(1e-15));
}

TEST_CASE("holm leaves a single p unchanged and clamps at one") {
  const auto single = holm_adjust({0.2});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(0.2));
  const auto clamped = holm_adjust({0.9, 0.8});
  CHECK(clamped[0] == 1.0);
  CHECK(clamped[1] == 1.0);
  CHECK(holm_adjust({}).empty());
}

TEST_CASE("holm is monotone and never below the raw p") {
  DetRng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> raw(1 + rng.below(8));
    for (auto& p : raw) p = rng.unit();
    const auto adjusted = holm_adjust(raw);
    std::vector<std::size_t> order(raw.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return raw[x] < raw[y]; });
    double prev = 0.0;
    for (const std::size_t i : order) {
      REQUIRE(adjusted[i] >= raw[i]);
      REQUIRE(adjusted[i] <= 1.0);
      REQUIRE(adjusted[i] >= prev);
      prev = adjusted[i];
    }
  }
}

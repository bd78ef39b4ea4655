#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jprep {

struct NgramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Order-3 count model over token sequences. Each sequence is padded with two
// <BOS> tokens at the front; every window (w[i-2], w[i-1], w[i]) increments
// the trigram, bigram and unigram tables. <BOS> never enters the vocabulary.
class NgramModel {
 public:
  static constexpr int kOrder = 3;

  void add_sequence(const std::vector<std::string>& tokens);
  void merge(const NgramModel& other);

  // Throws NgramError on an empty corpus (no sequences or no tokens).
  static NgramModel train(const std::vector<std::vector<std::string>>& corpus);

  // Continuations ranked by count descending, ties broken lexicographically.
  // Uses the trigram table for (prev2, prev1); backs off to the bigram table
  // for prev1 when the trigram context is unseen, then to unigrams. Returns
  // at most k entries; fewer when the level holds fewer continuations.
  std::vector<std::pair<std::string, std::uint64_t>> predict_ranked(
      const std::string& prev2, const std::string& prev1, std::size_t k) const;

  // Replacement-token choice: the top-ranked continuation unless it equals
  // `original`, else the second. Falls through trigram -> bigram -> unigram
  // ranks; when no level offers a non-original candidate, returns a
  // deterministic pseudo-random vocabulary token != original seeded by
  // (prev2, prev1, original). Never returns `original`.
  std::string rtd_choice(const std::string& prev2, const std::string& prev1,
                         const std::string& original) const;

  std::uint64_t total_windows() const { return total_windows_; }
  const std::set<std::string>& vocab() const { return vocab_; }

  // JSON serialization with a format-version header. Loading validates the
  // header and the cross-level count consistency invariants.
  void save(std::ostream& out) const;
  static NgramModel load(std::istream& in);

  using CountMap = std::map<std::string, std::uint64_t>;
  const std::map<std::pair<std::string, std::string>, CountMap>& trigrams()
      const {
    return trigrams_;
  }
  const std::map<std::string, CountMap>& bigrams() const { return bigrams_; }
  const CountMap& unigrams() const { return unigrams_; }

 private:
  void validate() const;

  std::map<std::pair<std::string, std::string>, CountMap> trigrams_;
  std::map<std::string, CountMap> bigrams_;
  CountMap unigrams_;
  std::set<std::string> vocab_;
  std::uint64_t total_windows_ = 0;
};

}  // namespace jprep

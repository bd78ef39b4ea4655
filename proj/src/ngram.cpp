#include "jprep/ngram.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "jprep/rng.hpp"
#include "jprep/token.hpp"

namespace jprep {

namespace {

constexpr std::string_view kFormatName = "jprep-ngram";
constexpr int kFormatVersion = 1;

std::vector<std::pair<std::string, std::uint64_t>> rank(
    const NgramModel::CountMap& counts, std::size_t k) {
  std::vector<std::pair<std::string, std::uint64_t>> out(counts.begin(),
                                                         counts.end());
  // CountMap iterates in lexicographic order, so a stable sort by count
  // descending leaves ties lexicographic.
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace

void NgramModel::add_sequence(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return;
  const std::string bos{kBosToken};
  std::vector<const std::string*> padded;
  padded.reserve(tokens.size() + 2);
  padded.push_back(&bos);
  padded.push_back(&bos);
  for (const auto& t : tokens) padded.push_back(&t);
  for (std::size_t i = 2; i < padded.size(); ++i) {
    const std::string& p2 = *padded[i - 2];
    const std::string& p1 = *padded[i - 1];
    const std::string& w = *padded[i];
    ++trigrams_[{p2, p1}][w];
    ++bigrams_[p1][w];
    ++unigrams_[w];
    vocab_.insert(w);
    ++total_windows_;
  }
}

void NgramModel::merge(const NgramModel& other) {
  for (const auto& [ctx, counts] : other.trigrams_) {
    auto& mine = trigrams_[ctx];
    for (const auto& [w, c] : counts) mine[w] += c;
  }
  for (const auto& [ctx, counts] : other.bigrams_) {
    auto& mine = bigrams_[ctx];
    for (const auto& [w, c] : counts) mine[w] += c;
  }
  for (const auto& [w, c] : other.unigrams_) unigrams_[w] += c;
  vocab_.insert(other.vocab_.begin(), other.vocab_.end());
  total_windows_ += other.total_windows_;
}

NgramModel NgramModel::train(
    const std::vector<std::vector<std::string>>& corpus) {
  NgramModel model;
  for (const auto& seq : corpus) model.add_sequence(seq);
  if (model.total_windows_ == 0) {
    throw NgramError("empty corpus: no tokens to train on");
  }
  return model;
}

std::vector<std::pair<std::string, std::uint64_t>> NgramModel::predict_ranked(
    const std::string& prev2, const std::string& prev1, std::size_t k) const {
  if (const auto it = trigrams_.find({prev2, prev1}); it != trigrams_.end()) {
    return rank(it->second, k);
  }
  if (const auto it = bigrams_.find(prev1); it != bigrams_.end()) {
    return rank(it->second, k);
  }
  return rank(unigrams_, k);
}

std::string NgramModel::rtd_choice(const std::string& prev2,
                                   const std::string& prev1,
                                   const std::string& original) const {
  auto pick = [&](const CountMap& counts) -> std::string {
    const auto ranked = rank(counts, 2);
    if (!ranked.empty() && ranked[0].first != original) return ranked[0].first;
    if (ranked.size() >= 2) return ranked[1].first;
    return {};
  };
  if (const auto it = trigrams_.find({prev2, prev1}); it != trigrams_.end()) {
    if (auto choice = pick(it->second); !choice.empty()) return choice;
  }
  if (const auto it = bigrams_.find(prev1); it != bigrams_.end()) {
    if (auto choice = pick(it->second); !choice.empty()) return choice;
  }
  if (auto choice = pick(unigrams_); !choice.empty()) return choice;

  // No level offers a candidate other than `original`: draw a deterministic
  // pseudo-random vocabulary token. A single-token vocabulary degenerates to
  // the reserved padding token, which is never corpus text.
  std::uint64_t seed = fnv1a64(prev2);
  seed = fnv1a64("\x1f", seed);
  seed = fnv1a64(prev1, seed);
  seed = fnv1a64("\x1f", seed);
  seed = fnv1a64(original, seed);
  DetRng rng(seed);
  std::vector<std::string_view> candidates;
  candidates.reserve(vocab_.size());
  for (const auto& w : vocab_) {
    if (w != original) candidates.push_back(w);
  }
  if (candidates.empty()) return std::string(kBosToken);
  return std::string(candidates[rng.below(candidates.size())]);
}

void NgramModel::save(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["order"] = kOrder;
  j["windows"] = total_windows_;
  auto unigrams = nlohmann::ordered_json::array();
  for (const auto& [w, c] : unigrams_) {
    unigrams.push_back(nlohmann::ordered_json::array({w, c}));
  }
  j["unigrams"] = std::move(unigrams);
  auto bigrams = nlohmann::ordered_json::array();
  for (const auto& [ctx, counts] : bigrams_) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& [w, c] : counts) {
      row.push_back(nlohmann::ordered_json::array({w, c}));
    }
    bigrams.push_back(nlohmann::ordered_json::array({ctx, std::move(row)}));
  }
  j["bigrams"] = std::move(bigrams);
  auto trigrams = nlohmann::ordered_json::array();
  for (const auto& [ctx, counts] : trigrams_) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& [w, c] : counts) {
      row.push_back(nlohmann::ordered_json::array({w, c}));
    }
    trigrams.push_back(nlohmann::ordered_json::array(
        {ctx.first, ctx.second, std::move(row)}));
  }
  j["trigrams"] = std::move(trigrams);
  out << j.dump() << '\n';
}

NgramModel NgramModel::load(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw NgramError(std::string("model parse failure: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kFormatName) {
    throw NgramError("not an n-gram model file");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw NgramError("unsupported model version");
  }
  if (j.value("order", -1) != kOrder) {
    throw NgramError("unsupported model order");
  }
  NgramModel model;
  try {
    model.total_windows_ = j.at("windows").get<std::uint64_t>();
    for (const auto& row : j.at("unigrams")) {
      model.unigrams_[row.at(0).get<std::string>()] =
          row.at(1).get<std::uint64_t>();
    }
    for (const auto& row : j.at("bigrams")) {
      auto& counts = model.bigrams_[row.at(0).get<std::string>()];
      for (const auto& cell : row.at(1)) {
        counts[cell.at(0).get<std::string>()] = cell.at(1).get<std::uint64_t>();
      }
    }
    for (const auto& row : j.at("trigrams")) {
      auto& counts = model.trigrams_[{row.at(0).get<std::string>(),
                                      row.at(1).get<std::string>()}];
      for (const auto& cell : row.at(2)) {
        counts[cell.at(0).get<std::string>()] = cell.at(1).get<std::uint64_t>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw NgramError(std::string("malformed model tables: ") + e.what());
  }
  for (const auto& [w, c] : model.unigrams_) {
    if (c == 0) throw NgramError("zero unigram count");
    model.vocab_.insert(w);
  }
  model.validate();
  return model;
}

void NgramModel::validate() const {
  if (vocab_.count(std::string(kBosToken))) {
    throw NgramError("padding token leaked into the vocabulary");
  }
  // Level consistency: every window contributes one count at each level, so
  // per-context totals must agree across levels.
  std::map<std::string, std::uint64_t> bigram_context_from_tri;
  std::uint64_t tri_total = 0;
  for (const auto& [ctx, counts] : trigrams_) {
    std::uint64_t sum = 0;
    for (const auto& [w, c] : counts) {
      if (c == 0) throw NgramError("zero trigram count");
      sum += c;
    }
    bigram_context_from_tri[ctx.second] += sum;
    tri_total += sum;
  }
  std::map<std::string, std::uint64_t> unigram_from_bi;
  for (const auto& [ctx, counts] : bigrams_) {
    std::uint64_t sum = 0;
    for (const auto& [w, c] : counts) {
      if (c == 0) throw NgramError("zero bigram count");
      sum += c;
      unigram_from_bi[w] += c;
    }
    const auto it = bigram_context_from_tri.find(ctx);
    if (it == bigram_context_from_tri.end() || it->second != sum) {
      throw NgramError("bigram/trigram context totals disagree");
    }
  }
  if (bigram_context_from_tri.size() != bigrams_.size()) {
    throw NgramError("bigram/trigram context sets disagree");
  }
  std::uint64_t uni_total = 0;
  for (const auto& [w, c] : unigrams_) {
    uni_total += c;
    const auto it = unigram_from_bi.find(w);
    if (it == unigram_from_bi.end() || it->second != c) {
      throw NgramError("unigram/bigram totals disagree");
    }
  }
  if (unigram_from_bi.size() != unigrams_.size() || uni_total != tri_total ||
      uni_total != total_windows_) {
    throw NgramError("window totals disagree across levels");
  }
}

}  // namespace jprep

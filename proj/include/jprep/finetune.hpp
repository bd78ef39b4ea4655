#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "jprep/clean.hpp"
#include "jprep/objectives.hpp"

namespace jprep {

enum class FinetuneTask { Bugfix, Summarization, Completion };

std::string_view finetune_task_name(FinetuneTask task);
std::optional<FinetuneTask> finetune_task_from_name(std::string_view name);

enum class SplitLabel { Train, Validation, Test };

std::string_view split_label_name(SplitLabel label);
std::optional<SplitLabel> split_label_from_name(std::string_view name);

struct FinetuneInstance {
  std::string id;
  FinetuneTask task;
  std::vector<std::string> input;
  std::vector<std::string> target;
  std::optional<SplitLabel> split;
};

// One-line bug fix pair as imported from the external dataset. The buggy
// method carries a <START_BUG> ... <END_BUG> marker pair around the line.
struct BugfixPair {
  std::string id;
  std::string buggy_with_context;
  std::string fixed_line;
  std::string buggy_method;
  std::string fixed_method;
};

enum class BugfixReject { MissingMarkers, ParseRejection, PretrainDuplicate };

std::string_view bugfix_reject_name(BugfixReject reason);

struct BugfixRejectEntry {
  std::string id;
  BugfixReject reason;
};

inline constexpr std::string_view kStartBugMarker = "<START_BUG>";
inline constexpr std::string_view kEndBugMarker = "<END_BUG>";

// Strips the marker pair from the buggy method (rejecting pairs where the
// markers are absent, repeated or out of order), tokenizes both methods
// canonically, and drops pairs whose buggy-method hash appears in
// `pretrain_hashes`. The class-level context and fixed-line fields are
// ignored: instances carry only the two methods.
std::vector<FinetuneInstance> build_bugfix(
    const std::vector<BugfixPair>& pairs,
    const std::unordered_set<std::string>& pretrain_hashes,
    std::vector<BugfixRejectEntry>* rejects = nullptr);

struct SampleTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform sample of `size` records without replacement, in record order.
// input = method tokens, target = summary tokens.
std::vector<FinetuneInstance> build_summarization(
    const std::vector<MethodRecord>& records, std::size_t size,
    std::uint64_t seed);

// One instance per block with at most three top-level statements: the block
// (braces included) is replaced by a single <BLOCK> token; the target is the
// block itself. Instances whose input exceeds `max_tokens` are dropped, as
// are records with no eligible block.
std::vector<FinetuneInstance> build_completion(
    const std::vector<ParsedRecord>& records, std::size_t max_tokens = 512);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

// train = round(train_frac * n), validation = round(val_frac * n), test =
// remainder. Half-up rounding; reproduces 22,321/2,790/2,790 at n = 27,901.
SplitSizes split_sizes(std::size_t n, double train_frac = 0.8,
                       double val_frac = 0.1);

// Labels every instance via one seeded permutation over the sorted instance
// ids, so the result does not depend on input order. Ids must be unique.
void assign_splits(std::vector<FinetuneInstance>& instances,
                   std::uint64_t seed, double train_frac = 0.8,
                   double val_frac = 0.1);

}  // namespace jprep

#include "jprep/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "jprep/lexer.hpp"
#include "jprep/rng.hpp"

namespace jprep {

namespace {

// Removes one marker occurrence, returning false when absent or repeated.
bool take_marker(std::string& text, std::string_view marker,
                 std::size_t* pos_out) {
  const std::size_t pos = text.find(marker);
  if (pos == std::string::npos) return false;
  if (text.find(marker, pos + marker.size()) != std::string::npos) return false;
  text.replace(pos, marker.size(), " ");
  *pos_out = pos;
  return true;
}

std::optional<std::vector<std::string>> lex_texts(const std::string& source) {
  try {
    return token_texts(tokenize(source));
  } catch (const LexError&) {
    return std::nullopt;
  }
}

void reject(std::vector<BugfixRejectEntry>* rejects, const std::string& id,
            BugfixReject reason) {
  if (rejects) rejects->push_back({id, reason});
}

}  // namespace

std::string_view finetune_task_name(FinetuneTask task) {
  switch (task) {
    case FinetuneTask::Bugfix: return "bugfix";
    case FinetuneTask::Summarization: return "summarization";
    case FinetuneTask::Completion: return "completion";
  }
  return "?";
}

std::optional<FinetuneTask> finetune_task_from_name(std::string_view name) {
  if (name == "bugfix") return FinetuneTask::Bugfix;
  if (name == "summarization") return FinetuneTask::Summarization;
  if (name == "completion") return FinetuneTask::Completion;
  return std::nullopt;
}

std::string_view split_label_name(SplitLabel label) {
  switch (label) {
    case SplitLabel::Train: return "train";
    case SplitLabel::Validation: return "validation";
    case SplitLabel::Test: return "test";
  }
  return "?";
}

std::optional<SplitLabel> split_label_from_name(std::string_view name) {
  if (name == "train") return SplitLabel::Train;
  if (name == "validation") return SplitLabel::Validation;
  if (name == "test") return SplitLabel::Test;
  return std::nullopt;
}

std::string_view bugfix_reject_name(BugfixReject reason) {
  switch (reason) {
    case BugfixReject::MissingMarkers: return "missing_markers";
    case BugfixReject::ParseRejection: return "parse_error";
    case BugfixReject::PretrainDuplicate: return "pretrain_duplicate";
  }
  return "?";
}

std::vector<FinetuneInstance> build_bugfix(
    const std::vector<BugfixPair>& pairs,
    const std::unordered_set<std::string>& pretrain_hashes,
    std::vector<BugfixRejectEntry>* rejects) {
  std::vector<FinetuneInstance> out;
  out.reserve(pairs.size());
  for (const BugfixPair& pair : pairs) {
    std::string buggy = pair.buggy_method;
    std::size_t start_pos = 0;
    std::size_t end_pos = 0;
    if (!take_marker(buggy, kStartBugMarker, &start_pos) ||
        !take_marker(buggy, kEndBugMarker, &end_pos) || end_pos < start_pos) {
      reject(rejects, pair.id, BugfixReject::MissingMarkers);
      continue;
    }
    const auto buggy_tokens = lex_texts(buggy);
    const auto fixed_tokens = lex_texts(pair.fixed_method);
    if (!buggy_tokens || buggy_tokens->empty() || !fixed_tokens ||
        fixed_tokens->empty()) {
      reject(rejects, pair.id, BugfixReject::ParseRejection);
      continue;
    }
    if (pretrain_hashes.count(method_hash(*buggy_tokens)) != 0) {
      reject(rejects, pair.id, BugfixReject::PretrainDuplicate);
      continue;
    }
    FinetuneInstance inst;
    inst.id = pair.id;
    inst.task = FinetuneTask::Bugfix;
    inst.input = *buggy_tokens;
    inst.target = *fixed_tokens;
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<FinetuneInstance> build_summarization(
    const std::vector<MethodRecord>& records, std::size_t size,
    std::uint64_t seed) {
  if (size > records.size()) {
    throw SampleTooLarge("sample size " + std::to_string(size) +
                         " exceeds record count " +
                         std::to_string(records.size()));
  }
  DetRng rng(seed);
  const std::vector<std::size_t> picks =
      rng.sample_indices(records.size(), size);
  std::vector<FinetuneInstance> out;
  out.reserve(size);
  for (const std::size_t i : picks) {
    FinetuneInstance inst;
    inst.id = records[i].id;
    inst.task = FinetuneTask::Summarization;
    inst.input = records[i].method_tokens;
    inst.target = records[i].summary_tokens;
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<FinetuneInstance> build_completion(
    const std::vector<ParsedRecord>& records, std::size_t max_tokens) {
  std::vector<FinetuneInstance> out;
  for (const ParsedRecord& rec : records) {
    std::size_t k = 0;
    for (const Block& block : rec.shape.blocks) {
      if (block.top_level_statement_count > 3) continue;
      FinetuneInstance inst;
      inst.id = rec.record.id + "/blk" + std::to_string(k++);
      inst.task = FinetuneTask::Completion;
      inst.input = rec.record.method_tokens;
      inst.input.erase(
          inst.input.begin() + static_cast<std::ptrdiff_t>(block.span.first),
          inst.input.begin() + static_cast<std::ptrdiff_t>(block.span.last + 1));
      inst.input.insert(
          inst.input.begin() + static_cast<std::ptrdiff_t>(block.span.first),
          std::string(kBlockToken));
      if (inst.input.size() > max_tokens) continue;
      inst.target.reserve(block.span.last - block.span.first + 1);
      for (std::size_t i = block.span.first; i <= block.span.last; ++i) {
        inst.target.push_back(rec.method_lex[i].text);
      }
      out.push_back(std::move(inst));
    }
  }
  return out;
}

SplitSizes split_sizes(std::size_t n, double train_frac, double val_frac) {
  SplitSizes sizes;
  sizes.train = static_cast<std::size_t>(
      std::llround(train_frac * static_cast<double>(n)));
  sizes.train = std::min(sizes.train, n);
  sizes.validation = static_cast<std::size_t>(
      std::llround(val_frac * static_cast<double>(n)));
  sizes.validation = std::min(sizes.validation, n - sizes.train);
  sizes.test = n - sizes.train - sizes.validation;
  return sizes;
}

void assign_splits(std::vector<FinetuneInstance>& instances,
                   std::uint64_t seed, double train_frac, double val_frac) {
  std::vector<std::string> ids;
  ids.reserve(instances.size());
  for (const FinetuneInstance& inst : instances) ids.push_back(inst.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw std::invalid_argument("duplicate instance id in split input");
  }
  DetRng rng(seed);
  rng.shuffle(ids);

  const SplitSizes sizes = split_sizes(ids.size(), train_frac, val_frac);
  std::map<std::string, SplitLabel> labels;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    SplitLabel label = SplitLabel::Test;
    if (i < sizes.train) {
      label = SplitLabel::Train;
    } else if (i < sizes.train + sizes.validation) {
      label = SplitLabel::Validation;
    }
    labels.emplace(std::move(ids[i]), label);
  }
  for (FinetuneInstance& inst : instances) {
    inst.split = labels.at(inst.id);
  }
}

}  // namespace jprep

#include "jprep/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "jprep/clean.hpp"
#include "jprep/finetune.hpp"
#include "jprep/io.hpp"
#include "jprep/lexer.hpp"
#include "jprep/metrics.hpp"
#include "jprep/mutation.hpp"
#include "jprep/ngram.hpp"
#include "jprep/objectives.hpp"
#include "jprep/rng.hpp"

namespace jprep {

namespace {

std::string trim_copy(std::string_view text) {
  const std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const std::size_t end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string::npos) j = text.size();
    std::string item = trim_copy(text.substr(i, j - i));
    if (!item.empty()) out.push_back(std::move(item));
    i = j + 1;
  }
  return out;
}

std::uint64_t parse_u64(const std::string& value, const std::string& what) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid " + what + ": \"" + value + "\"");
  }
  return out;
}

double parse_double(const std::string& value, const std::string& what) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid " + what + ": \"" + value + "\"");
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& what) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid " + what + ": \"" + value + "\"");
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void validate_common(const PipelineOptions& options) {
  if (options.workers < 1) throw ConfigError("workers must be >= 1");
  if (!(options.mask_rate > 0.0 && options.mask_rate < 1.0)) {
    throw ConfigError("mask rate must lie in (0, 1)");
  }
  if (options.max_tokens == 0) throw ConfigError("max tokens must be > 0");
  if (options.train_frac < 0.0 || options.val_frac < 0.0 ||
      options.train_frac + options.val_frac > 1.0 + 1e-12) {
    throw ConfigError(
        "split fractions must be nonnegative and leave a nonnegative test "
        "share");
  }
}

// Index-order-preserving map over [0, n); worker count never changes the
// result because every element is computed from its index alone.
template <typename Fn>
auto parallel_map(std::size_t n, int workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Out = decltype(fn(std::size_t{}));
  std::vector<Out> out(n);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto work = [&] {
    try {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        out[i] = fn(i);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  const int thread_count =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
  threads.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) threads.emplace_back(work);
  for (auto& thread : threads) thread.join();
  if (error) std::rethrow_exception(error);
  return out;
}

MethodRecord record_from_json(const json& obj, const std::string& context) {
  MethodRecord rec;
  rec.id = require_string(obj, "id", context);
  const std::string method = require_string(obj, "method", context);
  const std::string summary = require_string(obj, "summary", context);
  rec.hash = require_string(obj, "hash", context);
  try {
    rec.method_tokens = token_texts(tokenize(method));
  } catch (const LexError& e) {
    throw SchemaError(context + ": method does not lex: " + e.what());
  }
  rec.summary_tokens = split_tokens(summary);
  if (rec.method_tokens.empty() || rec.summary_tokens.empty()) {
    throw SchemaError(context + ": empty method or summary");
  }
  if (method_hash(rec.method_tokens) != rec.hash) {
    throw SchemaError(context + ": stored hash does not match the method");
  }
  if (const auto it = obj.find("links"); it != obj.end()) {
    if (!it->is_array()) {
      throw SchemaError(context + ": \"links\" must be an array");
    }
    for (const auto& link : *it) {
      if (!link.is_string()) {
        throw SchemaError(context + ": \"links\" must hold strings");
      }
      rec.link_table.push_back(link.get<std::string>());
    }
  }
  return rec;
}

std::vector<MethodRecord> load_records(const std::filesystem::path& path) {
  const std::vector<json> rows = read_jsonl(path);
  std::vector<MethodRecord> records;
  records.reserve(rows.size());
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string context = path.string() + ": row " + std::to_string(i + 1);
    records.push_back(record_from_json(rows[i], context));
    if (!ids.insert(records.back().id).second) {
      throw SchemaError(context + ": duplicate record id");
    }
  }
  return records;
}

std::vector<ParsedRecord> parse_records(std::vector<MethodRecord> records,
                                        const std::string& file) {
  std::vector<ParsedRecord> out;
  out.reserve(records.size());
  for (MethodRecord& rec : records) {
    const std::string id = rec.id;
    try {
      out.push_back(parse_record(std::move(rec)));
    } catch (const ParseError& e) {
      throw SchemaError(file + ": record \"" + id +
                        "\" is not a parseable method: " + e.what());
    } catch (const LexError& e) {
      throw SchemaError(file + ": record \"" + id + "\" does not lex: " +
                        e.what());
    }
  }
  return out;
}

std::unordered_set<std::string> load_hashes(const std::filesystem::path& path) {
  std::unordered_set<std::string> hashes;
  for (const MethodRecord& rec : load_records(path)) hashes.insert(rec.hash);
  return hashes;
}

void require_paths(const PipelineOptions& options, bool need_input,
                   bool need_output, const std::string& command) {
  if (need_input && options.input.empty()) {
    throw ConfigError(command + " requires --input");
  }
  if (need_output && options.output.empty()) {
    throw ConfigError(command + " requires --output");
  }
}

std::vector<std::string> tokens_for_task(FinetuneTask task,
                                         const std::string& text) {
  if (task == FinetuneTask::Summarization) return split_tokens(text);
  try {
    return token_texts(tokenize(text));
  } catch (const LexError&) {
    return split_tokens(text);
  }
}

struct DatasetEntry {
  std::string id;
  FinetuneTask task = FinetuneTask::Bugfix;
  std::string target;
};

std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path) {
  const std::vector<json> rows = read_jsonl(path);
  std::vector<DatasetEntry> out;
  out.reserve(rows.size());
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string context = path.string() + ": row " + std::to_string(i + 1);
    DatasetEntry entry;
    entry.id = require_string(rows[i], "id", context);
    const std::string task = require_string(rows[i], "task", context);
    const auto parsed = finetune_task_from_name(task);
    if (!parsed) throw SchemaError(context + ": unknown task \"" + task + "\"");
    entry.task = *parsed;
    entry.target = require_string(rows[i], "target", context);
    if (!ids.insert(entry.id).second) {
      throw SchemaError(context + ": duplicate dataset id");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

json finetune_row(const FinetuneInstance& inst) {
  json row = json::object();
  row["id"] = inst.id;
  row["task"] = std::string(finetune_task_name(inst.task));
  row["input"] = join_tokens(inst.input);
  row["target"] = join_tokens(inst.target);
  if (inst.split) row["split"] = std::string(split_label_name(*inst.split));
  return row;
}

}  // namespace

void apply_config_file(PipelineOptions& options, const std::string& path,
                       const std::set<std::string>& overridden) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim_copy(line);
    if (text.empty() || text[0] == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim_copy(text.substr(0, eq));
    const std::string value = trim_copy(text.substr(eq + 1));
    if (overridden.count(key) != 0) continue;
    if (key == "seed") {
      options.seed = parse_u64(value, "seed");
    } else if (key == "workers") {
      options.workers = static_cast<int>(parse_u64(value, "workers"));
    } else if (key == "mask_rate") {
      options.mask_rate = parse_double(value, "mask_rate");
    } else if (key == "max_tokens") {
      options.max_tokens = parse_u64(value, "max_tokens");
    } else if (key == "objectives") {
      options.objectives = value;
    } else if (key == "train_frac") {
      options.train_frac = parse_double(value, "train_frac");
    } else if (key == "val_frac") {
      options.val_frac = parse_double(value, "val_frac");
    } else if (key == "size") {
      options.size = parse_u64(value, "size");
    } else if (key == "imf_all") {
      options.imf_all = parse_bool(value, "imf_all");
    } else {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": unknown config key \"" + key + "\"");
    }
  }
}

std::string config_digest(const PipelineOptions& options) {
  std::string text;
  text += "imf_all=" + std::string(options.imf_all ? "1" : "0") + "\n";
  text += "mask_rate=" + format_double(options.mask_rate) + "\n";
  text += "max_tokens=" + std::to_string(options.max_tokens) + "\n";
  text += "objectives=" + options.objectives + "\n";
  text += "seed=" + std::to_string(options.seed) + "\n";
  text += "size=" + (options.size ? std::to_string(*options.size) : "all") + "\n";
  text += "task=" + options.task + "\n";
  text += "train_frac=" + format_double(options.train_frac) + "\n";
  text += "val_frac=" + format_double(options.val_frac) + "\n";
  return hex64(fnv1a64(text));
}

int run_clean(const PipelineOptions& options) {
  require_paths(options, true, true, "clean");
  const std::vector<json> rows = read_jsonl(options.input);
  std::vector<RawPair> pairs;
  pairs.reserve(rows.size());
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string context =
        options.input + ": row " + std::to_string(i + 1);
    RawPair pair;
    pair.id = require_string(rows[i], "id", context);
    pair.repo = optional_string(rows[i], "repo");
    pair.path = optional_string(rows[i], "path");
    pair.method_source = require_string(rows[i], "method", context);
    pair.javadoc_source = require_string(rows[i], "javadoc", context);
    if (!ids.insert(pair.id).second) {
      throw SchemaError(context + ": duplicate pair id");
    }
    pairs.push_back(std::move(pair));
  }

  std::unordered_set<std::string> against;
  if (!options.against.empty()) against = load_hashes(options.against);

  const std::vector<CleanResult> results =
      parallel_map(pairs.size(), options.workers, [&](std::size_t i) {
        return clean_pair(pairs[i], default_english_detector,
                          options.max_tokens);
      });

  std::vector<MethodRecord> accepted;
  for (const CleanResult& result : results) {
    if (result.accepted()) accepted.push_back(*result.record);
  }
  std::vector<std::string> dropped;
  const std::vector<MethodRecord> kept =
      dedup(std::move(accepted), options.against.empty() ? nullptr : &against,
            &dropped);
  const std::unordered_set<std::string> dropped_ids(dropped.begin(),
                                                    dropped.end());

  JsonlWriter records_out(options.output);
  for (const MethodRecord& rec : kept) {
    json row = json::object();
    row["id"] = rec.id;
    row["method"] = render_method(rec);
    row["summary"] = render_summary(rec);
    row["hash"] = rec.hash;
    row["links"] = rec.link_table;
    records_out.row(row);
  }
  records_out.close();

  std::map<std::string, std::uint64_t> reason_counts;
  std::uint64_t rejected = 0;
  std::optional<JsonlWriter> rejects_out;
  if (!options.rejects.empty()) rejects_out.emplace(options.rejects);
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::optional<RejectReason> reason = results[i].reason;
    if (!reason && dropped_ids.count(pairs[i].id) != 0) {
      reason = RejectReason::Duplicate;
    }
    if (!reason) continue;
    ++rejected;
    ++reason_counts[std::string(reject_reason_name(*reason))];
    if (rejects_out) {
      json row = json::object();
      row["id"] = pairs[i].id;
      row["reason"] = std::string(reject_reason_name(*reason));
      rejects_out->row(row);
    }
  }
  if (rejects_out) rejects_out->close();

  Manifest manifest;
  manifest.command = "clean";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("input", pairs.size());
  manifest.counts.emplace_back("accepted", kept.size());
  manifest.counts.emplace_back("rejected", rejected);
  for (const auto& [name, count] : reason_counts) {
    manifest.counts.emplace_back("rejected_" + name, count);
  }
  manifest.outputs.push_back(options.output);
  if (!options.rejects.empty()) manifest.outputs.push_back(options.rejects);
  write_manifest(manifest);
  return kExitOk;
}

int run_ngram_train(const PipelineOptions& options) {
  require_paths(options, true, true, "ngram-train");
  const std::vector<MethodRecord> records = load_records(options.input);
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(records.size());
  for (const MethodRecord& rec : records) corpus.push_back(instance_surface(rec));
  NgramModel model;
  try {
    model = NgramModel::train(corpus);
  } catch (const NgramError& e) {
    throw SchemaError(options.input + ": " + e.what());
  }
  std::ofstream out(options.output, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + options.output);
  }
  model.save(out);
  out.close();
  if (!out) {
    throw std::runtime_error("failed writing output file: " + options.output);
  }

  Manifest manifest;
  manifest.command = "ngram-train";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("records", records.size());
  manifest.counts.emplace_back("windows", model.total_windows());
  manifest.counts.emplace_back("vocab", model.vocab().size());
  manifest.outputs.push_back(options.output);
  write_manifest(manifest);
  return kExitOk;
}

int run_pretrain_gen(const PipelineOptions& options) {
  require_paths(options, true, true, "pretrain-gen");
  const std::vector<std::string> tags = split_csv(options.objectives);
  if (tags.empty()) throw ConfigError("at least one objective is required");
  std::vector<Objective> objectives;
  std::set<std::string> seen;
  for (const std::string& tag : tags) {
    const auto objective = objective_from_name(tag);
    if (!objective) throw ConfigError("unknown objective \"" + tag + "\"");
    if (!seen.insert(tag).second) {
      throw ConfigError("objective listed twice: " + tag);
    }
    objectives.push_back(*objective);
  }

  const std::vector<ParsedRecord> records =
      parse_records(load_records(options.input), options.input);

  std::optional<NgramModel> model;
  if (std::find(objectives.begin(), objectives.end(), Objective::Rtd) !=
      objectives.end()) {
    if (options.model.empty()) {
      throw ConfigError("the rtd objective requires --model");
    }
    std::ifstream in(options.model);
    if (!in) throw MissingInput("cannot open model file: " + options.model);
    try {
      model = NgramModel::load(in);
    } catch (const NgramError& e) {
      throw SchemaError(options.model + ": " + e.what());
    }
  }

  std::vector<std::vector<PretrainInstance>> streams;
  std::vector<std::pair<std::string, std::uint64_t>> per_objective;
  std::vector<PoolBlock> pool;
  for (const Objective objective : objectives) {
    std::vector<PretrainInstance> stream;
    switch (objective) {
      case Objective::Mlm:
        stream = parallel_map(records.size(), options.workers,
                              [&](std::size_t i) {
                                return gen_mlm(records[i], options.seed,
                                               options.mask_rate);
                              });
        break;
      case Objective::Nsp:
        stream = gen_nsp(records, options.seed);
        break;
      case Objective::Rtd:
        stream = parallel_map(records.size(), options.workers,
                              [&](std::size_t i) {
                                return gen_rtd(records[i], *model,
                                               options.seed,
                                               options.mask_rate);
                              });
        break;
      case Objective::Imf:
        if (options.imf_all) {
          auto lists = parallel_map(
              records.size(), options.workers,
              [&](std::size_t i) { return gen_imf_all(records[i]); });
          for (auto& list : lists) {
            for (auto& inst : list) stream.push_back(std::move(inst));
          }
        } else {
          auto maybe = parallel_map(
              records.size(), options.workers,
              [&](std::size_t i) { return gen_imf(records[i], options.seed); });
          for (auto& inst : maybe) {
            if (inst) stream.push_back(std::move(*inst));
          }
        }
        break;
      case Objective::Mng:
        stream = parallel_map(records.size(), options.workers,
                              [&](std::size_t i) { return gen_mng(records[i]); });
        break;
      case Objective::Cbs: {
        if (pool.empty()) pool = build_block_pool(records);
        auto maybe = parallel_map(records.size(), options.workers,
                                  [&](std::size_t i) {
                                    return gen_cbs(records[i], pool,
                                                   options.seed);
                                  });
        for (auto& inst : maybe) {
          if (inst) stream.push_back(std::move(*inst));
        }
        break;
      }
    }
    per_objective.emplace_back(std::string(objective_name(objective)),
                               stream.size());
    streams.push_back(std::move(stream));
  }

  std::vector<PretrainInstance> instances;
  if (streams.size() == 1) {
    instances = std::move(streams.front());
  } else {
    instances = mix_objectives(std::move(streams), options.seed);
  }

  JsonlWriter out(options.output);
  for (const PretrainInstance& inst : instances) {
    json row = json::object();
    row["id"] = inst.id;
    row["objective"] = std::string(objective_name(inst.objective));
    row["input"] = join_tokens(inst.input);
    row["target"] = join_tokens(inst.target);
    row["source_id"] = inst.source_id;
    row["seed"] = inst.seed;
    out.row(row);
  }
  out.close();

  Manifest manifest;
  manifest.command = "pretrain-gen";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("records", records.size());
  for (const auto& [name, count] : per_objective) {
    manifest.counts.emplace_back(name, count);
  }
  manifest.counts.emplace_back("instances", instances.size());
  manifest.outputs.push_back(options.output);
  write_manifest(manifest);
  return kExitOk;
}

int run_mutate(const PipelineOptions& options) {
  require_paths(options, true, true, "mutate");
  const std::vector<ParsedRecord> records =
      parse_records(load_records(options.input), options.input);
  const auto lists = parallel_map(
      records.size(), options.workers, [&](std::size_t i) {
        return enumerate_mutants(records[i].method_lex, records[i].shape);
      });

  JsonlWriter out(options.output);
  std::uint64_t total = 0;
  std::uint64_t without_sites = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (lists[i].empty()) {
      ++without_sites;
      continue;
    }
    for (std::size_t k = 0; k < lists[i].size(); ++k) {
      json row = json::object();
      row["id"] = records[i].record.id + "/m" + std::to_string(k);
      row["operator"] = std::string(mutation_operator_name(lists[i][k].op));
      row["mutated"] = join_tokens(lists[i][k].mutated_tokens);
      row["original_id"] = records[i].record.id;
      out.row(row);
      ++total;
    }
  }
  out.close();

  Manifest manifest;
  manifest.command = "mutate";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("records", records.size());
  manifest.counts.emplace_back("mutants", total);
  manifest.counts.emplace_back("records_without_sites", without_sites);
  manifest.outputs.push_back(options.output);
  write_manifest(manifest);
  return kExitOk;
}

int run_finetune_build(const PipelineOptions& options) {
  require_paths(options, true, true, "finetune-build");
  const auto task = finetune_task_from_name(options.task);
  if (!task) {
    throw ConfigError("finetune-build requires --task "
                      "bugfix|summarization|completion");
  }

  std::vector<FinetuneInstance> instances;
  std::vector<std::pair<std::string, std::uint64_t>> extra_counts;
  bool wrote_rejects = false;

  if (*task == FinetuneTask::Bugfix) {
    const std::vector<json> rows = read_jsonl(options.input);
    std::vector<BugfixPair> pairs;
    pairs.reserve(rows.size());
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string context =
          options.input + ": row " + std::to_string(i + 1);
      BugfixPair pair;
      pair.id = require_string(rows[i], "id", context);
      pair.buggy_with_context = optional_string(rows[i], "buggy_with_context");
      pair.fixed_line = optional_string(rows[i], "fixed_line");
      pair.buggy_method = require_string(rows[i], "buggy_method", context);
      pair.fixed_method = require_string(rows[i], "fixed_method", context);
      if (!ids.insert(pair.id).second) {
        throw SchemaError(context + ": duplicate pair id");
      }
      pairs.push_back(std::move(pair));
    }
    std::unordered_set<std::string> pretrain_hashes;
    if (!options.against.empty()) pretrain_hashes = load_hashes(options.against);
    std::vector<BugfixRejectEntry> rejects;
    instances = build_bugfix(pairs, pretrain_hashes, &rejects);
    if (!options.rejects.empty()) {
      JsonlWriter rejects_out(options.rejects);
      for (const BugfixRejectEntry& entry : rejects) {
        json row = json::object();
        row["id"] = entry.id;
        row["reason"] = std::string(bugfix_reject_name(entry.reason));
        rejects_out.row(row);
      }
      rejects_out.close();
      wrote_rejects = true;
    }
    extra_counts.emplace_back("rejected", rejects.size());
  } else if (*task == FinetuneTask::Summarization) {
    const std::vector<MethodRecord> records = load_records(options.input);
    const std::size_t size = options.size ? static_cast<std::size_t>(*options.size)
                                          : records.size();
    if (size > records.size()) {
      throw ConfigError("sample size " + std::to_string(size) +
                        " exceeds record count " +
                        std::to_string(records.size()));
    }
    instances = build_summarization(records, size, options.seed);
  } else {
    const std::vector<ParsedRecord> records =
        parse_records(load_records(options.input), options.input);
    instances = build_completion(records, options.max_tokens);
  }

  JsonlWriter out(options.output);
  for (const FinetuneInstance& inst : instances) out.row(finetune_row(inst));
  out.close();

  Manifest manifest;
  manifest.command = "finetune-build";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("instances", instances.size());
  for (const auto& [name, count] : extra_counts) {
    manifest.counts.emplace_back(name, count);
  }
  manifest.outputs.push_back(options.output);
  if (wrote_rejects) manifest.outputs.push_back(options.rejects);
  write_manifest(manifest);
  return kExitOk;
}

int run_split(const PipelineOptions& options) {
  require_paths(options, true, true, "split");
  const std::vector<json> rows = read_jsonl(options.input);
  std::vector<FinetuneInstance> instances;
  instances.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string context =
        options.input + ": row " + std::to_string(i + 1);
    FinetuneInstance inst;
    inst.id = require_string(rows[i], "id", context);
    const std::string task = require_string(rows[i], "task", context);
    const auto parsed = finetune_task_from_name(task);
    if (!parsed) throw SchemaError(context + ": unknown task \"" + task + "\"");
    inst.task = *parsed;
    inst.input = split_tokens(require_string(rows[i], "input", context));
    inst.target = split_tokens(require_string(rows[i], "target", context));
    instances.push_back(std::move(inst));
  }

  try {
    assign_splits(instances, options.seed, options.train_frac,
                  options.val_frac);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(options.input + ": " + e.what());
  }

  JsonlWriter out(options.output);
  for (const FinetuneInstance& inst : instances) out.row(finetune_row(inst));
  out.close();

  const SplitSizes sizes =
      split_sizes(instances.size(), options.train_frac, options.val_frac);
  Manifest manifest;
  manifest.command = "split";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("instances", instances.size());
  manifest.counts.emplace_back("train", sizes.train);
  manifest.counts.emplace_back("validation", sizes.validation);
  manifest.counts.emplace_back("test", sizes.test);
  manifest.outputs.push_back(options.output);
  write_manifest(manifest);
  return kExitOk;
}

int run_eval(const PipelineOptions& options) {
  if (options.dataset.empty() || options.predictions.empty() ||
      options.output.empty()) {
    throw ConfigError("eval requires --dataset, --predictions and --output");
  }
  const std::vector<DatasetEntry> dataset = load_dataset(options.dataset);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dataset.size(); ++i) index[dataset[i].id] = i;

  const std::vector<json> rows = read_jsonl(options.predictions);
  std::vector<PredictionRow> pred_rows;
  pred_rows.reserve(rows.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string context =
        options.predictions + ": row " + std::to_string(i + 1);
    const std::string id = require_string(rows[i], "id", context);
    const std::string prediction =
        require_string(rows[i], "prediction", context);
    if (!seen.insert(id).second) {
      throw SchemaError(context + ": duplicate prediction id");
    }
    const auto it = index.find(id);
    if (it == index.end()) {
      throw MissingTarget(context + ": no dataset target for id \"" + id +
                          "\"");
    }
    const DatasetEntry& entry = dataset[it->second];
    PredictionRow row;
    row.id = id;
    row.prediction = tokens_for_task(entry.task, prediction);
    row.target = tokens_for_task(entry.task, entry.target);
    pred_rows.push_back(std::move(row));
  }

  const ExactMatchResult em = exact_match(pred_rows);
  json report = json::object();
  report["count"] = pred_rows.size();
  report["exact_match"] = em.rate;
  report["bleu4"] = bleu4(pred_rows);
  report["norm_levenshtein"] = mean_norm_levenshtein(pred_rows);

  std::ofstream out(options.output, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + options.output);
  }
  out << report.dump(2) << '\n';
  out.close();

  Manifest manifest;
  manifest.command = "eval";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("instances", pred_rows.size());
  manifest.outputs.push_back(options.output);
  write_manifest(manifest);
  return kExitOk;
}

int run_compare(const PipelineOptions& options) {
  if (options.dataset.empty() || options.predictions.empty() ||
      options.names.empty() || options.output.empty()) {
    throw ConfigError(
        "compare requires --dataset, --predictions, --names and --output");
  }
  const std::vector<std::string> names = split_csv(options.names);
  const std::vector<std::string> files = split_csv(options.predictions);
  if (names.size() != files.size() || names.size() < 2) {
    throw ConfigError(
        "compare needs >= 2 prediction files with one name each");
  }
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
    throw ConfigError("model names must be unique");
  }

  const std::vector<DatasetEntry> dataset = load_dataset(options.dataset);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dataset.size(); ++i) index[dataset[i].id] = i;

  std::vector<std::vector<std::string>> targets(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    targets[i] = tokens_for_task(dataset[i].task, dataset[i].target);
  }

  std::vector<std::vector<bool>> correctness;
  json models = json::array();
  for (std::size_t m = 0; m < files.size(); ++m) {
    const std::vector<json> rows = read_jsonl(files[m]);
    std::vector<std::optional<std::string>> predictions(dataset.size());
    std::size_t covered = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string context =
          files[m] + ": row " + std::to_string(i + 1);
      const std::string id = require_string(rows[i], "id", context);
      const std::string prediction =
          require_string(rows[i], "prediction", context);
      const auto it = index.find(id);
      if (it == index.end()) {
        throw MissingTarget(context + ": no dataset target for id \"" + id +
                            "\"");
      }
      if (predictions[it->second]) {
        throw SchemaError(context + ": duplicate prediction id");
      }
      predictions[it->second] = prediction;
      ++covered;
    }
    if (covered != dataset.size()) {
      throw SchemaError("model \"" + names[m] + "\" covers " +
                        std::to_string(covered) + " of " +
                        std::to_string(dataset.size()) +
                        " dataset instances");
    }
    std::vector<PredictionRow> pred_rows;
    pred_rows.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      PredictionRow row;
      row.id = dataset[i].id;
      row.prediction = tokens_for_task(dataset[i].task, *predictions[i]);
      row.target = targets[i];
      pred_rows.push_back(std::move(row));
    }
    const ExactMatchResult em = exact_match(pred_rows);
    json entry = json::object();
    entry["name"] = names[m];
    entry["exact_match"] = em.rate;
    entry["bleu4"] = bleu4(pred_rows);
    entry["norm_levenshtein"] = mean_norm_levenshtein(pred_rows);
    models.push_back(std::move(entry));
    correctness.push_back(em.correct);
  }

  struct PairStats {
    std::size_t a = 0;
    std::size_t b = 0;
    McNemarResult test;
    double odds = 1.0;
  };
  std::vector<PairStats> pairs;
  std::vector<double> raw_p;
  for (std::size_t a = 0; a < correctness.size(); ++a) {
    for (std::size_t b = a + 1; b < correctness.size(); ++b) {
      PairStats stats;
      stats.a = a;
      stats.b = b;
      stats.test = mcnemar(correctness[a], correctness[b]);
      stats.odds = odds_ratio_paired(stats.test.n10, stats.test.n01);
      raw_p.push_back(stats.test.p);
      pairs.push_back(stats);
    }
  }
  const std::vector<double> holm = holm_adjust(raw_p);

  json pair_rows = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    json row = json::object();
    row["a"] = names[pairs[i].a];
    row["b"] = names[pairs[i].b];
    row["n00"] = pairs[i].test.n00;
    row["n01"] = pairs[i].test.n01;
    row["n10"] = pairs[i].test.n10;
    row["n11"] = pairs[i].test.n11;
    row["p_raw"] = pairs[i].test.p;
    row["p_holm"] = holm[i];
    row["odds_ratio"] = pairs[i].odds;
    pair_rows.push_back(std::move(row));
  }

  json report = json::object();
  report["count"] = dataset.size();
  report["models"] = std::move(models);
  report["pairs"] = std::move(pair_rows);

  std::ofstream out(options.output, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + options.output);
  }
  out << report.dump(2) << '\n';
  out.close();

  bool wrote_csv = false;
  if (!options.csv.empty()) {
    std::ofstream csv(options.csv, std::ios::binary);
    if (!csv) {
      throw std::runtime_error("cannot open output file: " + options.csv);
    }
    csv << "model_a,model_b,n00,n01,n10,n11,p_raw,p_holm,odds_ratio\n";
    char buffer[64];
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      csv << names[pairs[i].a] << ',' << names[pairs[i].b] << ','
          << pairs[i].test.n00 << ',' << pairs[i].test.n01 << ','
          << pairs[i].test.n10 << ',' << pairs[i].test.n11;
      std::snprintf(buffer, sizeof(buffer), "%.12g", pairs[i].test.p);
      csv << ',' << buffer;
      std::snprintf(buffer, sizeof(buffer), "%.12g", holm[i]);
      csv << ',' << buffer;
      std::snprintf(buffer, sizeof(buffer), "%.12g", pairs[i].odds);
      csv << ',' << buffer << '\n';
    }
    csv.close();
    wrote_csv = true;
  }

  Manifest manifest;
  manifest.command = "compare";
  manifest.config_digest = config_digest(options);
  manifest.seed = options.seed;
  manifest.counts.emplace_back("instances", dataset.size());
  manifest.counts.emplace_back("models", names.size());
  manifest.counts.emplace_back("pairs", pairs.size());
  manifest.outputs.push_back(options.output);
  if (wrote_csv) manifest.outputs.push_back(options.csv);
  write_manifest(manifest);
  return kExitOk;
}

int run_command(const std::string& command, const PipelineOptions& options) {
  validate_common(options);
  if (command == "clean") return run_clean(options);
  if (command == "ngram-train") return run_ngram_train(options);
  if (command == "pretrain-gen") return run_pretrain_gen(options);
  if (command == "mutate") return run_mutate(options);
  if (command == "finetune-build") return run_finetune_build(options);
  if (command == "split") return run_split(options);
  if (command == "eval") return run_eval(options);
  if (command == "compare") return run_compare(options);
  throw ConfigError("unknown command \"" + command + "\"");
}

}  // namespace jprep

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace jprep {

// Resolved options for one subcommand invocation. Every semantic knob can
// come from a config file; explicit command-line flags win. The worker count
// never influences output bytes.
struct PipelineOptions {
  std::string input;
  std::string output;
  std::string rejects;
  std::string against;
  std::string model;
  std::string dataset;
  std::string predictions;  // comma-separated for compare
  std::string names;        // comma-separated, aligned with predictions
  std::string csv;
  std::string task;
  std::string objectives = "mlm,nsp,rtd,imf,mng,cbs";
  std::uint64_t seed = 42;
  int workers = 1;
  double mask_rate = 0.15;
  std::uint64_t max_tokens = 512;
  double train_frac = 0.8;
  double val_frac = 0.1;
  std::optional<std::uint64_t> size;
  bool imf_all = false;
};

// Applies `key = value` lines for keys not in `overridden`. '#' lines are
// comments. Throws MissingInput when the file is absent and ConfigError on
// unknown keys or unparsable values.
void apply_config_file(PipelineOptions& options, const std::string& path,
                       const std::set<std::string>& overridden);

// Digest of the semantic configuration (seed, rates, sizes, objectives,
// task, fractions). Paths and the worker count are excluded so reruns in
// different directories or thread counts produce identical manifests.
std::string config_digest(const PipelineOptions& options);

int run_clean(const PipelineOptions& options);
int run_ngram_train(const PipelineOptions& options);
int run_pretrain_gen(const PipelineOptions& options);
int run_mutate(const PipelineOptions& options);
int run_finetune_build(const PipelineOptions& options);
int run_split(const PipelineOptions& options);
int run_eval(const PipelineOptions& options);
int run_compare(const PipelineOptions& options);

// Dispatches to the runner above; throws ConfigError on an unknown command.
int run_command(const std::string& command, const PipelineOptions& options);

}  // namespace jprep

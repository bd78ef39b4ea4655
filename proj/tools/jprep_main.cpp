#include <exception>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jprep/io.hpp"
#include "jprep/metrics.hpp"
#include "jprep/pipeline.hpp"

namespace {

struct CommandSpec {
  CLI::App* app = nullptr;
  std::string name;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "jprep: deterministic preparation of Java pre-training, fine-tuning "
      "and evaluation datasets"};
  app.require_subcommand(1);

  jprep::PipelineOptions options;
  std::string config_path;
  std::uint64_t size_value = 0;

  std::vector<CommandSpec> commands;
  auto add_command = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", config_path,
                    "key = value configuration file; explicit flags win");
    cmd->add_option("--seed", options.seed, "global random seed");
    cmd->add_option("--workers", options.workers,
                    "worker threads; never affects output bytes");
    commands.push_back({cmd, name});
    return cmd;
  };

  CLI::App* clean = add_command("clean", "clean raw method/javadoc pairs");
  clean->add_option("--input", options.input, "raw pairs JSONL")->required();
  clean->add_option("--output", options.output, "records JSONL")->required();
  clean->add_option("--rejects", options.rejects, "rejections JSONL");
  clean->add_option("--against", options.against,
                    "records JSONL whose hashes also count as duplicates");
  clean->add_option("--max-tokens", options.max_tokens,
                    "method + summary token limit");

  CLI::App* ngram = add_command("ngram-train", "train the order-3 model");
  ngram->add_option("--input", options.input, "records JSONL")->required();
  ngram->add_option("--output", options.output, "model JSON")->required();

  CLI::App* pretrain =
      add_command("pretrain-gen", "generate pre-training instances");
  pretrain->add_option("--input", options.input, "records JSONL")->required();
  pretrain->add_option("--output", options.output, "instances JSONL")
      ->required();
  pretrain->add_option("--objectives", options.objectives,
                       "comma list from mlm,nsp,rtd,imf,mng,cbs");
  pretrain->add_option("--model", options.model, "n-gram model for rtd");
  pretrain->add_option("--mask-rate", options.mask_rate,
                       "fraction of tokens to mask or replace");
  pretrain->add_flag("--imf-all", options.imf_all,
                     "emit every mutant instead of one per method");

  CLI::App* mutate = add_command("mutate", "enumerate mutants per method");
  mutate->add_option("--input", options.input, "records JSONL")->required();
  mutate->add_option("--output", options.output, "mutants JSONL")->required();

  CLI::App* finetune =
      add_command("finetune-build", "build a fine-tuning dataset");
  finetune->add_option("--task", options.task,
                       "bugfix, summarization or completion")
      ->required();
  finetune->add_option("--input", options.input,
                       "records JSONL (bugfix: pairs JSONL)")
      ->required();
  finetune->add_option("--output", options.output, "instances JSONL")
      ->required();
  finetune->add_option("--size", size_value,
                       "summarization sample size (default: all records)");
  finetune->add_option("--against", options.against,
                       "records JSONL providing pre-training hashes (bugfix)");
  finetune->add_option("--rejects", options.rejects,
                       "rejections JSONL (bugfix)");
  finetune->add_option("--max-tokens", options.max_tokens,
                       "completion input token limit");

  CLI::App* split = add_command("split", "assign train/validation/test");
  split->add_option("--input", options.input, "instances JSONL")->required();
  split->add_option("--output", options.output, "labelled JSONL")->required();
  split->add_option("--train-frac", options.train_frac, "train fraction");
  split->add_option("--val-frac", options.val_frac, "validation fraction");

  CLI::App* eval = add_command("eval", "score one prediction file");
  eval->add_option("--dataset", options.dataset, "instances JSONL")
      ->required();
  eval->add_option("--predictions", options.predictions, "predictions JSONL")
      ->required();
  eval->add_option("--output", options.output, "report JSON")->required();

  CLI::App* compare =
      add_command("compare", "pairwise statistical model comparison");
  compare->add_option("--dataset", options.dataset, "instances JSONL")
      ->required();
  compare->add_option("--predictions", options.predictions,
                      "comma list of prediction JSONL files")
      ->required();
  compare->add_option("--names", options.names, "comma list of model names")
      ->required();
  compare->add_option("--output", options.output, "report JSON")->required();
  compare->add_option("--csv", options.csv, "pairwise table CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return jprep::kExitBadConfig;
  }

  const CommandSpec* active = nullptr;
  for (const CommandSpec& spec : commands) {
    if (spec.app->parsed()) active = &spec;
  }
  if (!active) {
    std::cerr << "error: no command given\n";
    return jprep::kExitBadConfig;
  }

  try {
    if (active->app->get_option_no_throw("--size") != nullptr &&
        active->app->count("--size") > 0) {
      options.size = size_value;
    }
    if (!config_path.empty()) {
      // Flags given explicitly on the command line shadow the file.
      static const std::pair<const char*, const char*> kFlagKeys[] = {
          {"--seed", "seed"},           {"--workers", "workers"},
          {"--mask-rate", "mask_rate"}, {"--max-tokens", "max_tokens"},
          {"--objectives", "objectives"}, {"--train-frac", "train_frac"},
          {"--val-frac", "val_frac"},   {"--size", "size"},
          {"--imf-all", "imf_all"},
      };
      std::set<std::string> overridden;
      for (const auto& [flag, key] : kFlagKeys) {
        if (active->app->get_option_no_throw(flag) != nullptr &&
            active->app->count(flag) > 0) {
          overridden.insert(key);
        }
      }
      jprep::apply_config_file(options, config_path, overridden);
    }
    return jprep::run_command(active->name, options);
  } catch (const jprep::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return jprep::kExitSchema;
  } catch (const jprep::MissingTarget& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return jprep::kExitSchema;
  } catch (const jprep::MissingInput& e) {
    std::cerr << "missing input: " << e.what() << '\n';
    return jprep::kExitMissingInput;
  } catch (const jprep::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return jprep::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return jprep::kExitFailure;
  }
}

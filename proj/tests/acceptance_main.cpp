// Acceptance suite: ten end-to-end checks over the released behavior, one
// PASS/FAIL line each. Exits nonzero when any check fails.
//
// Usage: jprep_acceptance <path-to-jprep-cli>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jprep/clean.hpp"
#include "jprep/finetune.hpp"
#include "jprep/io.hpp"
#include "jprep/lexer.hpp"
#include "jprep/metrics.hpp"
#include "jprep/mutation.hpp"
#include "jprep/ngram.hpp"
#include "jprep/objectives.hpp"
#include "jprep/pipeline.hpp"
#include "jprep/rng.hpp"
#include "jprep/structure.hpp"
#include "support/helpers.hpp"
#include "support/method_gen.hpp"
#include "support/oracles.hpp"

using namespace jprep;
using jprep::testsupport::TempDir;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Failure {
  std::string detail;
};

void expect(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

RawPair raw_pair(const jprep::testsupport::GeneratedPair& gen) {
  RawPair pair;
  pair.id = gen.id;
  pair.method_source = gen.method;
  pair.javadoc_source = gen.javadoc;
  return pair;
}

std::vector<ParsedRecord> cleaned_corpus(std::size_t n, std::uint64_t seed) {
  std::vector<ParsedRecord> out;
  out.reserve(n);
  for (const auto& gen : jprep::testsupport::generate_corpus(n, seed)) {
    const CleanResult result = clean_pair(raw_pair(gen));
    expect(result.accepted(), "generated method rejected: " + gen.id);
    out.push_back(parse_record(*result.record));
  }
  return out;
}

void write_raw_corpus(const std::filesystem::path& path, std::size_t n,
                      std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& gen : jprep::testsupport::generate_corpus(n, seed)) {
    json row = json::object();
    row["id"] = gen.id;
    row["method"] = gen.method;
    row["javadoc"] = gen.javadoc;
    out << row.dump() << '\n';
  }
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  expect(in.good(), "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ----------------------------------------------------------------- 1

void check_split_reproduction() {
  const SplitSizes sizes = split_sizes(27901);
  expect(sizes.train == 22321, "train size " + std::to_string(sizes.train));
  expect(sizes.validation == 2790,
         "validation size " + std::to_string(sizes.validation));
  expect(sizes.test == 2790, "test size " + std::to_string(sizes.test));

  for (const std::uint64_t seed : {7ull, 424242ull}) {
    std::vector<FinetuneInstance> instances(27901);
    for (std::size_t i = 0; i < instances.size(); ++i) {
      instances[i].id = "inst" + std::to_string(i);
    }
    const auto start = Clock::now();
    assign_splits(instances, seed);
    const double elapsed = seconds_since(start);
    expect(elapsed < 1.0,
           "assign_splits took " + std::to_string(elapsed) + " s");
    std::size_t train = 0;
    std::size_t val = 0;
    std::size_t test = 0;
    for (const auto& inst : instances) {
      expect(inst.split.has_value(), "instance left unlabelled");
      switch (*inst.split) {
        case SplitLabel::Train: ++train; break;
        case SplitLabel::Validation: ++val; break;
        case SplitLabel::Test: ++test; break;
      }
    }
    expect(train == 22321 && val == 2790 && test == 2790,
           "split counts " + std::to_string(train) + "/" +
               std::to_string(val) + "/" + std::to_string(test));
  }
}

// ----------------------------------------------------------------- 2

void check_masking_rates() {
  const auto corpus = cleaned_corpus(5000, 2024);
  std::vector<std::vector<std::string>> surfaces;
  surfaces.reserve(corpus.size());
  for (const auto& rec : corpus) {
    surfaces.push_back(instance_surface(rec.record));
  }
  const NgramModel model = NgramModel::train(surfaces);

  std::size_t instances = 0;
  double fraction_sum = 0.0;
  std::size_t fraction_count = 0;
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const std::size_t n = surfaces[r].size();
    const std::size_t expected =
        std::min(std::max<std::size_t>(1, n * 3 / 20), n - 1);

    const PretrainInstance mlm = gen_mlm(corpus[r], 77);
    expect(mlm.target.size() % 2 == 0, "odd mlm target length");
    const std::size_t masked = mlm.target.size() / 2;
    expect(masked == expected,
           "mlm masked " + std::to_string(masked) + " of " +
               std::to_string(n) + ", expected " + std::to_string(expected));

    const PretrainInstance rtd = gen_rtd(corpus[r], model, 77);
    const std::size_t replaced = rtd.target.size();
    expect(replaced == expected,
           "rtd replaced " + std::to_string(replaced) + " of " +
               std::to_string(n) + ", expected " + std::to_string(expected));

    instances += 2;
    if (n >= 20) {
      fraction_sum += 2.0 * static_cast<double>(expected) /
                      static_cast<double>(n);
      fraction_count += 2;
    }
  }
  expect(instances == 10000, "generated " + std::to_string(instances));
  const double mean = fraction_sum / static_cast<double>(fraction_count);
  expect(std::fabs(mean - 0.15) <= 0.005,
         "aggregate rate " + std::to_string(mean));
}

// ----------------------------------------------------------------- 3

void check_rtd_oracle() {
  std::vector<ParsedRecord> corpus;
  std::vector<std::vector<std::string>> surfaces;
  std::size_t method_tokens = 0;
  for (const auto& gen : jprep::testsupport::generate_tiny_corpus(1000, 8)) {
    corpus.push_back(parse_record(jprep::testsupport::make_record(
        gen.id, gen.method, extract_description(gen.javadoc))));
    surfaces.push_back(instance_surface(corpus.back().record));
    method_tokens += corpus.back().record.method_tokens.size();
  }
  expect(method_tokens <= 10000,
         "corpus holds " + std::to_string(method_tokens) + " method tokens");

  const NgramModel model = NgramModel::train(surfaces);
  const jprep::testsupport::TrigramOracle oracle(surfaces);

  std::size_t replacements = 0;
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const PretrainInstance inst = gen_rtd(corpus[r], model, 42);
    const auto& surface = surfaces[r];
    for (const std::string& t : inst.target) {
      const std::size_t pos = static_cast<std::size_t>(std::stoull(t));
      const std::string& prev2 = pos >= 2 ? surface[pos - 2] : "<BOS>";
      const std::string& prev1 = pos >= 1 ? surface[pos - 1] : "<BOS>";
      const std::string want = oracle.choice(prev2, prev1, surface[pos]);
      expect(!want.empty(), "oracle exhausted at " + corpus[r].record.id);
      expect(inst.input[pos] == want,
             corpus[r].record.id + " position " + t + ": got " +
                 inst.input[pos] + ", oracle " + want);
      ++replacements;
    }
  }
  expect(replacements >= 1000,
         "only " + std::to_string(replacements) + " replacements");

  // Second-position rule: with counts c(a,b,c)=2 and c(a,b,d)=1, replacing
  // the original "c" must take the runner-up "d".
  const std::vector<std::vector<std::string>> ranked = {
      {"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "d"}};
  expect(NgramModel::train(ranked).rtd_choice("a", "b", "c") == "d",
         "second-position rule");
  expect(jprep::testsupport::TrigramOracle(ranked).choice("a", "b", "c") ==
             "d",
         "second-position rule (oracle)");

  // Backoff: the only trigram continuation of (x, y) is the original, so the
  // choice falls through to the bigram level of y.
  const std::vector<std::vector<std::string>> backoff = {{"x", "y", "o"},
                                                         {"z", "y", "w"}};
  const NgramModel small = NgramModel::train(backoff);
  const jprep::testsupport::TrigramOracle small_oracle(backoff);
  const std::string got = small.rtd_choice("x", "y", "o");
  expect(got == "w", "backoff choice " + got);
  expect(small_oracle.choice("x", "y", "o") == got, "backoff (oracle)");
}

// ----------------------------------------------------------------- 4

void check_mutation_suite() {
  const auto data = jprep::testsupport::data_dir();
  const auto methods = read_jsonl(data / "mutation_golden_methods.jsonl");
  const auto expected = read_jsonl(data / "mutation_golden_expected.jsonl");
  expect(methods.size() >= 22, "golden corpus too small");

  std::map<std::string, std::vector<std::pair<std::string, std::string>>> want;
  for (const json& row : expected) {
    want[row.at("id").get<std::string>()].emplace_back(
        row.at("operator").get<std::string>(),
        row.at("mutated").get<std::string>());
  }
  for (const json& row : methods) {
    const std::string id = row.at("id").get<std::string>();
    const std::vector<Token> tokens =
        tokenize(row.at("method").get<std::string>());
    const MethodShape shape = parse_structure(tokens);
    std::vector<std::pair<std::string, std::string>> got;
    for (const Mutant& mutant : enumerate_mutants(tokens, shape)) {
      got.emplace_back(std::string(mutation_operator_name(mutant.op)),
                       detokenize(mutant.mutated_tokens));
    }
    expect(got == want[id], "golden mismatch for " + id);
  }

  std::size_t checked = 0;
  for (const auto& gen : jprep::testsupport::generate_corpus(10000, 31)) {
    const std::vector<Token> tokens = tokenize(gen.method);
    const MethodShape shape = parse_structure(tokens);
    const std::vector<std::string> original = token_texts(tokens);
    for (const Mutant& mutant : enumerate_mutants(tokens, shape)) {
      expect(mutant.mutated_tokens != original, gen.id + ": mutant identical");
      const auto relexed =
          token_texts(tokenize(detokenize(mutant.mutated_tokens)));
      expect(relexed == mutant.mutated_tokens,
             gen.id + ": mutant does not re-tokenize");
      // One contiguous splice matching the single recorded operator site.
      const MutationSite& site = mutant.site;
      const std::size_t tail = original.size() - site.end;
      const bool prefix_ok = std::equal(
          original.begin(), original.begin() + site.begin,
          mutant.mutated_tokens.begin());
      const bool suffix_ok = std::equal(
          original.begin() + site.end, original.end(),
          mutant.mutated_tokens.end() - tail);
      const std::vector<std::string> gap(
          mutant.mutated_tokens.begin() + site.begin,
          mutant.mutated_tokens.end() - tail);
      expect(prefix_ok && suffix_ok && gap == site.replacement,
             gen.id + ": mutant is not a single-site splice");
      ++checked;
    }
  }
  expect(checked > 10000, "fuzz produced too few mutants");
}

// ----------------------------------------------------------------- 5

void check_reconstruction() {
  const auto corpus = cleaned_corpus(2000, 99);

  std::map<std::string, const ParsedRecord*> by_id;
  for (const auto& rec : corpus) by_id[rec.record.id] = &rec;

  for (const auto& rec : corpus) {
    const std::vector<std::string> surface = instance_surface(rec.record);

    const PretrainInstance mlm = gen_mlm(rec, 7);
    std::map<std::string, std::string> hidden;
    for (std::size_t j = 0; j + 1 < mlm.target.size(); j += 2) {
      hidden[mlm.target[j]] = mlm.target[j + 1];
    }
    std::vector<std::string> restored;
    restored.reserve(mlm.input.size());
    for (const std::string& t : mlm.input) {
      const auto it = hidden.find(t);
      restored.push_back(it == hidden.end() ? t : it->second);
    }
    expect(restored == surface, rec.record.id + ": mlm splice-back differs");

    const auto imf = gen_imf(rec, 7);
    if (imf) {
      expect(imf->target == rec.record.method_tokens,
             rec.record.id + ": imf target is not the original");
      expect(imf->input != imf->target, rec.record.id + ": imf input intact");
    }
  }

  const std::vector<FinetuneInstance> completion = build_completion(corpus);
  expect(!completion.empty(), "no completion instances");
  for (const FinetuneInstance& inst : completion) {
    const std::string rec_id = inst.id.substr(0, inst.id.find("/blk"));
    const auto it = by_id.find(rec_id);
    expect(it != by_id.end(), "unknown completion source " + inst.id);
    std::vector<std::string> restored;
    std::size_t sentinels = 0;
    for (const std::string& t : inst.input) {
      if (t == "<BLOCK>") {
        ++sentinels;
        restored.insert(restored.end(), inst.target.begin(),
                        inst.target.end());
      } else {
        restored.push_back(t);
      }
    }
    expect(sentinels == 1, inst.id + ": expected one block sentinel");
    expect(restored == it->second->record.method_tokens,
           inst.id + ": completion splice-back differs");
  }
}

// ----------------------------------------------------------------- 6

void check_balance() {
  {
    const auto corpus = cleaned_corpus(10000, 55);
    const std::vector<PretrainInstance> instances = gen_nsp(corpus, 42);
    expect(instances.size() == 10000,
           "nsp produced " + std::to_string(instances.size()));
    std::size_t yes = 0;
    for (const auto& inst : instances) {
      expect(inst.target.size() == 1, "nsp target arity");
      if (inst.target[0] == "yes") {
        ++yes;
      } else {
        expect(inst.target[0] == "no", "nsp label " + inst.target[0]);
      }
    }
    const double fraction =
        static_cast<double>(yes) / static_cast<double>(instances.size());
    expect(fraction >= 0.48 && fraction <= 0.52,
           "nsp yes fraction " + std::to_string(fraction));
  }

  const auto corpus = cleaned_corpus(13000, 56);
  const std::vector<PoolBlock> pool = build_block_pool(corpus);
  std::size_t produced = 0;
  std::size_t zeros = 0;
  for (const auto& rec : corpus) {
    if (produced == 10000) break;
    const auto inst = gen_cbs(rec, pool, 42);
    if (!inst) continue;
    ++produced;
    expect(inst->target.size() == 1, "cbs target arity");
    const bool truth_first = inst->target[0] == "0";
    expect(truth_first || inst->target[0] == "1",
           "cbs label " + inst->target[0]);
    if (truth_first) ++zeros;

    const auto c0 =
        std::find(inst->input.begin(), inst->input.end(), "<CAND_0>");
    const auto c1 =
        std::find(inst->input.begin(), inst->input.end(), "<CAND_1>");
    expect(c0 != inst->input.end() && c1 != inst->input.end() && c0 < c1,
           rec.record.id + ": candidate markers missing");
    const std::vector<std::string> body(inst->input.begin(), c0);
    const std::vector<std::string> cand0(c0 + 1, c1);
    const std::vector<std::string> cand1(c1 + 1, inst->input.end());
    const auto& truth = truth_first ? cand0 : cand1;
    const auto& distractor = truth_first ? cand1 : cand0;

    // The labeled candidate is the removed block, the other is not.
    std::vector<std::string> restored;
    std::size_t sentinels = 0;
    for (const std::string& t : body) {
      if (t == "<BLOCK>") {
        ++sentinels;
        restored.insert(restored.end(), truth.begin(), truth.end());
      } else {
        restored.push_back(t);
      }
    }
    expect(sentinels == 1, rec.record.id + ": cbs block sentinel count");
    expect(restored == rec.record.method_tokens,
           rec.record.id + ": true candidate is not the removed block");
    expect(distractor != truth,
           rec.record.id + ": distractor equals the removed block");
  }
  expect(produced == 10000, "cbs produced " + std::to_string(produced));
  const double fraction =
      static_cast<double>(zeros) / static_cast<double>(produced);
  expect(fraction >= 0.48 && fraction <= 0.52,
         "cbs truth-first fraction " + std::to_string(fraction));
}

// ----------------------------------------------------------------- 7

void check_cleaning_golden() {
  const auto data = jprep::testsupport::data_dir();
  TempDir dir;

  PipelineOptions options;
  options.input = (data / "clean_golden_input.jsonl").string();
  options.output = dir.file("records.jsonl");
  options.rejects = dir.file("rejects.jsonl");
  expect(run_clean(options) == 0, "clean exited nonzero");

  const auto got_records = read_jsonl(dir.file("records.jsonl"));
  const auto want_records = read_jsonl(data / "clean_golden_records.jsonl");
  expect(got_records.size() == want_records.size(),
         "survivor count " + std::to_string(got_records.size()) + " vs " +
             std::to_string(want_records.size()));
  for (std::size_t i = 0; i < want_records.size(); ++i) {
    expect(got_records[i] == want_records[i],
           "record mismatch at " +
               want_records[i].at("id").get<std::string>());
  }

  const auto got_rejects = read_jsonl(dir.file("rejects.jsonl"));
  const auto want_rejects = read_jsonl(data / "clean_golden_rejects.jsonl");
  expect(got_rejects.size() == want_rejects.size(),
         "reject count " + std::to_string(got_rejects.size()));
  std::set<std::string> reasons;
  for (std::size_t i = 0; i < want_rejects.size(); ++i) {
    expect(got_rejects[i] == want_rejects[i],
           "reject mismatch at " +
               want_rejects[i].at("id").get<std::string>());
    reasons.insert(want_rejects[i].at("reason").get<std::string>());
  }
  expect(reasons.size() == 10, "rejection reasons covered: " +
                                   std::to_string(reasons.size()));

  // Shared link indices: the r15 method references the javadoc's second URL.
  bool found = false;
  for (const json& row : got_records) {
    if (row.at("id") != "r15") continue;
    found = true;
    const std::string method = row.at("method").get<std::string>();
    const std::string summary = row.at("summary").get<std::string>();
    expect(method.find("<LINK_0>") != std::string::npos &&
               method.find("<LINK_1>") != std::string::npos &&
               summary.find("<LINK_0>") != std::string::npos &&
               summary.find("<LINK_1>") != std::string::npos,
           "shared link indices not visible on both sides");
    expect(row.at("links").size() == 2, "link table size");
  }
  expect(found, "record r15 missing");
}

// ----------------------------------------------------------------- 8

void check_metrics_oracles() {
  const auto toks = [](std::string_view text) {
    return split_tokens(std::string(text));
  };

  {
    PredictionRow row;
    row.id = "hand";
    row.prediction = toks("a b c d f");
    row.target = toks("a b c d e");
    const double score = bleu4({row});
    expect(std::fabs(score - 0.6687) <= 0.0005,
           "bleu " + std::to_string(score));
  }

  {
    std::mt19937_64 rng(99);
    const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
    for (int i = 0; i < 10000; ++i) {
      auto draw = [&](std::size_t max_len) {
        std::vector<std::string> out;
        const std::size_t len = rng() % (max_len + 1);
        for (std::size_t k = 0; k < len; ++k) {
          out.push_back(alphabet[rng() % alphabet.size()]);
        }
        return out;
      };
      const auto pred = draw(12);
      const auto target = draw(12);
      const std::size_t dist =
          jprep::testsupport::levenshtein_oracle(pred, target);
      const std::size_t denom = std::max(pred.size(), target.size());
      const double want =
          denom == 0 ? 0.0
                     : static_cast<double>(dist) / static_cast<double>(denom);
      const double got = norm_levenshtein(pred, target);
      expect(got == want, "norm_levenshtein " + std::to_string(got) +
                              " oracle " + std::to_string(want));
    }
  }

  for (std::size_t n10 = 0; n10 <= 20; ++n10) {
    for (std::size_t n01 = 0; n10 + n01 <= 20; ++n01) {
      std::vector<bool> a;
      std::vector<bool> b;
      for (std::size_t k = 0; k < n10; ++k) {
        a.push_back(true);
        b.push_back(false);
      }
      for (std::size_t k = 0; k < n01; ++k) {
        a.push_back(false);
        b.push_back(true);
      }
      for (int k = 0; k < 3; ++k) {  // concordant padding
        a.push_back(true);
        b.push_back(true);
        a.push_back(false);
        b.push_back(false);
      }
      const McNemarResult result = mcnemar(a, b);
      expect(result.n10 == n10 && result.n01 == n01, "cell counts");
      const double want = jprep::testsupport::mcnemar_enumeration(n10, n01);
      expect(std::fabs(result.p - want) < 1e-12,
             "mcnemar(" + std::to_string(n10) + "," + std::to_string(n01) +
                 ") = " + std::to_string(result.p) + " enumeration " +
                 std::to_string(want));
    }
  }

  const std::vector<double> adjusted = holm_adjust({0.01, 0.04, 0.03});
  expect(adjusted == std::vector<double>({0.03, 0.06, 0.06}),
         "holm adjustment");
  expect(odds_ratio_paired(10, 0) == 21.0, "odds ratio");
}

// ----------------------------------------------------------------- 9

void check_determinism(const std::string& cli) {
  expect(!cli.empty(), "CLI path argument missing");
  TempDir dir;
  const std::filesystem::path raw = dir.path / "raw.jsonl";
  write_raw_corpus(raw, 300, 123);

  auto run = [&](const std::string& args) {
    const std::string command = cli + " " + args;
    const int rc = std::system(command.c_str());
    expect(rc == 0, "command failed: " + command);
  };

  for (const int workers : {1, 4}) {
    const std::filesystem::path out = dir.path / std::to_string(workers);
    std::filesystem::create_directories(out);
    const std::string w = " --seed 42 --workers " + std::to_string(workers);
    const auto p = [&](const char* name) {
      return (out / name).string();
    };
    run("clean --input " + raw.string() + " --output " + p("records.jsonl") +
        " --rejects " + p("rejects.jsonl") + w);
    run("ngram-train --input " + p("records.jsonl") + " --output " +
        p("model.json") + w);
    run("pretrain-gen --input " + p("records.jsonl") + " --model " +
        p("model.json") + " --output " + p("pretrain.jsonl") +
        " --objectives mlm,nsp,rtd,imf,mng,cbs" + w);
    run("mutate --input " + p("records.jsonl") + " --output " +
        p("mutants.jsonl") + w);
    run("finetune-build --task summarization --input " + p("records.jsonl") +
        " --output " + p("summarization.jsonl") + " --size 200" + w);
    run("finetune-build --task completion --input " + p("records.jsonl") +
        " --output " + p("completion.jsonl") + w);
    run("split --input " + p("summarization.jsonl") + " --output " +
        p("splits.jsonl") + w);
  }

  std::vector<std::string> names;
  for (const auto& entry :
       std::filesystem::directory_iterator(dir.path / "1")) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  expect(names.size() >= 14, "expected outputs and manifests, found " +
                                 std::to_string(names.size()));
  std::size_t manifests = 0;
  for (const std::string& name : names) {
    const std::string a = read_bytes(dir.path / "1" / name);
    const std::filesystem::path other = dir.path / "4" / name;
    expect(std::filesystem::exists(other), name + " missing from second run");
    expect(a == read_bytes(other), name + " differs between worker counts");
    if (name.find(".manifest.json") != std::string::npos) ++manifests;
  }
  std::size_t other_count = 0;
  for (const auto& entry :
       std::filesystem::directory_iterator(dir.path / "4")) {
    (void)entry;
    ++other_count;
  }
  expect(other_count == names.size(), "runs produced different file sets");
  expect(manifests >= 7, "manifests compared: " + std::to_string(manifests));
}

// ----------------------------------------------------------------- 10

void check_throughput(double* elapsed_out) {
  TempDir dir;
  const std::filesystem::path raw = dir.path / "raw.jsonl";
  write_raw_corpus(raw, 10000, 2030);

  const auto start = Clock::now();

  PipelineOptions clean_options;
  clean_options.input = raw.string();
  clean_options.output = dir.file("records.jsonl");
  clean_options.workers = 4;
  expect(run_clean(clean_options) == 0, "clean failed");

  PipelineOptions ngram_options;
  ngram_options.input = dir.file("records.jsonl");
  ngram_options.output = dir.file("model.json");
  ngram_options.workers = 4;
  expect(run_ngram_train(ngram_options) == 0, "ngram-train failed");

  PipelineOptions gen_options;
  gen_options.input = dir.file("records.jsonl");
  gen_options.model = dir.file("model.json");
  gen_options.output = dir.file("pretrain.jsonl");
  gen_options.objectives = "mlm,nsp,rtd,imf,mng,cbs";
  gen_options.workers = 4;
  expect(run_pretrain_gen(gen_options) == 0, "pretrain-gen failed");

  const double elapsed = seconds_since(start);
  *elapsed_out = elapsed;
  expect(elapsed < 300.0, "took " + std::to_string(elapsed) + " s");

  const auto rows = read_jsonl(dir.file("pretrain.jsonl"));
  expect(rows.size() > 40000,
         "instance count " + std::to_string(rows.size()));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;
  double throughput_seconds = 0.0;

  const auto criterion = [&](int index, const std::string& name,
                             const std::function<void()>& body) {
    std::string detail;
    bool ok = true;
    try {
      body();
    } catch (const Failure& failure) {
      ok = false;
      detail = failure.detail;
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  " << index << "  " << name;
    if (!ok) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
  };

  criterion(1, "split reproduction at 27,901 records", check_split_reproduction);
  criterion(2, "masking and replacement rates", check_masking_rates);
  criterion(3, "rtd equals the trigram-count oracle", check_rtd_oracle);
  criterion(4, "mutation golden corpus and fuzzing", check_mutation_suite);
  criterion(5, "round-trip reconstruction", check_reconstruction);
  criterion(6, "nsp and cbs label balance", check_balance);
  criterion(7, "cleaning golden run", check_cleaning_golden);
  criterion(8, "metrics against independent oracles", check_metrics_oracles);
  criterion(9, "worker-count determinism", [&] { check_determinism(cli); });
  criterion(10, "desk-scale throughput",
            [&] { check_throughput(&throughput_seconds); });
  if (throughput_seconds > 0.0) {
    std::cout << "      (10k-method clean + six objectives in "
              << throughput_seconds << " s)" << std::endl;
  }

  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}

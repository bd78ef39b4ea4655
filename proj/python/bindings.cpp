#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "jprep/clean.hpp"
#include "jprep/finetune.hpp"
#include "jprep/lexer.hpp"
#include "jprep/metrics.hpp"
#include "jprep/mutation.hpp"
#include "jprep/objectives.hpp"
#include "jprep/pipeline.hpp"
#include "jprep/structure.hpp"
#include "jprep/token.hpp"

namespace py = pybind11;

namespace {

jprep::MethodRecord record_from_sources(const std::string& id,
                                        const std::string& method_source,
                                        const std::string& summary_text) {
  jprep::MethodRecord rec;
  rec.id = id;
  rec.method_tokens = jprep::token_texts(jprep::tokenize(method_source));
  rec.summary_tokens = jprep::tokenize_natural(summary_text);
  rec.hash = jprep::method_hash(rec.method_tokens);
  return rec;
}

py::dict record_dict(const jprep::MethodRecord& rec) {
  py::dict out;
  out["id"] = rec.id;
  out["method"] = jprep::render_method(rec);
  out["summary"] = jprep::render_summary(rec);
  out["method_tokens"] = rec.method_tokens;
  out["summary_tokens"] = rec.summary_tokens;
  out["links"] = rec.link_table;
  out["hash"] = rec.hash;
  return out;
}

py::dict instance_dict(const jprep::PretrainInstance& inst) {
  py::dict out;
  out["id"] = inst.id;
  out["objective"] = std::string(jprep::objective_name(inst.objective));
  out["input"] = inst.input;
  out["target"] = inst.target;
  return out;
}

std::vector<jprep::PredictionRow> rows_from_pairs(
    const std::vector<std::pair<std::vector<std::string>,
                                std::vector<std::string>>>& pairs) {
  std::vector<jprep::PredictionRow> rows;
  rows.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    jprep::PredictionRow row;
    row.id = std::to_string(i);
    row.prediction = pairs[i].first;
    row.target = pairs[i].second;
    rows.push_back(std::move(row));
  }
  return rows;
}

jprep::PipelineOptions options_from_kwargs(const py::kwargs& kwargs) {
  jprep::PipelineOptions options;
  for (const auto& item : kwargs) {
    const std::string key = py::cast<std::string>(item.first);
    const py::handle value = item.second;
    if (key == "input") options.input = py::cast<std::string>(value);
    else if (key == "output") options.output = py::cast<std::string>(value);
    else if (key == "rejects") options.rejects = py::cast<std::string>(value);
    else if (key == "against") options.against = py::cast<std::string>(value);
    else if (key == "model") options.model = py::cast<std::string>(value);
    else if (key == "dataset") options.dataset = py::cast<std::string>(value);
    else if (key == "predictions")
      options.predictions = py::cast<std::string>(value);
    else if (key == "names") options.names = py::cast<std::string>(value);
    else if (key == "csv") options.csv = py::cast<std::string>(value);
    else if (key == "task") options.task = py::cast<std::string>(value);
    else if (key == "objectives")
      options.objectives = py::cast<std::string>(value);
    else if (key == "seed") options.seed = py::cast<std::uint64_t>(value);
    else if (key == "workers") options.workers = py::cast<int>(value);
    else if (key == "mask_rate") options.mask_rate = py::cast<double>(value);
    else if (key == "max_tokens")
      options.max_tokens = py::cast<std::uint64_t>(value);
    else if (key == "train_frac")
      options.train_frac = py::cast<double>(value);
    else if (key == "val_frac") options.val_frac = py::cast<double>(value);
    else if (key == "size") options.size = py::cast<std::uint64_t>(value);
    else if (key == "imf_all") options.imf_all = py::cast<bool>(value);
    else throw py::value_error("unknown option: " + key);
  }
  return options;
}

}  // namespace

PYBIND11_MODULE(jprep, m) {
  m.doc() = "Deterministic preprocessing for Java method/comment corpora";

  m.def(
      "tokenize",
      [](const std::string& source) {
        return jprep::token_texts(jprep::tokenize(source));
      },
      py::arg("source"), "Lex Java source into canonical token texts.");

  m.def(
      "detokenize",
      [](const std::vector<std::string>& tokens) {
        return jprep::detokenize(tokens);
      },
      py::arg("tokens"), "Render token texts back to canonical source.");

  m.def("tokenize_natural", &jprep::tokenize_natural, py::arg("text"),
        "Split summary text into word and punctuation tokens.");

  m.def("extract_description", &jprep::extract_description,
        py::arg("javadoc"),
        "Return the Javadoc description before the first tag.");

  m.def("method_hash", &jprep::method_hash, py::arg("method_tokens"),
        "Digest of the canonical method rendering.");

  m.def(
      "clean_pair",
      [](const std::string& id, const std::string& method,
         const std::string& javadoc, std::size_t max_tokens) {
        jprep::RawPair pair;
        pair.id = id;
        pair.method_source = method;
        pair.javadoc_source = javadoc;
        const jprep::CleanResult result =
            jprep::clean_pair(pair, jprep::default_english_detector,
                              max_tokens);
        py::dict out;
        out["accepted"] = result.accepted();
        out["reason"] = result.reason
                            ? py::object(py::str(std::string(
                                  jprep::reject_reason_name(*result.reason))))
                            : py::object(py::none());
        out["record"] = result.record ? py::object(record_dict(*result.record))
                                      : py::object(py::none());
        return out;
      },
      py::arg("id"), py::arg("method"), py::arg("javadoc"),
      py::arg("max_tokens") = 512,
      "Run the full cleaning filter chain on one raw pair.");

  m.def(
      "mutants",
      [](const std::string& method_source) {
        const auto tokens = jprep::tokenize(method_source);
        const auto shape = jprep::parse_structure(tokens);
        py::list out;
        for (const jprep::Mutant& mutant :
             jprep::enumerate_mutants(tokens, shape)) {
          py::dict row;
          row["operator"] =
              std::string(jprep::mutation_operator_name(mutant.op));
          row["mutated"] = jprep::detokenize(mutant.mutated_tokens);
          out.append(row);
        }
        return out;
      },
      py::arg("method"), "Enumerate all single-operator mutants.");

  m.def(
      "mlm_instance",
      [](const std::string& id, const std::string& method,
         const std::string& summary, std::uint64_t seed, double rate) {
        return instance_dict(jprep::gen_mlm(
            jprep::parse_record(record_from_sources(id, method, summary)),
            seed, rate));
      },
      py::arg("id"), py::arg("method"), py::arg("summary"), py::arg("seed"),
      py::arg("rate") = 0.15,
      "Masked-token instance for one method/summary pair.");

  m.def(
      "mng_instance",
      [](const std::string& id, const std::string& method,
         const std::string& summary) {
        return instance_dict(jprep::gen_mng(
            jprep::parse_record(record_from_sources(id, method, summary))));
      },
      py::arg("id"), py::arg("method"), py::arg("summary"),
      "Name-generation instance for one method/summary pair.");

  m.def(
      "exact_match",
      [](const std::vector<std::pair<std::vector<std::string>,
                                     std::vector<std::string>>>& pairs) {
        const auto result = jprep::exact_match(rows_from_pairs(pairs));
        std::vector<bool> correct(result.correct.begin(),
                                  result.correct.end());
        return py::make_tuple(result.rate, correct);
      },
      py::arg("pairs"),
      "Exact-match rate over (prediction, target) token pairs.");

  m.def(
      "bleu4",
      [](const std::vector<std::pair<std::vector<std::string>,
                                     std::vector<std::string>>>& pairs) {
        return jprep::bleu4(rows_from_pairs(pairs));
      },
      py::arg("pairs"),
      "Corpus BLEU-4 over (prediction, target) token pairs.");

  m.def("norm_levenshtein", &jprep::norm_levenshtein, py::arg("prediction"),
        py::arg("target"),
        "Token edit distance divided by the longer length.");

  m.def(
      "mcnemar",
      [](const std::vector<bool>& correct_a,
         const std::vector<bool>& correct_b) {
        const auto result = jprep::mcnemar(correct_a, correct_b);
        py::dict out;
        out["p"] = result.p;
        out["n00"] = result.n00;
        out["n01"] = result.n01;
        out["n10"] = result.n10;
        out["n11"] = result.n11;
        return out;
      },
      py::arg("correct_a"), py::arg("correct_b"),
      "Paired McNemar test over aligned correctness vectors.");

  m.def("odds_ratio_paired", &jprep::odds_ratio_paired, py::arg("n10"),
        py::arg("n01"), "Discordant-pair odds ratio.");

  m.def("holm_adjust", &jprep::holm_adjust, py::arg("pvalues"),
        "Holm step-down adjustment, in input order.");

  m.def(
      "split_sizes",
      [](std::size_t n, double train_frac, double val_frac) {
        const auto sizes = jprep::split_sizes(n, train_frac, val_frac);
        return py::make_tuple(sizes.train, sizes.validation, sizes.test);
      },
      py::arg("n"), py::arg("train_frac") = 0.8, py::arg("val_frac") = 0.1,
      "Rounded (train, validation, test) sizes.");

  m.def(
      "run",
      [](const std::string& command, const py::kwargs& kwargs) {
        return jprep::run_command(command, options_from_kwargs(kwargs));
      },
      py::arg("command"),
      "Run one pipeline command (clean, ngram-train, pretrain-gen, mutate, "
      "finetune-build, split, eval, compare) with keyword options.");
}

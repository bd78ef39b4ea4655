#include "jprep/objectives.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <utility>

#include "jprep/lexer.hpp"
#include "jprep/rng.hpp"

namespace jprep {

namespace {

constexpr std::array<std::pair<Objective, std::string_view>, 6> kObjectives = {{
    {Objective::Mlm, "mlm"},
    {Objective::Nsp, "nsp"},
    {Objective::Rtd, "rtd"},
    {Objective::Imf, "imf"},
    {Objective::Mng, "mng"},
    {Objective::Cbs, "cbs"},
}};

// Maskable positions: every surface token except the separator.
std::vector<std::size_t> choose_positions(const std::vector<std::string>& surface,
                                          double rate, DetRng& rng) {
  std::vector<std::size_t> maskable;
  maskable.reserve(surface.size());
  for (std::size_t i = 0; i < surface.size(); ++i) {
    if (surface[i] != kSepToken) maskable.push_back(i);
  }
  const std::size_t n = surface.size();
  std::size_t m = std::max<std::size_t>(
      1, static_cast<std::size_t>(rate * static_cast<double>(n)));
  m = std::min(m, maskable.size());
  std::vector<std::size_t> picks = rng.sample_indices(maskable.size(), m);
  std::vector<std::size_t> positions;
  positions.reserve(m);
  for (const std::size_t p : picks) positions.push_back(maskable[p]);
  return positions;  // ascending because picks are ascending
}

std::vector<std::string> statement_tokens(const ParsedRecord& rec,
                                          const TokenSpan& span) {
  std::vector<std::string> out;
  out.reserve(span.last - span.first + 1);
  for (std::size_t i = span.first; i <= span.last; ++i) {
    out.push_back(rec.method_lex[i].text);
  }
  return out;
}

PretrainInstance make_instance(Objective objective, const ParsedRecord& rec,
                               std::uint64_t seed, std::string id_suffix = {}) {
  PretrainInstance inst;
  inst.objective = objective;
  inst.source_id = rec.record.id;
  inst.id = rec.record.id + "/" + std::string(objective_name(objective)) +
            id_suffix;
  inst.seed = seed;
  return inst;
}

}  // namespace

std::string_view objective_name(Objective objective) {
  for (const auto& [obj, name] : kObjectives) {
    if (obj == objective) return name;
  }
  return "?";
}

std::optional<Objective> objective_from_name(std::string_view name) {
  for (const auto& [obj, obj_name] : kObjectives) {
    if (obj_name == name) return obj;
  }
  return std::nullopt;
}

ParsedRecord parse_record(MethodRecord record) {
  ParsedRecord rec;
  rec.method_lex = tokenize(detokenize(record.method_tokens));
  rec.shape = parse_structure(rec.method_lex);
  rec.record = std::move(record);
  return rec;
}

std::vector<std::string> instance_surface(const MethodRecord& record) {
  std::vector<std::string> surface;
  surface.reserve(record.summary_tokens.size() + 1 +
                  record.method_tokens.size());
  surface.insert(surface.end(), record.summary_tokens.begin(),
                 record.summary_tokens.end());
  surface.emplace_back(kSepToken);
  surface.insert(surface.end(), record.method_tokens.begin(),
                 record.method_tokens.end());
  return surface;
}

PretrainInstance gen_mlm(const ParsedRecord& rec, std::uint64_t global_seed,
                         double rate) {
  const std::uint64_t seed = derive_seed(global_seed, rec.record.id, "mlm");
  DetRng rng(seed);
  const std::vector<std::string> surface = instance_surface(rec.record);
  const std::vector<std::size_t> positions = choose_positions(surface, rate, rng);

  PretrainInstance inst = make_instance(Objective::Mlm, rec, seed);
  inst.input = surface;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    const std::string sentinel = "<MASK_" + std::to_string(j) + ">";
    inst.target.push_back(sentinel);
    inst.target.push_back(surface[positions[j]]);
    inst.input[positions[j]] = sentinel;
  }
  return inst;
}

PretrainInstance gen_rtd(const ParsedRecord& rec, const NgramModel& model,
                         std::uint64_t global_seed, double rate) {
  const std::uint64_t seed = derive_seed(global_seed, rec.record.id, "rtd");
  DetRng rng(seed);
  const std::vector<std::string> surface = instance_surface(rec.record);
  const std::vector<std::size_t> positions = choose_positions(surface, rate, rng);

  PretrainInstance inst = make_instance(Objective::Rtd, rec, seed);
  inst.input = surface;
  const std::string bos{kBosToken};
  for (const std::size_t p : positions) {
    // Context comes from the original surface, <BOS>-padded at the front.
    const std::string& prev2 = p >= 2 ? surface[p - 2] : bos;
    const std::string& prev1 = p >= 1 ? surface[p - 1] : bos;
    inst.input[p] = model.rtd_choice(prev2, prev1, surface[p]);
    inst.target.push_back(std::to_string(p));
  }
  return inst;
}

std::vector<PretrainInstance> gen_nsp(const std::vector<ParsedRecord>& records,
                                      std::uint64_t global_seed) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].shape.statements.size() >= 2) eligible.push_back(i);
  }
  std::vector<PretrainInstance> out;
  out.reserve(eligible.size());
  for (std::size_t ei = 0; ei < eligible.size(); ++ei) {
    const ParsedRecord& rec = records[eligible[ei]];
    const auto& stmts = rec.shape.statements;
    const std::uint64_t seed = derive_seed(global_seed, rec.record.id, "nsp");
    DetRng rng(seed);

    PretrainInstance inst = make_instance(Objective::Nsp, rec, seed);
    const bool positive = rng.coin();
    std::vector<std::string> first;
    std::vector<std::string> second;
    if (positive) {
      const std::size_t i = rng.below(stmts.size() - 1);
      first = statement_tokens(rec, stmts[i]);
      second = statement_tokens(rec, stmts[i + 1]);
      inst.target = {"yes"};
    } else {
      const std::size_t i = rng.below(stmts.size());
      first = statement_tokens(rec, stmts[i]);
      // Same-method candidates: statements other than i and its successor.
      std::vector<std::size_t> choices;
      for (std::size_t j = 0; j < stmts.size(); ++j) {
        if (j != i && j != i + 1) choices.push_back(j);
      }
      const bool has_donor = eligible.size() > 1;
      const bool cross_method =
          has_donor && (choices.empty() || rng.coin());
      if (cross_method) {
        std::size_t k = rng.below(eligible.size() - 1);
        if (k >= ei) ++k;
        const ParsedRecord& donor = records[eligible[k]];
        const auto& donor_stmts = donor.shape.statements;
        second = statement_tokens(donor,
                                  donor_stmts[rng.below(donor_stmts.size())]);
      } else {
        if (choices.empty()) {
          // Single two-statement method: only the reversed pair remains.
          for (std::size_t j = 0; j < stmts.size(); ++j) {
            if (j != i + 1) choices.push_back(j);
          }
        }
        second = statement_tokens(rec, stmts[choices[rng.below(choices.size())]]);
      }
      inst.target = {"no"};
    }
    inst.input = std::move(first);
    inst.input.emplace_back(kSepToken);
    inst.input.insert(inst.input.end(), second.begin(), second.end());
    out.push_back(std::move(inst));
  }
  return out;
}

std::optional<PretrainInstance> gen_imf(const ParsedRecord& rec,
                                        std::uint64_t global_seed) {
  const std::uint64_t seed = derive_seed(global_seed, rec.record.id, "imf");
  std::optional<Mutant> mutant = sample_one(rec.method_lex, rec.shape, seed);
  if (!mutant) return std::nullopt;
  PretrainInstance inst = make_instance(Objective::Imf, rec, seed);
  inst.input = std::move(mutant->mutated_tokens);
  inst.target = rec.record.method_tokens;
  return inst;
}

std::vector<PretrainInstance> gen_imf_all(const ParsedRecord& rec) {
  std::vector<PretrainInstance> out;
  const std::vector<Mutant> mutants = enumerate_mutants(rec.method_lex, rec.shape);
  out.reserve(mutants.size());
  for (std::size_t k = 0; k < mutants.size(); ++k) {
    PretrainInstance inst = make_instance(Objective::Imf, rec, 0,
                                          "-" + std::to_string(k));
    inst.input = mutants[k].mutated_tokens;
    inst.target = rec.record.method_tokens;
    out.push_back(std::move(inst));
  }
  return out;
}

PretrainInstance gen_mng(const ParsedRecord& rec) {
  PretrainInstance inst = make_instance(Objective::Mng, rec, 0);
  const std::string& name = rec.method_lex[rec.shape.name_index].text;
  inst.input = rec.record.method_tokens;
  for (auto& t : inst.input) {
    if (t == name) t = std::string(kNameToken);
  }
  inst.target = {name};
  return inst;
}

std::vector<PoolBlock> build_block_pool(
    const std::vector<ParsedRecord>& records) {
  std::vector<PoolBlock> pool;
  for (const ParsedRecord& rec : records) {
    for (const Block& block : rec.shape.blocks) {
      PoolBlock entry;
      entry.record_id = rec.record.id;
      entry.tokens.reserve(block.span.last - block.span.first + 1);
      for (std::size_t i = block.span.first; i <= block.span.last; ++i) {
        entry.tokens.push_back(rec.method_lex[i].text);
      }
      pool.push_back(std::move(entry));
    }
  }
  return pool;
}

std::optional<PretrainInstance> gen_cbs(const ParsedRecord& rec,
                                        const std::vector<PoolBlock>& pool,
                                        std::uint64_t global_seed) {
  if (rec.shape.blocks.empty()) return std::nullopt;
  const std::uint64_t seed = derive_seed(global_seed, rec.record.id, "cbs");
  DetRng rng(seed);
  const Block& block =
      rec.shape.blocks[rng.below(rec.shape.blocks.size())];
  std::vector<std::string> truth;
  truth.reserve(block.span.last - block.span.first + 1);
  for (std::size_t i = block.span.first; i <= block.span.last; ++i) {
    truth.push_back(rec.method_lex[i].text);
  }

  // Distractors must come from other records and differ from the true block;
  // prefer candidates within +-50% of the true block's token length.
  std::vector<std::size_t> usable;
  std::vector<std::size_t> near_length;
  const double len = static_cast<double>(truth.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const PoolBlock& cand = pool[i];
    if (cand.record_id == rec.record.id || cand.tokens == truth) continue;
    usable.push_back(i);
    const double cl = static_cast<double>(cand.tokens.size());
    if (cl >= 0.5 * len && cl <= 1.5 * len) near_length.push_back(i);
  }
  if (usable.empty()) return std::nullopt;
  const auto& candidates = near_length.empty() ? usable : near_length;
  const PoolBlock& distractor = pool[candidates[rng.below(candidates.size())]];

  PretrainInstance inst = make_instance(Objective::Cbs, rec, seed);
  inst.input = rec.record.method_tokens;
  inst.input.erase(inst.input.begin() + static_cast<std::ptrdiff_t>(block.span.first),
                   inst.input.begin() + static_cast<std::ptrdiff_t>(block.span.last + 1));
  inst.input.insert(inst.input.begin() + static_cast<std::ptrdiff_t>(block.span.first),
                    std::string(kBlockToken));

  const bool truth_first = rng.coin();
  const auto& cand0 = truth_first ? truth : distractor.tokens;
  const auto& cand1 = truth_first ? distractor.tokens : truth;
  inst.input.emplace_back(kCand0Token);
  inst.input.insert(inst.input.end(), cand0.begin(), cand0.end());
  inst.input.emplace_back(kCand1Token);
  inst.input.insert(inst.input.end(), cand1.begin(), cand1.end());
  inst.target = {truth_first ? "0" : "1"};
  return inst;
}

std::vector<PretrainInstance> mix_objectives(
    std::vector<std::vector<PretrainInstance>> streams, std::uint64_t seed) {
  std::vector<PretrainInstance> mixed;
  std::size_t total = 0;
  for (const auto& s : streams) total += s.size();
  mixed.reserve(total);
  for (auto& stream : streams) {
    for (auto& inst : stream) {
      inst.input.insert(inst.input.begin(),
                        std::string(objective_name(inst.objective)));
      mixed.push_back(std::move(inst));
    }
  }
  DetRng rng(seed);
  rng.shuffle(mixed);
  return mixed;
}

}  // namespace jprep

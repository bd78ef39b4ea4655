#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jprep/clean.hpp"
#include "jprep/mutation.hpp"
#include "jprep/ngram.hpp"
#include "jprep/structure.hpp"
#include "jprep/token.hpp"

namespace jprep {

enum class Objective { Mlm, Nsp, Rtd, Imf, Mng, Cbs };

std::string_view objective_name(Objective objective);
std::optional<Objective> objective_from_name(std::string_view name);

struct PretrainInstance {
  std::string id;
  Objective objective;
  std::vector<std::string> input;
  std::vector<std::string> target;
  std::string source_id;
  std::uint64_t seed = 0;
};

// A cleaned record plus its lexed tokens and structural shape.
struct ParsedRecord {
  MethodRecord record;
  std::vector<Token> method_lex;
  MethodShape shape;
};

ParsedRecord parse_record(MethodRecord record);

// The masked surface shared by the masking and replacement objectives:
// summary + <SEP> + method.
std::vector<std::string> instance_surface(const MethodRecord& record);

// Masked-token prediction: m = max(1, floor(rate * N)) positions over the
// N-token surface (the separator itself is never masked), ascending position
// j replaced by <MASK_j>; target pairs each mask with the hidden token.
PretrainInstance gen_mlm(const ParsedRecord& rec, std::uint64_t global_seed,
                         double rate = 0.15);

// Replaced-token detection: same position rule as masking; each chosen token
// is replaced via NgramModel::rtd_choice with its two original predecessors
// (<BOS>-padded) as context; the target lists the replaced positions.
PretrainInstance gen_rtd(const ParsedRecord& rec, const NgramModel& model,
                         std::uint64_t global_seed, double rate = 0.15);

// Next-statement prediction over top-level body statements. One instance per
// method with >= 2 statements; positives are adjacent pairs, negatives pair a
// statement with one that does not immediately follow it (cross-method with
// probability 1/2).
std::vector<PretrainInstance> gen_nsp(const std::vector<ParsedRecord>& records,
                                      std::uint64_t global_seed);

// Mutant-fixing: one sampled mutant as input, the original method as target.
std::optional<PretrainInstance> gen_imf(const ParsedRecord& rec,
                                        std::uint64_t global_seed);
// All mutants of the method, in enumeration order.
std::vector<PretrainInstance> gen_imf_all(const ParsedRecord& rec);

// Name generation: every token equal to the method name becomes <NAME>.
PretrainInstance gen_mng(const ParsedRecord& rec);

struct PoolBlock {
  std::string record_id;
  std::vector<std::string> tokens;
};

std::vector<PoolBlock> build_block_pool(const std::vector<ParsedRecord>& records);

// Block selection: one block is replaced by <BLOCK>; the true block and a
// pool distractor (token length within +-50% when any such candidate exists)
// are appended as <CAND_0>/<CAND_1> in seeded order; target is "0" or "1".
// nullopt when the method has no block or the pool has no usable distractor.
std::optional<PretrainInstance> gen_cbs(const ParsedRecord& rec,
                                        const std::vector<PoolBlock>& pool,
                                        std::uint64_t global_seed);

// Multi-task mixing: prefixes every instance input with its objective tag
// token and applies one seeded shuffle to the concatenated streams.
std::vector<PretrainInstance> mix_objectives(
    std::vector<std::vector<PretrainInstance>> streams, std::uint64_t seed);

}  // namespace jprep

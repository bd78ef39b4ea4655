#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jprep/structure.hpp"
#include "jprep/token.hpp"

namespace jprep {

// Default-group mutation operators, applied at the source level.
enum class MutationOperator {
  ConditionalsBoundary,
  Increments,
  InvertNegatives,
  Math,
  NegateConditionals,
  VoidMethodCalls,
  EmptyReturns,
  FalseReturns,
  TrueReturns,
  NullReturns,
  PrimitiveReturns,
};

inline constexpr int kMutationOperatorCount = 11;
std::string_view mutation_operator_name(MutationOperator op);
std::optional<MutationOperator> mutation_operator_from_name(std::string_view);

struct MutationSite {
  MutationOperator op;
  std::size_t begin = 0;  // token range [begin, end) to splice out
  std::size_t end = 0;
  std::vector<std::string> replacement;
};

struct Mutant {
  MutationOperator op;
  MutationSite site;
  std::vector<std::string> mutated_tokens;
};

struct IdenticalMutant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumerates applicable sites in a fixed order: operators in declaration
// order, token position ascending within an operator. Sites whose statement
// already equals the operator's target are suppressed.
std::vector<MutationSite> find_sites(const std::vector<Token>& tokens,
                                     const MethodShape& shape);

// Splices the site into the token stream. Throws IdenticalMutant when the
// splice is a no-op.
std::vector<std::string> apply_site(const std::vector<Token>& tokens,
                                    const MutationSite& site);

// All distinct mutants for one method (first site wins when two sites yield
// the same token stream).
std::vector<Mutant> enumerate_mutants(const std::vector<Token>& tokens,
                                      const MethodShape& shape);

// Uniform choice among the method's mutants, seeded; nullopt when none apply.
std::optional<Mutant> sample_one(const std::vector<Token>& tokens,
                                 const MethodShape& shape, std::uint64_t seed);

}  // namespace jprep

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "jprep/token.hpp"

namespace jprep {

enum class BlockOwner {
  If,
  Else,
  ElseIf,
  For,
  While,
  Do,
  Switch,
  Try,
  Catch,
  Finally,
  Synchronized,
};

std::string_view block_owner_name(BlockOwner owner);

// Inclusive token span [first, last].
struct TokenSpan {
  std::size_t first = 0;
  std::size_t last = 0;
};

// A control-flow block: code between two curly brackets owned by one of the
// BlockOwner constructs. The method body itself is not a block; neither are
// lambda bodies, anonymous-class bodies or expression-level braces.
struct Block {
  TokenSpan span;                    // includes both braces
  BlockOwner owner = BlockOwner::If;
  int top_level_statement_count = 0; // statements directly inside
  int depth = 0;                     // number of enclosing blocks
};

struct ParseError : std::runtime_error {
  enum class Kind { UnbalancedBraces, NoMethodHeader };
  ParseError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind(kind) {}
  Kind kind;
};

struct MethodShape {
  std::size_t name_index = 0;        // Identifier immediately followed by "("
  std::string return_type_text;      // "" for constructors
  std::size_t body_open = 0;         // index of the body "{"
  std::size_t body_close = 0;        // index of the final "}"
  std::vector<TokenSpan> statements;      // top level of the body
  std::vector<TokenSpan> all_statements;  // statements at every nesting level
  // Statements that are direct children of a braced region (method body,
  // control block or bare brace group); deleting one keeps the structure
  // well formed. Unbraced single-statement control bodies are excluded.
  std::vector<TokenSpan> braced_statements;
  std::vector<Block> blocks;  // ordered by opening-brace position
  std::vector<std::size_t> self_call_indices;
};

// Lightweight structural parse of exactly one method. Throws ParseError
// (UnbalancedBraces, NoMethodHeader) on malformed input.
MethodShape parse_structure(const std::vector<Token>& tokens);

}  // namespace jprep

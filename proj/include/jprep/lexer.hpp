#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jprep/token.hpp"

namespace jprep {

struct LexError : std::runtime_error {
  explicit LexError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset(offset) {}
  std::size_t offset = 0;
};

// Lexes Java source into a flat token stream. Comments are dropped; string,
// char and numeric literals are single tokens; multi-character operators are
// single tokens. Reserved sentinels (<LINK_0>, <BLOCK>, ...) lex atomically.
// Angle brackets that open/close generic type arguments are classified as
// Separator (and ">>"/">>>" closers are split); relational uses stay Operator.
// Throws LexError on an unterminated string or char literal.
std::vector<Token> tokenize(std::string_view source);

// Canonical rendering: tokens joined by single spaces, except no space before
// ";" "," "." ")" "]" "(" and no space after "(" "[" ".". Fixed point of
// tokenize: tokenize(detokenize(tokenize(s))) == tokenize(s).
std::string detokenize(const std::vector<std::string>& texts);
std::string detokenize(const std::vector<Token>& tokens);

bool is_java_keyword(std::string_view text);

// Replaces // and /* */ comments with a single space; literals are preserved.
// Lenient: unterminated constructs run to end of line/input without error.
std::string strip_comments(std::string_view source);

}  // namespace jprep

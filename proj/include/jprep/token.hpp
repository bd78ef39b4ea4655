#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jprep {

enum class TokenKind {
  Identifier,
  Keyword,
  NumberLiteral,
  StringLiteral,
  CharLiteral,
  Operator,
  Separator,
  AnnotationName,
};

struct Token {
  std::string text;
  TokenKind kind = TokenKind::Identifier;
  std::size_t begin = 0;  // byte offset into the source, [begin, end)
  std::size_t end = 0;
};

inline bool same_token(const Token& a, const Token& b) {
  return a.text == b.text && a.kind == b.kind;
}

std::vector<std::string> token_texts(const std::vector<Token>& tokens);

// Reserved sentinel vocabulary. <LINK_i> tags are produced by the cleaner;
// the rest are introduced by dataset generators and never by corpus text.
bool is_sentinel(std::string_view text);
// Length of the sentinel starting at text[pos], or 0 if none starts there.
std::size_t match_sentinel(std::string_view text, std::size_t pos);

inline constexpr std::string_view kSepToken = "<SEP>";
inline constexpr std::string_view kNameToken = "<NAME>";
inline constexpr std::string_view kBlockToken = "<BLOCK>";
inline constexpr std::string_view kCand0Token = "<CAND_0>";
inline constexpr std::string_view kCand1Token = "<CAND_1>";
inline constexpr std::string_view kBosToken = "<BOS>";

}  // namespace jprep

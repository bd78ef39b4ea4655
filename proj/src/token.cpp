#include "jprep/token.hpp"

namespace jprep {

std::vector<std::string> token_texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

namespace {

// Matches NAME_<digits> where NAME is "LINK" or "MASK"; returns chars consumed.
std::size_t match_indexed(std::string_view rest, std::string_view name) {
  if (rest.substr(0, name.size()) != name) return 0;
  std::size_t i = name.size();
  if (i >= rest.size() || rest[i] != '_') return 0;
  ++i;
  std::size_t digits = 0;
  while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') {
    ++i;
    ++digits;
  }
  if (digits == 0) return 0;
  return i;
}

}  // namespace

std::size_t match_sentinel(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || text[pos] != '<') return 0;
  const std::string_view rest = text.substr(pos + 1);
  std::size_t body = 0;
  for (const std::string_view fixed :
       {std::string_view("NAME"), std::string_view("BLOCK"),
        std::string_view("CAND_0"), std::string_view("CAND_1"),
        std::string_view("SEP"), std::string_view("BOS")}) {
    if (rest.substr(0, fixed.size()) == fixed) {
      body = fixed.size();
      break;
    }
  }
  if (body == 0) body = match_indexed(rest, "LINK");
  if (body == 0) body = match_indexed(rest, "MASK");
  if (body == 0) return 0;
  if (body >= rest.size() || rest[body] != '>') return 0;
  return body + 2;  // '<' + body + '>'
}

bool is_sentinel(std::string_view text) {
  return !text.empty() && match_sentinel(text, 0) == text.size();
}

}  // namespace jprep

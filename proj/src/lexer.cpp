#include "jprep/lexer.hpp"

#include <array>
#include <unordered_set>

namespace jprep {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "abstract", "assert",     "boolean",  "break",      "byte",
    "case",     "catch",      "char",     "class",      "const",
    "continue", "default",    "do",       "double",     "else",
    "enum",     "extends",    "final",    "finally",    "float",
    "for",      "goto",       "if",       "implements", "import",
    "instanceof", "int",      "interface", "long",      "native",
    "new",      "package",    "private",  "protected",  "public",
    "return",   "short",      "static",   "strictfp",   "super",
    "switch",   "synchronized", "this",   "throw",      "throws",
    "transient", "try",       "void",     "volatile",   "while",
    "true",     "false",      "null",
};

// Longest-match first.
constexpr std::array<std::string_view, 40> kOperators = {
    ">>>=", ">>>", "<<=", ">>=", "...", "==", "!=", "<=", ">=", "&&", "||",
    "++",  "--",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "<<",
    ">>",  "->",  "::",  "+",   "-",   "*",  "/",  "%",  "=",  "<",  ">",
    "!",   "&",   "|",   "^",   "~",   "?",  ":",
};

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_hex_digit(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  char peek(std::size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }
  bool done() const { return pos >= src.size(); }

  void skip_space_and_comments() {
    for (;;) {
      while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r' ||
                         peek() == '\n' || peek() == '\f')) {
        ++pos;
      }
      if (peek() == '/' && peek(1) == '/') {
        while (!done() && peek() != '\n') ++pos;
        continue;
      }
      if (peek() == '/' && peek(1) == '*') {
        pos += 2;
        while (!done() && !(peek() == '*' && peek(1) == '/')) ++pos;
        pos = done() ? src.size() : pos + 2;
        continue;
      }
      return;
    }
  }

  Token lex_string() {
    const std::size_t start = pos;
    ++pos;  // opening quote
    while (!done()) {
      const char c = peek();
      if (c == '\\') {
        pos += 2;
        continue;
      }
      if (c == '\n') break;
      ++pos;
      if (c == '"') {
        return {std::string(src.substr(start, pos - start)),
                TokenKind::StringLiteral, start, pos};
      }
    }
    throw LexError("unterminated string literal", start);
  }

  Token lex_char() {
    const std::size_t start = pos;
    ++pos;
    while (!done()) {
      const char c = peek();
      if (c == '\\') {
        pos += 2;
        continue;
      }
      if (c == '\n') break;
      ++pos;
      if (c == '\'') {
        return {std::string(src.substr(start, pos - start)),
                TokenKind::CharLiteral, start, pos};
      }
    }
    throw LexError("unterminated char literal", start);
  }

  Token lex_number() {
    const std::size_t start = pos;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      pos += 2;
      while (is_hex_digit(peek()) || peek() == '_') ++pos;
      if (peek() == '.') {  // hex float
        ++pos;
        while (is_hex_digit(peek()) || peek() == '_') ++pos;
      }
      if (peek() == 'p' || peek() == 'P') {
        ++pos;
        if (peek() == '+' || peek() == '-') ++pos;
        while (is_digit(peek())) ++pos;
      }
    } else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
      pos += 2;
      while (peek() == '0' || peek() == '1' || peek() == '_') ++pos;
    } else {
      while (is_digit(peek()) || peek() == '_') ++pos;
      if (peek() == '.' && is_digit(peek(1))) {
        ++pos;
        while (is_digit(peek()) || peek() == '_') ++pos;
      } else if (peek() == '.' && start < pos &&
                 (peek(1) == 'f' || peek(1) == 'F' || peek(1) == 'd' ||
                  peek(1) == 'D' || peek(1) == 'e' || peek(1) == 'E' ||
                  !is_ident_start(peek(1)))) {
        // trailing dot as in "1." or "1.e3"; leave "1.foo()" to the '.' token
        bool take = true;
        if (peek(1) == '.') take = false;  // "1.." keeps the dots separate
        if (take) ++pos;
      }
      if (peek() == 'e' || peek() == 'E') {
        if (is_digit(peek(1)) ||
            ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2)))) {
          ++pos;
          if (peek() == '+' || peek() == '-') ++pos;
          while (is_digit(peek())) ++pos;
        }
      }
    }
    if (peek() == 'l' || peek() == 'L' || peek() == 'f' || peek() == 'F' ||
        peek() == 'd' || peek() == 'D') {
      ++pos;
    }
    return {std::string(src.substr(start, pos - start)), TokenKind::NumberLiteral,
            start, pos};
  }

  Token lex_word() {
    const std::size_t start = pos;
    while (!done() && is_ident_part(static_cast<unsigned char>(peek()))) ++pos;
    std::string text(src.substr(start, pos - start));
    const TokenKind kind =
        is_java_keyword(text) ? TokenKind::Keyword : TokenKind::Identifier;
    return {std::move(text), kind, start, pos};
  }

  Token next_token() {
    const std::size_t start = pos;
    const char c = peek();
    if (const std::size_t len = match_sentinel(src, pos); len > 0) {
      pos += len;
      return {std::string(src.substr(start, len)), TokenKind::Identifier, start,
              pos};
    }
    if (c == '"') return lex_string();
    if (c == '\'') return lex_char();
    if (is_digit(static_cast<unsigned char>(c)) ||
        (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
      return lex_number();
    }
    if (is_ident_start(static_cast<unsigned char>(c))) return lex_word();
    if (c == '@' && is_ident_start(static_cast<unsigned char>(peek(1)))) {
      ++pos;
      while (!done() && is_ident_part(static_cast<unsigned char>(peek()))) ++pos;
      return {std::string(src.substr(start, pos - start)),
              TokenKind::AnnotationName, start, pos};
    }
    switch (c) {
      case '(': case ')': case '{': case '}': case '[': case ']':
      case ';': case ',': case '.':
        ++pos;
        return {std::string(1, c), TokenKind::Separator, start, pos};
      default:
        break;
    }
    for (const std::string_view op : kOperators) {
      if (src.substr(pos, op.size()) == op) {
        pos += op.size();
        const TokenKind kind =
            (op == "..." || op == "::") ? TokenKind::Separator : TokenKind::Operator;
        return {std::string(op), kind, start, pos};
      }
    }
    // Unknown byte (e.g. stray '#'); emit it as a one-char operator so the
    // stream stays lossless.
    ++pos;
    return {std::string(1, c), TokenKind::Operator, start, pos};
  }
};

bool type_like(const Token& t) {
  if (t.kind == TokenKind::Identifier || t.kind == TokenKind::AnnotationName) {
    return true;
  }
  if (t.kind == TokenKind::Keyword) {
    static const std::unordered_set<std::string_view> ok = {
        "extends", "super", "boolean", "byte", "char", "short",
        "int",     "long",  "float",   "double"};
    return ok.count(t.text) > 0;
  }
  if (t.kind == TokenKind::Separator) {
    return t.text == "." || t.text == "," || t.text == "[" || t.text == "]";
  }
  if (t.kind == TokenKind::Operator) {
    return t.text == "?" || t.text == "&" || t.text == "<" || t.text == ">" ||
           t.text == ">>" || t.text == ">>>";
  }
  return false;
}

// Marks generic-argument angle brackets as separators. Triggered at an
// Identifier directly followed by "<": a bounded scan accepts only type-like
// tokens until the matching ">"; on anything else the brackets stay operators.
// ">>" / ">>>" closers inside a matched span are split into single ">" tokens.
void classify_generics(std::vector<Token>& tokens) {
  constexpr std::size_t kMaxLookahead = 100;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::Identifier) continue;
    if (tokens[i + 1].text != "<" ||
        tokens[i + 1].kind != TokenKind::Operator) {
      continue;
    }
    int depth = 0;
    std::size_t j = i + 1;
    std::vector<std::size_t> angle_positions;
    bool matched = false;
    for (; j < tokens.size() && j - i <= kMaxLookahead; ++j) {
      const Token& t = tokens[j];
      if (t.text == "<") {
        ++depth;
        angle_positions.push_back(j);
        continue;
      }
      if (t.text == ">" || t.text == ">>" || t.text == ">>>") {
        const int close = static_cast<int>(t.text.size());
        if (close > depth) break;  // e.g. "a < b >> 2"
        depth -= close;
        angle_positions.push_back(j);
        if (depth == 0) {
          matched = true;
          break;
        }
        continue;
      }
      if (!type_like(t)) break;
    }
    if (!matched) continue;
    // Rewrite in reverse so earlier indices stay valid.
    for (auto it = angle_positions.rbegin(); it != angle_positions.rend(); ++it) {
      Token& t = tokens[*it];
      if (t.text == "<" || t.text == ">") {
        t.kind = TokenKind::Separator;
        continue;
      }
      const std::size_t count = t.text.size();
      std::vector<Token> parts;
      for (std::size_t k = 0; k < count; ++k) {
        parts.push_back({">", TokenKind::Separator, t.begin + k, t.begin + k + 1});
      }
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(*it));
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(*it),
                    parts.begin(), parts.end());
    }
  }
}

}  // namespace

bool is_java_keyword(std::string_view text) { return kKeywords.count(text) > 0; }

std::vector<Token> tokenize(std::string_view source) {
  Lexer lexer{source};
  std::vector<Token> tokens;
  for (;;) {
    lexer.skip_space_and_comments();
    if (lexer.done()) break;
    tokens.push_back(lexer.next_token());
  }
  classify_generics(tokens);
  return tokens;
}

std::string detokenize(const std::vector<std::string>& texts) {
  static const std::unordered_set<std::string_view> no_space_before = {
      ";", ",", ".", ")", "]", "("};
  static const std::unordered_set<std::string_view> no_space_after = {
      "(", "[", "."};
  std::string out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (i > 0 && !no_space_before.count(texts[i]) &&
        !no_space_after.count(texts[i - 1])) {
      out += ' ';
    }
    out += texts[i];
  }
  return out;
}

std::string detokenize(const std::vector<Token>& tokens) {
  return detokenize(token_texts(tokens));
}

std::string strip_comments(std::string_view source) {
  std::string out;
  out.reserve(source.size());
  std::size_t i = 0;
  while (i < source.size()) {
    const char c = source[i];
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') ++i;
      out += ' ';
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '*') {
      i += 2;
      while (i + 1 < source.size() && !(source[i] == '*' && source[i + 1] == '/')) {
        ++i;
      }
      i = i + 1 < source.size() ? i + 2 : source.size();
      out += ' ';
      continue;
    }
    if (c == '"' || c == '\'') {
      out += c;
      ++i;
      while (i < source.size()) {
        if (source[i] == '\\' && i + 1 < source.size()) {
          out += source[i];
          out += source[i + 1];
          i += 2;
          continue;
        }
        out += source[i];
        if (source[i] == c || source[i] == '\n') {
          ++i;
          break;
        }
        ++i;
      }
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

}  // namespace jprep

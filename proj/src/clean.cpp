#include "jprep/clean.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

#include "jprep/lexer.hpp"
#include "jprep/rng.hpp"
#include "jprep/structure.hpp"

namespace jprep {

namespace {

bool is_ascii_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_word_char(char c) {
  return is_ascii_letter(c) || (c >= '0' && c <= '9') || c == '_';
}

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && std::ispunct(c);
}

// Latin letters beyond ASCII (Latin-1 Supplement letters, Latin Extended A/B).
bool is_latin_letter_cp(char32_t cp) {
  return cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7;
}

// Non-ASCII code points that read as symbols or punctuation rather than
// letters: Latin-1 signs (including the foldable math symbols), general
// punctuation, superscripts, currency, arrows, math operators, CJK punct.
bool is_symbol_cp(char32_t cp) {
  return (cp >= 0x00A0 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7 ||
         (cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F);
}

// Decodes one UTF-8 code point; returns {codepoint, length}. Invalid bytes
// yield {0xFFFD, 1}.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view s, std::size_t i) {
  const unsigned char c0 = static_cast<unsigned char>(s[i]);
  if (c0 < 0x80) return {c0, 1};
  auto cont = [&](std::size_t off) {
    return i + off < s.size() &&
           (static_cast<unsigned char>(s[i + off]) & 0xC0) == 0x80;
  };
  if ((c0 & 0xE0) == 0xC0 && cont(1)) {
    const char32_t cp = ((c0 & 0x1Fu) << 6) |
                        (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
    return {cp, 2};
  }
  if ((c0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    const char32_t cp = ((c0 & 0x0Fu) << 12) |
                        ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 6) |
                        (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
    return {cp, 3};
  }
  if ((c0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    const char32_t cp = ((c0 & 0x07u) << 18) |
                        ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 12) |
                        ((static_cast<unsigned char>(s[i + 2]) & 0x3Fu) << 6) |
                        (static_cast<unsigned char>(s[i + 3]) & 0x3Fu);
    return {cp, 4};
  }
  return {0xFFFD, 1};
}

// Non-ASCII math symbols with an ASCII spelling.
const std::map<char32_t, std::string_view> kMathFolds = {
    {0x00B1, "+-"},   // ±
    {0x00D7, "*"},    // ×
    {0x00F7, "/"},    // ÷
    {0x2212, "-"},    // − minus sign
    {0x2264, "<="},   // ≤
    {0x2265, ">="},   // ≥
    {0x2260, "!="},   // ≠
    {0x2248, "~="},   // ≈
    {0x00B7, "*"},    // · middle dot
    {0x22C5, "*"},    // ⋅ dot operator
    {0x2217, "*"},    // ∗ asterisk operator
    {0x00B9, "^1"},   // ¹
    {0x00B2, "^2"},   // ²
    {0x00B3, "^3"},   // ³
    {0x00BD, "1/2"},  // ½
    {0x00BC, "1/4"},  // ¼
    {0x00BE, "3/4"},  // ¾
};

std::string fold_math_symbols(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
      continue;
    }
    const auto [cp, len] = decode_utf8(text, i);
    if (const auto it = kMathFolds.find(cp); it != kMathFolds.end()) {
      out += it->second;
    } else {
      out.append(text.substr(i, len));
    }
    i += len;
  }
  return out;
}

// Latin = ASCII or a Latin letter from the Latin-1 Supplement and Latin
// Extended A/B ranges. Anything else (including invalid UTF-8) is non-Latin.
bool all_latin(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (static_cast<unsigned char>(text[i]) < 0x80) {
      ++i;
      continue;
    }
    const auto [cp, len] = decode_utf8(text, i);
    if (cp == 0xFFFD) return false;
    if (!(cp >= 0x00C0 && cp <= 0x024F)) return false;
    i += len;
  }
  return true;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Deletes runs of four or more identical ASCII punctuation characters
// (separator lines, "....." and similar formatting).
std::string delete_format_runs(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_ascii_punct(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && text[j] == c) ++j;
      if (j - i >= 4) {
        i = j;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

// Rewrites inline doc tags {@x Y} -> Y ({@code foo} -> foo). Applied
// innermost-first until no tag remains.
std::string rewrite_inline_tags(std::string text) {
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] == '{' && i + 1 < text.size() && text[i + 1] == '@') {
        std::size_t j = i + 2;
        while (j < text.size() && is_ascii_letter(text[j])) ++j;
        if (j > i + 2) {
          std::size_t k = j;
          while (k < text.size() && text[k] != '}' && text[k] != '{') ++k;
          if (k < text.size() && text[k] == '}') {
            out += trim(text.substr(j, k - j));
            i = k + 1;
            changed = true;
            continue;
          }
        }
      }
      out += text[i];
      ++i;
    }
    text = std::move(out);
    if (!changed) break;
  }
  return text;
}

// Space-escapes literal occurrences of generator-owned sentinels so corpus
// text can never collide with them. <LINK_i> is excluded: the cleaner itself
// emits those, and escaping them would break idempotence.
std::string escape_reserved(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t len = match_sentinel(text, i);
    if (len > 0 && text.substr(i, 6) != "<LINK_") {
      out += "< ";
      out.append(text.substr(i + 1, len - 2));
      out += " >";
      i += len;
      continue;
    }
    out += text[i];
    ++i;
  }
  return out;
}

const std::array<std::string_view, 13> kMidlineTags = {
    "param", "return", "returns", "throws", "exception", "author", "version",
    "since", "see",    "serial",  "serialData", "serialField", "deprecated"};

bool midline_tag_at(std::string_view line, std::size_t at) {
  if (line[at] != '@') return false;
  for (const std::string_view tag : kMidlineTags) {
    if (line.substr(at + 1, tag.size()) == tag) {
      const std::size_t after = at + 1 + tag.size();
      if (after >= line.size() || !is_word_char(line[after])) return true;
    }
  }
  return false;
}

}  // namespace

std::string_view reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::EmptyJavadoc: return "empty_javadoc";
    case RejectReason::EmptyBody: return "empty_body";
    case RejectReason::TestMethod: return "test_method";
    case RejectReason::NoClosingBrace: return "no_closing_brace";
    case RejectReason::EmptyDescription: return "empty_description";
    case RejectReason::NonEnglish: return "non_english";
    case RejectReason::NonLatin: return "non_latin";
    case RejectReason::TooLong: return "too_long";
    case RejectReason::ParseRejection: return "parse_error";
    case RejectReason::Duplicate: return "duplicate";
  }
  return "?";
}

bool default_english_detector(const std::string& text) {
  static const std::unordered_set<std::string> kStopwords = {
      "the",   "a",     "an",    "of",     "to",        "and",   "or",
      "in",    "on",    "for",   "with",   "is",        "are",   "be",
      "this",  "that",  "if",    "not",    "it",        "as",    "by",
      "from",  "at",    "into",  "return", "returns",   "get",   "gets",
      "set",   "sets",  "value", "values", "object",    "given", "specified",
      "new",   "null",  "true",  "false",  "when",      "will",  "can",
      "all",   "no",    "use",   "used",   "using",     "creates", "create",
      "method"};
  std::size_t ascii_letters = 0;
  std::size_t letters = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      if (is_ascii_letter(static_cast<char>(c))) {
        ++ascii_letters;
        ++letters;
      }
      ++i;
      continue;
    }
    const auto [cp, len] = decode_utf8(text, i);
    if (!is_symbol_cp(cp)) ++letters;  // treat non-symbol code points as letters
    i += len;
  }
  if (letters == 0) return false;
  if (static_cast<double>(ascii_letters) < 0.9 * static_cast<double>(letters)) {
    return false;
  }
  std::string word;
  for (std::size_t j = 0; j <= text.size(); ++j) {
    const char c = j < text.size() ? text[j] : ' ';
    if (is_ascii_letter(c)) {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      continue;
    }
    if (!word.empty() && kStopwords.count(word)) return true;
    word.clear();
  }
  return false;
}

std::string extract_description(std::string_view javadoc_source) {
  std::string text = trim(javadoc_source);
  if (text.size() >= 3 && text.substr(0, 3) == "/**") {
    text = text.substr(3);
  } else if (text.size() >= 2 && text.substr(0, 2) == "/*") {
    text = text.substr(2);
  }
  if (text.size() >= 2 && text.substr(text.size() - 2) == "*/") {
    text = text.substr(0, text.size() - 2);
  }

  std::string description;
  std::istringstream lines{text};
  std::string raw_line;
  while (std::getline(lines, raw_line)) {
    std::string_view line = raw_line;
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) {
      ++b;
    }
    while (b < line.size() && line[b] == '*') ++b;
    if (b < line.size() && line[b] == ' ') ++b;
    line = line.substr(b);
    if (!line.empty() && line[0] == '@' && line.size() > 1 &&
        is_ascii_letter(line[1])) {
      break;  // block tag line; the description ends here
    }
    bool stop = false;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      if (line[i] == '@' && midline_tag_at(line, i) &&
          (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        cut = i;
        stop = true;
        break;
      }
    }
    if (!description.empty()) description += '\n';
    description.append(line.substr(0, cut));
    if (stop) break;
  }
  return trim(description);
}

LinkReplacement replace_links(std::string_view method_text,
                              std::string_view javadoc_text) {
  LinkReplacement result;
  std::map<std::string, std::size_t, std::less<>> index;

  auto url_at = [](std::string_view text, std::size_t i) -> std::size_t {
    for (const std::string_view scheme : {std::string_view("https://"),
                                          std::string_view("http://")}) {
      if (text.substr(i, scheme.size()) == scheme) {
        std::size_t j = i + scheme.size();
        while (j < text.size() &&
               !std::isspace(static_cast<unsigned char>(text[j])) &&
               text[j] != '"' && text[j] != '\'') {
          ++j;
        }
        return j - i;
      }
    }
    return 0;
  };

  auto process = [&](std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
      const std::size_t len = url_at(text, i);
      if (len == 0) {
        out += text[i];
        ++i;
        continue;
      }
      const std::string url(text.substr(i, len));
      auto it = index.find(url);
      if (it == index.end()) {
        it = index.emplace(url, result.links.size()).first;
        result.links.push_back(url);
      }
      out += "<LINK_" + std::to_string(it->second) + ">";
      i += len;
    }
    return out;
  };

  result.javadoc_text = process(javadoc_text);
  result.method_text = process(method_text);
  return result;
}

std::vector<std::string> tokenize_natural(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (const std::size_t len = match_sentinel(text, i); len > 0) {
      tokens.emplace_back(text.substr(i, len));
      i += len;
      continue;
    }
    auto word_at = [&](std::size_t j) -> std::size_t {
      if (j >= text.size()) return 0;
      if (is_word_char(text[j])) return 1;
      if (static_cast<unsigned char>(text[j]) >= 0x80) {
        const auto [cp, len] = decode_utf8(text, j);
        if (is_latin_letter_cp(cp)) return len;
      }
      return 0;
    };
    if (std::size_t step = word_at(i); step > 0) {
      std::size_t j = i;
      while (step > 0) {
        j += step;
        step = word_at(j);
      }
      tokens.emplace_back(text.substr(i, j - i));
      i = j;
      continue;
    }
    if (static_cast<unsigned char>(c) >= 0x80) {
      const auto [cp, len] = decode_utf8(text, i);
      (void)cp;
      tokens.emplace_back(text.substr(i, len));
      i += len;
      continue;
    }
    tokens.emplace_back(1, c);
    ++i;
  }
  return tokens;
}

std::string method_hash(const std::vector<std::string>& method_token_texts) {
  return hex64(fnv1a64(detokenize(method_token_texts)));
}

std::string render_method(const MethodRecord& record) {
  return detokenize(record.method_tokens);
}

std::string render_summary(const MethodRecord& record) {
  std::string out;
  for (std::size_t i = 0; i < record.summary_tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += record.summary_tokens[i];
  }
  return out;
}

CleanResult clean_pair(const RawPair& pair, const EnglishDetector& detector,
                       std::size_t max_tokens) {
  auto reject = [](RejectReason reason) {
    return CleanResult{std::nullopt, reason};
  };

  // (1) present but empty Javadoc
  if (trim(pair.javadoc_source).empty()) {
    return reject(RejectReason::EmptyJavadoc);
  }

  // (2) empty method body
  const std::string stripped = strip_comments(pair.method_source);
  const std::size_t open = stripped.find('{');
  const std::size_t close = stripped.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close <= open ||
      trim(std::string_view(stripped).substr(open + 1, close - open - 1))
          .empty()) {
    return reject(RejectReason::EmptyBody);
  }

  // (3) test method: @Test annotation in the header region
  {
    const std::string_view header = std::string_view(stripped).substr(0, open);
    for (std::size_t i = 0; i + 4 < header.size(); ++i) {
      if (header[i] != '@') continue;
      std::size_t j = i + 1;
      while (j < header.size() &&
             std::isspace(static_cast<unsigned char>(header[j]))) {
        ++j;
      }
      if (header.substr(j, 4) == "Test" &&
          (j + 4 >= header.size() || !is_word_char(header[j + 4]))) {
        return reject(RejectReason::TestMethod);
      }
    }
  }

  // (4) method text must end with "}"
  const std::string method_trimmed = trim(pair.method_source);
  if (method_trimmed.empty() || method_trimmed.back() != '}') {
    return reject(RejectReason::NoClosingBrace);
  }

  // (5) empty description once tags are excluded
  std::string description = extract_description(pair.javadoc_source);
  if (description.empty()) return reject(RejectReason::EmptyDescription);

  // (6) language check
  if (!detector(description)) return reject(RejectReason::NonEnglish);

  // (7) non-Latin characters remaining after ASCII folding
  description = fold_math_symbols(description);
  std::string method_text = fold_math_symbols(method_trimmed);
  if (!all_latin(description) || !all_latin(method_text)) {
    return reject(RejectReason::NonLatin);
  }

  description = delete_format_runs(description);
  description = rewrite_inline_tags(std::move(description));
  description = escape_reserved(description);
  method_text = escape_reserved(method_text);

  LinkReplacement linked = replace_links(method_text, description);

  MethodRecord record;
  record.id = pair.id;
  record.link_table = std::move(linked.links);
  try {
    const std::vector<Token> tokens = tokenize(linked.method_text);
    parse_structure(tokens);
    record.method_tokens = token_texts(tokens);
  } catch (const LexError&) {
    return reject(RejectReason::ParseRejection);
  } catch (const ParseError&) {
    return reject(RejectReason::ParseRejection);
  }
  record.summary_tokens = tokenize_natural(linked.javadoc_text);
  if (record.summary_tokens.empty()) {
    return reject(RejectReason::EmptyDescription);
  }

  if (record.method_tokens.size() + record.summary_tokens.size() > max_tokens) {
    return reject(RejectReason::TooLong);
  }
  record.hash = method_hash(record.method_tokens);
  return CleanResult{std::move(record), std::nullopt};
}

std::vector<MethodRecord> dedup(std::vector<MethodRecord> records,
                                const std::unordered_set<std::string>* against,
                                std::vector<std::string>* dropped) {
  std::unordered_set<std::string> seen;
  if (against) seen = *against;
  std::vector<MethodRecord> out;
  out.reserve(records.size());
  for (auto& record : records) {
    if (seen.insert(record.hash).second) {
      out.push_back(std::move(record));
    } else if (dropped) {
      dropped->push_back(record.id);
    }
  }
  return out;
}

}  // namespace jprep

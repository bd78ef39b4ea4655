#include "jprep/structure.hpp"

#include <algorithm>
#include <unordered_set>

namespace jprep {

std::string_view block_owner_name(BlockOwner owner) {
  switch (owner) {
    case BlockOwner::If: return "if";
    case BlockOwner::Else: return "else";
    case BlockOwner::ElseIf: return "else_if";
    case BlockOwner::For: return "for";
    case BlockOwner::While: return "while";
    case BlockOwner::Do: return "do";
    case BlockOwner::Switch: return "switch";
    case BlockOwner::Try: return "try";
    case BlockOwner::Catch: return "catch";
    case BlockOwner::Finally: return "finally";
    case BlockOwner::Synchronized: return "synchronized";
  }
  return "?";
}

namespace {

const std::unordered_set<std::string_view> kModifiers = {
    "public", "private",  "protected", "static",   "final",
    "abstract", "default", "native",   "synchronized", "transient",
    "volatile", "strictfp"};

[[noreturn]] void fail_braces(const char* what) {
  throw ParseError(ParseError::Kind::UnbalancedBraces, what);
}

struct Walker {
  const std::vector<Token>& toks;
  MethodShape& shape;

  std::size_t size() const { return toks.size(); }

  bool text_at(std::size_t i, std::string_view s) const {
    return i < toks.size() && toks[i].text == s;
  }

  bool keyword_at(std::size_t i, std::string_view s) const {
    return i < toks.size() && toks[i].kind == TokenKind::Keyword &&
           toks[i].text == s;
  }

  // toks[i] == "(": returns the index just past the matching ")".
  std::size_t skip_parens(std::size_t i) const {
    int depth = 0;
    for (std::size_t k = i; k < toks.size(); ++k) {
      if (toks[k].text == "(") ++depth;
      else if (toks[k].text == ")" && --depth == 0) return k + 1;
    }
    fail_braces("unbalanced parentheses");
  }

  // toks[i] == "{": returns the index of the matching "}".
  std::size_t brace_match(std::size_t i) const {
    int depth = 0;
    for (std::size_t k = i; k < toks.size(); ++k) {
      if (toks[k].text == "{") ++depth;
      else if (toks[k].text == "}" && --depth == 0) return k;
    }
    fail_braces("unbalanced braces");
  }

  // Statement dispatch; returns the index just past the statement.
  std::size_t statement_end(std::size_t i, std::size_t limit, int depth) {
    const Token& t = toks[i];
    if (t.kind == TokenKind::Keyword) {
      if (t.text == "if") return if_chain(i, limit, depth);
      if (t.text == "for" || t.text == "while") {
        std::size_t j = i + 1;
        if (text_at(j, "(")) j = skip_parens(j);
        return body_or_statement(
            j, limit, t.text == "for" ? BlockOwner::For : BlockOwner::While,
            depth);
      }
      if (t.text == "do") {
        std::size_t j = body_or_statement(i + 1, limit, BlockOwner::Do, depth);
        if (keyword_at(j, "while") && text_at(j + 1, "(")) {
          j = skip_parens(j + 1);
          if (text_at(j, ";")) ++j;
        }
        return j;
      }
      if (t.text == "switch") {
        std::size_t j = i + 1;
        if (text_at(j, "(")) j = skip_parens(j);
        if (!text_at(j, "{")) return simple_statement(j, limit);
        const std::size_t close = brace_match(j);
        const int count = switch_contents(j + 1, close, depth + 1);
        shape.blocks.push_back({{j, close}, BlockOwner::Switch, count, depth});
        return close + 1;
      }
      if (t.text == "try") {
        std::size_t j = i + 1;
        if (text_at(j, "(")) j = skip_parens(j);  // try-with-resources
        if (!text_at(j, "{")) return simple_statement(i, limit);
        j = braced_block(j, BlockOwner::Try, depth);
        while (keyword_at(j, "catch")) {
          std::size_t k = j + 1;
          if (text_at(k, "(")) k = skip_parens(k);
          if (!text_at(k, "{")) return k;
          j = braced_block(k, BlockOwner::Catch, depth);
        }
        if (keyword_at(j, "finally") && text_at(j + 1, "{")) {
          j = braced_block(j + 1, BlockOwner::Finally, depth);
        }
        return j;
      }
      if (t.text == "synchronized" && text_at(i + 1, "(")) {
        std::size_t j = skip_parens(i + 1);
        if (text_at(j, "{")) return braced_block(j, BlockOwner::Synchronized, depth);
        return simple_statement(i, limit);
      }
    }
    if (t.text == "{") {
      // Free-standing brace group: one statement, not a control-flow block.
      const std::size_t close = brace_match(i);
      statement_list(i + 1, close, depth, nullptr);
      return close + 1;
    }
    if (t.kind == TokenKind::Identifier && text_at(i + 1, ":")) {
      // Label prefix; the labeled statement is parsed as part of this span.
      if (i + 2 < limit) return statement_end(i + 2, limit, depth);
      return limit;
    }
    return simple_statement(i, limit);
  }

  std::size_t if_chain(std::size_t i, std::size_t limit, int depth) {
    std::size_t j = i + 1;
    if (text_at(j, "(")) j = skip_parens(j);
    j = body_or_statement(j, limit, BlockOwner::If, depth);
    while (keyword_at(j, "else")) {
      if (keyword_at(j + 1, "if")) {
        std::size_t k = j + 2;
        if (text_at(k, "(")) k = skip_parens(k);
        j = body_or_statement(k, limit, BlockOwner::ElseIf, depth);
      } else {
        j = body_or_statement(j + 1, limit, BlockOwner::Else, depth);
      }
    }
    return j;
  }

  std::size_t braced_block(std::size_t open, BlockOwner owner, int depth) {
    const std::size_t close = brace_match(open);
    const int count = statement_list(open + 1, close, depth + 1, nullptr);
    shape.blocks.push_back({{open, close}, owner, count, depth});
    return close + 1;
  }

  std::size_t body_or_statement(std::size_t i, std::size_t limit,
                                BlockOwner owner, int depth) {
    if (i >= limit) return limit;
    if (text_at(i, "{")) return braced_block(i, owner, depth);
    return record_statement(i, limit, depth, nullptr, /*braced=*/false);
  }

  // Consumes tokens up to and including the ";" that closes a simple
  // statement, tracking (), [], {} nesting. Lenient at malformed ends.
  std::size_t simple_statement(std::size_t i, std::size_t limit) const {
    int depth = 0;
    for (std::size_t k = i; k < limit; ++k) {
      const std::string& s = toks[k].text;
      if (s == "(" || s == "[" || s == "{") ++depth;
      else if (s == ")" || s == "]") --depth;
      else if (s == "}") {
        if (depth == 0) return k;  // ran into the enclosing brace
        --depth;
      } else if (s == ";" && depth == 0) {
        return k + 1;
      }
    }
    return limit;
  }

  // Parses one statement and records its span.
  std::size_t record_statement(std::size_t i, std::size_t limit, int depth,
                               std::vector<TokenSpan>* top_sink,
                               bool braced = true) {
    const std::size_t end = statement_end(i, limit, depth);
    const std::size_t last = end > i ? end - 1 : i;
    shape.all_statements.push_back({i, last});
    if (braced) shape.braced_statements.push_back({i, last});
    if (top_sink) top_sink->push_back({i, last});
    return end > i ? end : i + 1;
  }

  int statement_list(std::size_t first, std::size_t limit, int depth,
                     std::vector<TokenSpan>* top_sink) {
    int count = 0;
    std::size_t i = first;
    while (i < limit) {
      i = record_statement(i, limit, depth, top_sink);
      ++count;
    }
    return count;
  }

  // Statement list with "case ...:"/"default:" labels skipped (not counted).
  int switch_contents(std::size_t first, std::size_t limit, int depth) {
    int count = 0;
    std::size_t i = first;
    while (i < limit) {
      if (keyword_at(i, "case") || keyword_at(i, "default")) {
        int nest = 0;
        std::size_t k = i + 1;
        for (; k < limit; ++k) {
          const std::string& s = toks[k].text;
          if (s == "(" || s == "[" || s == "{") ++nest;
          else if (s == ")" || s == "]" || s == "}") --nest;
          else if ((s == ":" || s == "->") && nest == 0) {
            ++k;
            break;
          }
        }
        i = k;
        continue;
      }
      i = record_statement(i, limit, depth, nullptr);
      ++count;
    }
    return count;
  }
};

}  // namespace

MethodShape parse_structure(const std::vector<Token>& tokens) {
  if (tokens.empty() || tokens.back().text != "}") {
    fail_braces("method does not end with '}'");
  }
  MethodShape shape;
  Walker w{tokens, shape};

  // Header prefix: annotations (with optional argument lists), modifiers and
  // method type parameters.
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::AnnotationName) {
      ++i;
      if (w.text_at(i, "(")) i = w.skip_parens(i);
      continue;
    }
    if (t.kind == TokenKind::Keyword && kModifiers.count(t.text)) {
      ++i;
      continue;
    }
    if (t.text == "<") {
      int depth = 0;
      bool closed = false;
      for (; i < tokens.size(); ++i) {
        const std::string& s = tokens[i].text;
        if (s == "<") ++depth;
        else if (s == ">" || s == ">>" || s == ">>>") {
          depth -= static_cast<int>(s.size());
          if (depth <= 0) {
            ++i;
            closed = true;
            break;
          }
        }
      }
      if (!closed) {
        throw ParseError(ParseError::Kind::NoMethodHeader,
                         "unterminated type parameters");
      }
      continue;
    }
    break;
  }

  // Name: first Identifier immediately followed by "(".
  std::size_t name = tokens.size();
  for (std::size_t j = i; j + 1 < tokens.size(); ++j) {
    if (tokens[j].text == "{") break;
    if (tokens[j].kind == TokenKind::Identifier && tokens[j + 1].text == "(") {
      name = j;
      break;
    }
  }
  if (name == tokens.size()) {
    throw ParseError(ParseError::Kind::NoMethodHeader, "no method header");
  }
  shape.name_index = name;
  std::string rt;
  for (std::size_t j = i; j < name; ++j) rt += tokens[j].text;
  shape.return_type_text = std::move(rt);

  std::size_t k = w.skip_parens(name + 1);
  while (k < tokens.size() && tokens[k].text != "{") ++k;
  if (k == tokens.size()) {
    throw ParseError(ParseError::Kind::NoMethodHeader, "no method body");
  }
  shape.body_open = k;
  shape.body_close = w.brace_match(k);
  if (shape.body_close != tokens.size() - 1) {
    fail_braces("trailing tokens after method body");
  }

  w.statement_list(shape.body_open + 1, shape.body_close, 0, &shape.statements);
  std::stable_sort(shape.blocks.begin(), shape.blocks.end(),
                   [](const Block& a, const Block& b) {
                     return a.span.first < b.span.first;
                   });

  const std::string& name_text = tokens[name].text;
  for (std::size_t idx = shape.body_open + 1; idx < shape.body_close; ++idx) {
    if (tokens[idx].kind != TokenKind::Identifier) continue;
    if (tokens[idx].text != name_text) continue;
    if (!w.text_at(idx + 1, "(")) continue;
    const bool qualified = idx > 0 && tokens[idx - 1].text == ".";
    if (!qualified || (idx >= 2 && tokens[idx - 2].text == "this")) {
      shape.self_call_indices.push_back(idx);
    }
  }
  return shape;
}

}  // namespace jprep

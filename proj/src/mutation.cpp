#include "jprep/mutation.hpp"

#include <array>
#include <map>
#include <set>
#include <unordered_set>

#include "jprep/rng.hpp"

namespace jprep {

namespace {

struct OperatorInfo {
  MutationOperator op;
  std::string_view name;
};

constexpr std::array<OperatorInfo, kMutationOperatorCount> kOperatorInfo = {{
    {MutationOperator::ConditionalsBoundary, "conditionals_boundary"},
    {MutationOperator::Increments, "increments"},
    {MutationOperator::InvertNegatives, "invert_negatives"},
    {MutationOperator::Math, "math"},
    {MutationOperator::NegateConditionals, "negate_conditionals"},
    {MutationOperator::VoidMethodCalls, "void_method_calls"},
    {MutationOperator::EmptyReturns, "empty_returns"},
    {MutationOperator::FalseReturns, "false_returns"},
    {MutationOperator::TrueReturns, "true_returns"},
    {MutationOperator::NullReturns, "null_returns"},
    {MutationOperator::PrimitiveReturns, "primitive_returns"},
}};

// Token directly before an operator that means "an operand just ended";
// a +/- after one of these is binary, otherwise unary.
bool ends_operand(const Token& t) {
  switch (t.kind) {
    case TokenKind::Identifier:
    case TokenKind::NumberLiteral:
    case TokenKind::StringLiteral:
    case TokenKind::CharLiteral:
      return true;
    case TokenKind::Keyword:
      return t.text == "this" || t.text == "true" || t.text == "false" ||
             t.text == "null" || t.text == "super" || t.text == "class";
    case TokenKind::Separator:
      return t.text == ")" || t.text == "]" || t.text == ">";
    default:
      return false;
  }
}

const std::map<std::string_view, std::string_view> kBoundarySwap = {
    {"<", "<="}, {"<=", "<"}, {">", ">="}, {">=", ">"}};

const std::map<std::string_view, std::string_view> kIncrementSwap = {
    {"++", "--"}, {"--", "++"}, {"+=", "-="}, {"-=", "+="}};

const std::map<std::string_view, std::string_view> kMathSwap = {
    {"+", "-"},   {"-", "+"},   {"*", "/"},  {"/", "*"},  {"%", "*"},
    {"&", "|"},   {"|", "&"},   {"^", "&"},  {"<<", ">>"}, {">>", "<<"},
    {">>>", "<<"}};

const std::map<std::string_view, std::string_view> kNegateSwap = {
    {"==", "!="}, {"!=", "=="}, {"<=", ">"}, {">=", "<"}, {"<", ">="},
    {">", "<="}};

// Parenthesized condition spans of if/while/for/switch (and do..while via its
// trailing "while"): token ranges strictly inside the parentheses.
std::vector<std::pair<std::size_t, std::size_t>> condition_ranges(
    const std::vector<Token>& tokens, const MethodShape& shape) {
  static const std::unordered_set<std::string_view> heads = {"if", "while",
                                                             "for", "switch"};
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t i = shape.body_open + 1; i < shape.body_close; ++i) {
    if (tokens[i].kind != TokenKind::Keyword || !heads.count(tokens[i].text)) {
      continue;
    }
    if (i + 1 >= shape.body_close || tokens[i + 1].text != "(") continue;
    int depth = 0;
    for (std::size_t k = i + 1; k < shape.body_close; ++k) {
      if (tokens[k].text == "(") ++depth;
      else if (tokens[k].text == ")" && --depth == 0) {
        if (k > i + 2) ranges.emplace_back(i + 2, k - 1);
        break;
      }
    }
  }
  return ranges;
}

bool in_ranges(const std::vector<std::pair<std::size_t, std::size_t>>& ranges,
               std::size_t i) {
  for (const auto& [a, b] : ranges) {
    if (i >= a && i <= b) return true;
  }
  return false;
}

std::vector<std::string> span_texts(const std::vector<Token>& tokens,
                                    const TokenSpan& span) {
  std::vector<std::string> out;
  out.reserve(span.last - span.first + 1);
  for (std::size_t i = span.first; i <= span.last; ++i) {
    out.push_back(tokens[i].text);
  }
  return out;
}

// Matches "name(...);" call chains whose value is discarded:
// (Identifier|this|super)(.Identifier)* "(...)" (".Identifier(...)")* ";"
bool is_bare_call_statement(const std::vector<Token>& tokens,
                            const TokenSpan& span) {
  std::size_t i = span.first;
  const auto& head = tokens[i];
  const bool head_ok =
      head.kind == TokenKind::Identifier ||
      (head.kind == TokenKind::Keyword &&
       (head.text == "this" || head.text == "super"));
  if (!head_ok) return false;
  ++i;
  auto eat_chain = [&] {
    while (i + 1 <= span.last && tokens[i].text == "." &&
           tokens[i + 1].kind == TokenKind::Identifier) {
      i += 2;
    }
  };
  eat_chain();
  bool any_call = false;
  while (i <= span.last && tokens[i].text == "(") {
    int depth = 0;
    std::size_t k = i;
    for (; k <= span.last; ++k) {
      if (tokens[k].text == "(") ++depth;
      else if (tokens[k].text == ")" && --depth == 0) break;
    }
    if (k > span.last) return false;
    i = k + 1;
    any_call = true;
    eat_chain();
  }
  return any_call && i == span.last && tokens[span.last].text == ";";
}

struct ReturnTypeTraits {
  bool is_void = false;
  bool is_primitive = false;     // non-boolean numeric/char primitive
  bool is_boolean = false;       // primitive boolean
  std::string simple;            // simple head name, "" for arrays
};

ReturnTypeTraits classify_return_type(const std::string& text) {
  ReturnTypeTraits traits;
  if (text.empty()) {
    traits.is_void = true;  // constructor: no return-type operators apply
    return traits;
  }
  std::string head = text.substr(0, text.find('<'));
  if (head.find('[') != std::string::npos) return traits;  // array: reference
  const std::size_t dot = head.rfind('.');
  if (dot != std::string::npos) head = head.substr(dot + 1);
  traits.simple = head;
  if (head == "void") traits.is_void = true;
  else if (head == "boolean") traits.is_boolean = true;
  else {
    static const std::unordered_set<std::string_view> primitives = {
        "int", "long", "short", "byte", "char", "float", "double"};
    traits.is_primitive = primitives.count(head) > 0;
  }
  return traits;
}

bool is_primitive_like(const ReturnTypeTraits& t) {
  if (t.is_primitive) return true;
  static const std::unordered_set<std::string_view> boxed = {
      "Integer", "Long", "Short", "Byte", "Character", "Float", "Double"};
  return boxed.count(t.simple) > 0;
}

std::vector<std::string> empty_return_replacement(const std::string& simple) {
  if (simple == "String") return {"return", "\"\"", ";"};
  if (simple == "Map") {
    return {"return", "Collections", ".", "emptyMap", "(", ")", ";"};
  }
  if (simple == "Set") {
    return {"return", "Collections", ".", "emptySet", "(", ")", ";"};
  }
  if (simple == "List" || simple == "Collection") {
    return {"return", "Collections", ".", "emptyList", "(", ")", ";"};
  }
  if (simple == "Optional") {
    return {"return", "Optional", ".", "empty", "(", ")", ";"};
  }
  return {};
}

}  // namespace

std::string_view mutation_operator_name(MutationOperator op) {
  return kOperatorInfo[static_cast<std::size_t>(op)].name;
}

std::optional<MutationOperator> mutation_operator_from_name(
    std::string_view name) {
  for (const auto& info : kOperatorInfo) {
    if (info.name == name) return info.op;
  }
  return std::nullopt;
}

std::vector<MutationSite> find_sites(const std::vector<Token>& tokens,
                                     const MethodShape& shape) {
  std::vector<MutationSite> sites;
  const auto conditions = condition_ranges(tokens, shape);
  const std::size_t lo = shape.body_open + 1;
  const std::size_t hi = shape.body_close;  // exclusive

  auto token_site = [&](MutationOperator op, std::size_t i,
                        std::string_view replacement) {
    sites.push_back({op, i, i + 1, {std::string(replacement)}});
  };

  auto is_unary_minus_like = [&](std::size_t i) {
    return i == 0 || !ends_operand(tokens[i - 1]);
  };

  // ConditionalsBoundary: relational operators inside conditions.
  for (std::size_t i = lo; i < hi; ++i) {
    if (tokens[i].kind != TokenKind::Operator) continue;
    const auto it = kBoundarySwap.find(tokens[i].text);
    if (it == kBoundarySwap.end()) continue;
    if (!in_ranges(conditions, i)) continue;
    token_site(MutationOperator::ConditionalsBoundary, i, it->second);
  }

  // Increments: ++/-- and +=/-= swaps.
  for (std::size_t i = lo; i < hi; ++i) {
    if (tokens[i].kind != TokenKind::Operator) continue;
    const auto it = kIncrementSwap.find(tokens[i].text);
    if (it == kIncrementSwap.end()) continue;
    token_site(MutationOperator::Increments, i, it->second);
  }

  // InvertNegatives: drop a unary "-" before an identifier or literal.
  for (std::size_t i = lo; i < hi; ++i) {
    if (tokens[i].kind != TokenKind::Operator || tokens[i].text != "-") continue;
    if (!is_unary_minus_like(i)) continue;
    if (i + 1 >= hi) continue;
    const TokenKind next = tokens[i + 1].kind;
    if (next != TokenKind::Identifier && next != TokenKind::NumberLiteral) {
      continue;
    }
    sites.push_back({MutationOperator::InvertNegatives, i, i + 1, {}});
  }

  // Math: binary arithmetic/bitwise replacements.
  for (std::size_t i = lo; i < hi; ++i) {
    if (tokens[i].kind != TokenKind::Operator) continue;
    const auto it = kMathSwap.find(tokens[i].text);
    if (it == kMathSwap.end()) continue;
    if ((tokens[i].text == "+" || tokens[i].text == "-") &&
        is_unary_minus_like(i)) {
      continue;  // unary sign, not a binary operator
    }
    token_site(MutationOperator::Math, i, it->second);
  }

  // NegateConditionals: equality/relational swaps anywhere.
  for (std::size_t i = lo; i < hi; ++i) {
    if (tokens[i].kind != TokenKind::Operator) continue;
    const auto it = kNegateSwap.find(tokens[i].text);
    if (it == kNegateSwap.end()) continue;
    token_site(MutationOperator::NegateConditionals, i, it->second);
  }

  // VoidMethodCalls: delete a discarded call statement.
  for (const TokenSpan& span : shape.braced_statements) {
    if (!is_bare_call_statement(tokens, span)) continue;
    sites.push_back({MutationOperator::VoidMethodCalls, span.first,
                     span.last + 1, {}});
  }

  // Return-value operators, one site per "return expr;" statement.
  const ReturnTypeTraits traits = classify_return_type(shape.return_type_text);
  if (!traits.is_void) {
    std::vector<TokenSpan> returns;
    for (const TokenSpan& span : shape.all_statements) {
      if (span.last - span.first < 2) continue;  // at least return expr ;
      if (tokens[span.first].kind != TokenKind::Keyword ||
          tokens[span.first].text != "return") {
        continue;
      }
      if (tokens[span.last].text != ";") continue;
      returns.push_back(span);
    }
    auto add_return_sites = [&](MutationOperator op,
                                std::vector<std::string> replacement) {
      if (replacement.empty()) return;
      for (const TokenSpan& span : returns) {
        if (span_texts(tokens, span) == replacement) continue;  // suppressed
        sites.push_back({op, span.first, span.last + 1, replacement});
      }
    };
    add_return_sites(MutationOperator::EmptyReturns,
                     empty_return_replacement(traits.simple));
    if (traits.is_boolean || traits.simple == "Boolean") {
      add_return_sites(MutationOperator::FalseReturns,
                       {"return", "false", ";"});
      add_return_sites(MutationOperator::TrueReturns, {"return", "true", ";"});
    }
    if (!traits.is_boolean && !traits.is_primitive) {
      add_return_sites(MutationOperator::NullReturns, {"return", "null", ";"});
    }
    if (is_primitive_like(traits)) {
      add_return_sites(MutationOperator::PrimitiveReturns,
                       {"return", "0", ";"});
    }
  }

  // Enumeration order: operator declaration order, then token position.
  std::stable_sort(sites.begin(), sites.end(),
                   [](const MutationSite& a, const MutationSite& b) {
                     if (a.op != b.op) return a.op < b.op;
                     return a.begin < b.begin;
                   });
  return sites;
}

std::vector<std::string> apply_site(const std::vector<Token>& tokens,
                                    const MutationSite& site) {
  std::vector<std::string> out;
  out.reserve(tokens.size() + site.replacement.size());
  for (std::size_t i = 0; i < site.begin; ++i) out.push_back(tokens[i].text);
  for (const auto& t : site.replacement) out.push_back(t);
  for (std::size_t i = site.end; i < tokens.size(); ++i) {
    out.push_back(tokens[i].text);
  }
  if (out.size() == tokens.size()) {
    bool same = true;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] != tokens[i].text) {
        same = false;
        break;
      }
    }
    if (same) throw IdenticalMutant("mutation site is a no-op");
  }
  return out;
}

std::vector<Mutant> enumerate_mutants(const std::vector<Token>& tokens,
                                      const MethodShape& shape) {
  std::vector<Mutant> mutants;
  std::set<std::vector<std::string>> seen;
  for (const MutationSite& site : find_sites(tokens, shape)) {
    std::vector<std::string> mutated = apply_site(tokens, site);
    if (!seen.insert(mutated).second) continue;
    mutants.push_back(Mutant{site.op, site, std::move(mutated)});
  }
  return mutants;
}

std::optional<Mutant> sample_one(const std::vector<Token>& tokens,
                                 const MethodShape& shape, std::uint64_t seed) {
  std::vector<Mutant> mutants = enumerate_mutants(tokens, shape);
  if (mutants.empty()) return std::nullopt;
  DetRng rng(seed);
  return std::move(mutants[rng.below(mutants.size())]);
}

}  // namespace jprep

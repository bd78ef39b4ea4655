#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "jprep/token.hpp"

namespace jprep {

enum class RejectReason {
  EmptyJavadoc,
  EmptyBody,
  TestMethod,
  NoClosingBrace,
  EmptyDescription,
  NonEnglish,
  NonLatin,
  TooLong,
  ParseRejection,
  Duplicate,
};

std::string_view reject_reason_name(RejectReason reason);

struct RawPair {
  std::string id;
  std::string repo;
  std::string path;
  std::string method_source;
  std::string javadoc_source;
};

struct MethodRecord {
  std::string id;
  std::vector<std::string> method_tokens;   // canonical Java tokens
  std::vector<std::string> summary_tokens;  // words and punctuation
  std::vector<std::string> link_table;      // <LINK_i> -> original URL
  std::string hash;                         // digest of the method tokens
};

struct CleanResult {
  std::optional<MethodRecord> record;
  std::optional<RejectReason> reason;
  bool accepted() const { return record.has_value(); }
};

// Language check applied to the Javadoc description. The default heuristic
// accepts text whose letters are >= 90% ASCII and which contains at least one
// of a built-in 50-word English stopword list.
using EnglishDetector = std::function<bool(const std::string&)>;
bool default_english_detector(const std::string& text);

// Ordered rejection filters, then normalization: math-symbol folding,
// formatting-run removal, inline doc-tag rewriting, link tagging,
// tokenization and the length gate. Idempotent on its own rendered output.
CleanResult clean_pair(const RawPair& pair,
                       const EnglishDetector& detector = default_english_detector,
                       std::size_t max_tokens = 512);

struct LinkReplacement {
  std::string method_text;
  std::string javadoc_text;
  std::vector<std::string> links;
};

// Replaces each distinct http(s) URL with <LINK_i>; i is assigned by first
// appearance scanning the javadoc, then the method. The same URL maps to the
// same tag in both texts.
LinkReplacement replace_links(std::string_view method_text,
                              std::string_view javadoc_text);

// Natural-language tokenization: runs of [A-Za-z0-9_] are words, every other
// non-space character stands alone. <LINK_i> tags are kept atomic.
std::vector<std::string> tokenize_natural(std::string_view text);

// Javadoc description: the text before the first tag line ("@..." at line
// start or a known block tag mid-line), with comment delimiters and leading
// asterisks stripped.
std::string extract_description(std::string_view javadoc_source);

std::string method_hash(const std::vector<std::string>& method_token_texts);

// Canonical renderings used for record serialization.
std::string render_method(const MethodRecord& record);
std::string render_summary(const MethodRecord& record);

// Drops records whose hash was already seen; first occurrence wins. `against`
// optionally preloads hashes from another dataset. Dropped ids are appended
// to `dropped` when provided.
std::vector<MethodRecord> dedup(std::vector<MethodRecord> records,
                                const std::unordered_set<std::string>* against,
                                std::vector<std::string>* dropped = nullptr);

}  // namespace jprep

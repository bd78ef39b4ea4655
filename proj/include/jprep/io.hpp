#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace jprep {

using json = nlohmann::ordered_json;

// Exit-code-bearing pipeline errors.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitMissingInput = 3;
inline constexpr int kExitBadConfig = 4;

// Reads a JSON-lines file; blank lines are skipped. Throws MissingInput when
// the file does not exist and SchemaError (with the line number) on invalid
// JSON or a non-object line.
std::vector<json> read_jsonl(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Field accessors that raise SchemaError naming the file, line and key.
std::string require_string(const json& obj, const std::string& key,
                           const std::string& context);
std::uint64_t require_uint(const json& obj, const std::string& key,
                           const std::string& context);
std::string optional_string(const json& obj, const std::string& key,
                            const std::string& fallback = {});

// Line-buffered JSON-lines writer with compact one-line serialization.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  void row(const json& obj);
  std::size_t rows() const { return rows_; }
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t rows_ = 0;
};

// FNV-1a digest of the file contents, rendered as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

// Space-joined token rendering and its inverse (tokens never contain spaces
// except string/char literals, which re-split safely through the Java lexer;
// natural-language tokens are space-free).
std::string join_tokens(const std::vector<std::string>& tokens);
std::vector<std::string> split_tokens(const std::string& text);

struct Manifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  std::vector<std::filesystem::path> outputs;  // digested on write
};

// Writes `<first output>.manifest.json`: command, config digest, seed,
// counts and a basename -> content digest map. Paths never enter the file,
// so runs in different directories stay byte-comparable.
std::filesystem::path write_manifest(const Manifest& manifest);

}  // namespace jprep

#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "jprep/clean.hpp"
#include "jprep/lexer.hpp"
#include "jprep/objectives.hpp"

namespace jprep::testsupport {

inline std::vector<std::string> lex(std::string_view source) {
  return jprep::token_texts(jprep::tokenize(source));
}

inline jprep::MethodRecord make_record(std::string id,
                                       std::string_view method_source,
                                       std::string_view summary_text) {
  jprep::MethodRecord rec;
  rec.id = std::move(id);
  rec.method_tokens = lex(method_source);
  rec.summary_tokens = jprep::tokenize_natural(summary_text);
  rec.hash = jprep::method_hash(rec.method_tokens);
  return rec;
}

inline jprep::ParsedRecord make_parsed(std::string id,
                                       std::string_view method_source,
                                       std::string_view summary_text) {
  return jprep::parse_record(
      make_record(std::move(id), method_source, summary_text));
}

// Unique scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("jprep-test-" + std::to_string(rd()) + "-" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

inline void write_file(const std::filesystem::path& path,
                       std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("JPREP_DATA_DIR")) return env;
  return std::filesystem::path("tests") / "data";
}

}  // namespace jprep::testsupport

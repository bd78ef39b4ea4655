#include "jprep/io.hpp"

#include <sstream>

#include "jprep/rng.hpp"

namespace jprep {

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MissingInput("cannot open input file: " + path.string());
  }
  std::vector<json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                        ": expected a JSON object");
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingInput("cannot open input file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string require_string(const json& obj, const std::string& key,
                           const std::string& context) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw SchemaError(context + ": missing string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

std::uint64_t require_uint(const json& obj, const std::string& key,
                           const std::string& context) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_unsigned()) {
    throw SchemaError(context + ": missing unsigned field \"" + key + "\"");
  }
  return it->get<std::uint64_t>();
}

std::string optional_string(const json& obj, const std::string& key,
                            const std::string& fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) {
    throw SchemaError("field \"" + key + "\" must be a string");
  }
  return it->get<std::string>();
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) {
    throw std::runtime_error("cannot open output file: " + path.string());
  }
}

void JsonlWriter::row(const json& obj) {
  out_ << obj.dump() << '\n';
  ++rows_;
}

void JsonlWriter::close() {
  out_.close();
  if (!out_) {
    throw std::runtime_error("failed writing output file: " + path_.string());
  }
}

std::string file_digest(const std::filesystem::path& path) {
  return hex64(fnv1a64(read_file(path)));
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i != 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t j = text.find(' ', i);
    if (j == std::string::npos) j = text.size();
    tokens.push_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::filesystem::path write_manifest(const Manifest& manifest) {
  json counts = json::object();
  for (const auto& [key, value] : manifest.counts) counts[key] = value;
  json outputs = json::object();
  for (const auto& path : manifest.outputs) {
    outputs[path.filename().string()] = file_digest(path);
  }
  json doc = json::object();
  doc["command"] = manifest.command;
  doc["config_digest"] = manifest.config_digest;
  doc["seed"] = manifest.seed;
  doc["counts"] = std::move(counts);
  doc["outputs"] = std::move(outputs);

  std::filesystem::path path = manifest.outputs.front();
  path += ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open manifest file: " + path.string());
  }
  out << doc.dump(2) << '\n';
  return path;
}

}  // namespace jprep

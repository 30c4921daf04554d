// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hintstep/error.hpp"
#include "json.hpp"

// Line-oriented JSON reading/writing with file:line diagnostics.
namespace hintstep::jsonl {

using nlohmann::json;

inline std::string dump(const json& j) {
  return j.dump(-1, ' ', /*ensure_ascii=*/false, json::error_handler_t::strict);
}

// Calls fn(object, line_number) for every non-blank line. Throws ParseError
// for malformed JSON or non-object lines, IoError when the file can't be read.
inline void for_each_object(const std::filesystem::path& path,
                            const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) throw ParseError(path.string(), line_no, "malformed JSON");
    if (!obj.is_object()) throw ParseError(path.string(), line_no, "expected a JSON object");
    fn(obj, line_no);
  }
  if (in.bad()) throw IoError("read error on " + path.string());
}

inline void write_lines(const std::vector<json>& rows, const std::filesystem::path& path,
                        bool append = false) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& row : rows) {
    try {
      out << dump(row) << '\n';
    } catch (const json::exception& e) {
      throw IoError("cannot serialize record for " + path.string() + ": " + e.what());
    }
  }
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

// Typed field access that reports the offending file and line.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::size_t line)
      : obj_(obj), path_(std::move(path)), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(path_, line_, what);
  }

  const json* find(const char* key) const {
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string string(const char* key) const {
    const json* v = find(key);
    if (v == nullptr) fail(std::string("missing field '") + key + "'");
    if (!v->is_string()) fail(std::string("field '") + key + "' must be a string");
    return v->get<std::string>();
  }

  std::optional<std::string> optional_string(const char* key) const {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) fail(std::string("field '") + key + "' must be a string");
    return v->get<std::string>();
  }

  std::int64_t integer(const char* key) const {
    const json* v = find(key);
    if (v == nullptr) fail(std::string("missing field '") + key + "'");
    if (!v->is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
    return v->get<std::int64_t>();
  }

  std::optional<std::int64_t> optional_int(const char* key) const {
    if (find(key) == nullptr) return std::nullopt;
    return integer(key);
  }

  double number(const char* key) const {
    const json* v = find(key);
    if (v == nullptr) fail(std::string("missing field '") + key + "'");
    if (!v->is_number()) fail(std::string("field '") + key + "' must be a number");
    return v->get<double>();
  }

  std::optional<double> optional_number(const char* key) const {
    if (find(key) == nullptr) return std::nullopt;
    return number(key);
  }

  bool boolean(const char* key, bool fallback) const {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) fail(std::string("field '") + key + "' must be a boolean");
    return v->get<bool>();
  }

  std::vector<std::string> string_list(const char* key) const {
    std::vector<std::string> out;
    const json* v = find(key);
    if (v == nullptr) return out;
    if (!v->is_array()) fail(std::string("field '") + key + "' must be a list of strings");
    for (const auto& item : *v) {
      if (!item.is_string()) fail(std::string("field '") + key + "' must be a list of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  const json& array(const char* key, bool required) const {
    static const json kEmpty = json::array();
    const json* v = find(key);
    if (v == nullptr) {
      if (required) fail(std::string("missing field '") + key + "'");
      return kEmpty;
    }
    if (!v->is_array()) fail(std::string("field '") + key + "' must be a list");
    return *v;
  }

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  const json& obj_;
  std::string path_;
  std::size_t line_;
};

}  // namespace hintstep::jsonl

// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hintstep/mock_backend.hpp"
#include "hintstep/normalize.hpp"
#include "hintstep/types.hpp"
#include "json.hpp"

namespace hintstep::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hintstep_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline Problem make_problem(std::string id, std::string statement,
                            std::optional<std::string> solution,
                            std::optional<std::string> answer,
                            std::string dataset = "toy") {
  Problem p;
  p.id = std::move(id);
  p.statement = std::move(statement);
  p.dataset_name = std::move(dataset);
  p.reference_solution = std::move(solution);
  p.ground_truth_answer = std::move(answer);
  if (p.ground_truth_answer) p.ground_truth_normalized = normalize_answer(*p.ground_truth_answer);
  return p;
}

inline HintSequence make_hints(const std::string& problem_id, const std::vector<std::string>& texts) {
  HintSequence h;
  h.problem_id = problem_id;
  h.generator_model = "oracle";
  h.created_at = "1970-01-01T00:00:00Z";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    h.hints.push_back({static_cast<int>(i) + 1, texts[i], HintProvenance::kOracleLlm});
  }
  return h;
}

inline std::string synthesis_json(const std::string& answer, const std::string& summary = "done") {
  return nlohmann::json{{"final_answer", answer}, {"reasoning_summary", summary}}.dump();
}

inline std::string fixture(const std::string& rel) {
  return std::string(HINTSTEP_FIXTURE_DIR) + "/" + rel;
}

}  // namespace hintstep::testing

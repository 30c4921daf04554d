// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/dataset.hpp"

#include <map>
#include <numeric>

#include "json_codec.hpp"

namespace hintstep {

using nlohmann::json;

std::string_view to_string(Schema s) {
  switch (s) {
    case Schema::kProblems: return "problems";
    case Schema::kHints: return "hints";
    case Schema::kTraining: return "training";
    case Schema::kRuns: return "runs";
  }
  return "?";
}

std::optional<Schema> schema_from_string(std::string_view s) {
  for (Schema v : {Schema::kProblems, Schema::kHints, Schema::kTraining, Schema::kRuns}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string check_problem(const Problem& p) {
  if (p.id.empty()) return "problem id is empty";
  return {};
}

std::string check_hint_sequence(const HintSequence& h) {
  if (h.problem_id.empty()) return "problem_id is empty";
  for (std::size_t i = 0; i < h.hints.size(); ++i) {
    const Hint& hint = h.hints[i];
    const int expected = static_cast<int>(i) + 1;
    if (hint.index != expected) {
      return "hint indices must be 1..T without gaps: position " + std::to_string(expected) +
             " has index " + std::to_string(hint.index);
    }
    if (hint.text.empty()) return "hint " + std::to_string(hint.index) + " has empty text";
  }
  return {};
}

std::string check_training_instance(const TrainingInstance& t) {
  if (t.problem_id.empty()) return "problem_id is empty";
  if (t.step_index < 1) return "step_index must be >= 1";
  if (t.target_hint.empty()) return "target_hint is empty";
  return {};
}

std::string check_run_record(const RunRecord& r) {
  if (r.run_id.empty()) return "run_id is empty";
  if (r.problem_id.empty()) return "problem_id is empty";
  if (r.hints_used < 0) return "hints_used must be >= 0";
  if (r.samples < 1) return "samples must be >= 1";
  if (r.wall_time < 0) return "wall_time must be >= 0";
  std::int64_t prompt = 0;
  std::int64_t completion = 0;
  for (const auto& u : r.per_call_usage) {
    prompt += u.prompt_tokens;
    completion += u.completion_tokens;
  }
  if (prompt != r.total_prompt_tokens || completion != r.total_completion_tokens) {
    return "token totals do not equal the sum of per_call_usage";
  }
  return {};
}

namespace {

template <class Record, class Parse, class Check, class Key>
std::vector<Record> load_records(const std::filesystem::path& path, Parse parse, Check check,
                                 Key key, const char* key_name) {
  std::vector<Record> out;
  std::map<std::string, std::size_t> seen;  // key -> line
  jsonl::for_each_object(path, [&](const json& obj, std::size_t line) {
    jsonl::Reader reader(obj, path.string(), line);
    Record rec = parse(reader, obj);
    if (std::string problem = check(rec); !problem.empty()) {
      throw ValidationError(path.string(), line, problem);
    }
    std::string k = key(rec);
    auto [it, inserted] = seen.emplace(k, line);
    if (!inserted) {
      throw DuplicateIdError(path.string(), line,
                             std::string("duplicate ") + key_name + " '" + k +
                                 "' (first seen on line " + std::to_string(it->second) + ")");
    }
    out.push_back(std::move(rec));
  });
  return out;
}

template <class Record>
std::vector<json> rows_of(const std::vector<Record>& records) {
  std::vector<json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(codec::to_json(r));
  return rows;
}

}  // namespace

std::vector<Problem> load_problems(const std::filesystem::path& path) {
  return load_records<Problem>(
      path, [](const jsonl::Reader& r, const json&) { return codec::problem_from(r); },
      check_problem, [](const Problem& p) { return p.id; }, "problem id");
}

std::vector<HintSequence> load_hints(const std::filesystem::path& path) {
  return load_records<HintSequence>(path, codec::hints_from, check_hint_sequence,
                                    [](const HintSequence& h) { return h.problem_id; },
                                    "problem_id");
}

std::vector<TrainingInstance> load_training(const std::filesystem::path& path) {
  return load_records<TrainingInstance>(
      path, [](const jsonl::Reader& r, const json&) { return codec::training_from(r); },
      check_training_instance,
      [](const TrainingInstance& t) { return t.problem_id + "#" + std::to_string(t.step_index); },
      "(problem_id, step_index)");
}

std::vector<RunRecord> load_runs(const std::filesystem::path& path) {
  return load_records<RunRecord>(path, codec::run_from, check_run_record,
                                 [](const RunRecord& r) { return r.run_id; }, "run_id");
}

Collection load_dataset(const std::filesystem::path& path, Schema schema) {
  switch (schema) {
    case Schema::kProblems: return load_problems(path);
    case Schema::kHints: return load_hints(path);
    case Schema::kTraining: return load_training(path);
    case Schema::kRuns: return load_runs(path);
  }
  throw Error("unknown schema");
}

void save_dataset(const Collection& collection, const std::filesystem::path& path) {
  std::visit([&](const auto& records) { jsonl::write_lines(rows_of(records), path); }, collection);
}

void save_problems(const std::vector<Problem>& problems, const std::filesystem::path& path) {
  jsonl::write_lines(rows_of(problems), path);
}

void save_hints(const std::vector<HintSequence>& hints, const std::filesystem::path& path) {
  jsonl::write_lines(rows_of(hints), path);
}

void save_training(const std::vector<TrainingInstance>& rows, const std::filesystem::path& path) {
  jsonl::write_lines(rows_of(rows), path);
}

void save_runs(const std::vector<RunRecord>& runs, const std::filesystem::path& path) {
  jsonl::write_lines(rows_of(runs), path);
}

void append_runs(const std::vector<RunRecord>& runs, const std::filesystem::path& path) {
  jsonl::write_lines(rows_of(runs), path, /*append=*/true);
}

}  // namespace hintstep

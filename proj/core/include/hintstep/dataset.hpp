// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string_view>
#include <variant>
#include <vector>

#include "hintstep/types.hpp"

namespace hintstep {

// The four on-disk JSONL schemas. One JSON object per line; field names are
// part of the file contract.
//
//   problems.jsonl  {"id", "statement", "dataset_name", "reference_solution"?,
//                    "ground_truth_answer"?, "ground_truth_normalized"?, "tags"?}
//   hints.jsonl     {"problem_id", "generator_model", "created_at"?,
//                    "hints": [{"index", "text", "provenance"}], "usage"?, "events"?}
//   training.jsonl  {"problem_id", "step_index", "problem_statement",
//                    "reasoning_state", "target_hint"}
//   runs.jsonl      one RunRecord per line
enum class Schema { kProblems, kHints, kTraining, kRuns };

std::string_view to_string(Schema s);
std::optional<Schema> schema_from_string(std::string_view s);

using Collection = std::variant<std::vector<Problem>, std::vector<HintSequence>,
                                std::vector<TrainingInstance>, std::vector<RunRecord>>;

// Loads and validates a JSONL file. An empty file is an empty collection.
// Throws ParseError (malformed line), ValidationError (invariant violated),
// DuplicateIdError, or IoError; every diagnostic names file and line.
Collection load_dataset(const std::filesystem::path& path, Schema schema);

// Writes one line per record (UTF-8, no escaping of non-ASCII). Throws IoError.
void save_dataset(const Collection& collection, const std::filesystem::path& path);

std::vector<Problem> load_problems(const std::filesystem::path& path);
std::vector<HintSequence> load_hints(const std::filesystem::path& path);
std::vector<TrainingInstance> load_training(const std::filesystem::path& path);
std::vector<RunRecord> load_runs(const std::filesystem::path& path);

void save_problems(const std::vector<Problem>& problems, const std::filesystem::path& path);
void save_hints(const std::vector<HintSequence>& hints, const std::filesystem::path& path);
void save_training(const std::vector<TrainingInstance>& rows, const std::filesystem::path& path);
void save_runs(const std::vector<RunRecord>& runs, const std::filesystem::path& path);
void append_runs(const std::vector<RunRecord>& runs, const std::filesystem::path& path);

// Invariant checks shared by the loaders; each returns an empty string when
// the record is valid and a description of the first violation otherwise.
std::string check_problem(const Problem& p);
std::string check_hint_sequence(const HintSequence& h);
std::string check_training_instance(const TrainingInstance& t);
std::string check_run_record(const RunRecord& r);

}  // namespace hintstep

// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hintstep/types.hpp"
#include "jsonl_io.hpp"

// Record <-> JSON object conversions for every file schema.
namespace hintstep::codec {

using nlohmann::json;

json to_json(const Problem& p);
json to_json(const Hint& h);
json to_json(const CallUsage& u);
json to_json(const GenerationEvent& e);
json to_json(const HintSequence& h);
json to_json(const TrainingInstance& t);
json to_json(const RunRecord& r);
json to_json(const Verdict& v);

Problem problem_from(const jsonl::Reader& r);
HintSequence hints_from(const jsonl::Reader& r, const json& obj);
TrainingInstance training_from(const jsonl::Reader& r);
RunRecord run_from(const jsonl::Reader& r, const json& obj);
Verdict verdict_from(const jsonl::Reader& r);
CallUsage usage_from(const json& obj, const jsonl::Reader& context);

}  // namespace hintstep::codec

// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/mock_backend.hpp"

#include <algorithm>

#include "hintstep/error.hpp"
#include "jsonl_io.hpp"
#include "text_util.hpp"

namespace hintstep {

using nlohmann::json;

bool MockEntry::matches(const ChatTranscript& transcript, const DecodingParams& decoding) const {
  if (seed && decoding.seed != seed) return false;
  if (contains.empty()) return true;
  const std::string all = transcript.joined();
  return std::all_of(contains.begin(), contains.end(),
                     [&](const std::string& needle) { return text::contains(all, needle); });
}

MockBackend::MockBackend(std::vector<MockEntry> script, MockMode mode, std::string model_name)
    : script_(std::move(script)), mode_(mode), model_name_(std::move(model_name)) {
  if (script_.empty()) throw BackendError("mock script is empty");
}

Completion MockBackend::complete(const ChatTranscript& transcript, const DecodingParams& decoding) {
  transcript.validate_for_request();
  std::lock_guard lock(mu_);
  const std::size_t call_index = log_.size();

  const MockEntry* entry = nullptr;
  if (mode_ == MockMode::kOrdered) {
    if (next_ >= script_.size()) {
      throw ScriptExhaustedError("mock script exhausted: call " + std::to_string(call_index + 1) +
                                 " but script has " + std::to_string(script_.size()) +
                                 " entries");
    }
    entry = &script_[next_++];
    if (!entry->matches(transcript, decoding)) {
      throw ScriptMismatchError("mock script entry " + std::to_string(next_) +
                                " does not match call " + std::to_string(call_index + 1));
    }
  } else {
    auto it = std::find_if(script_.begin(), script_.end(), [&](const MockEntry& e) {
      return e.matches(transcript, decoding);
    });
    if (it == script_.end()) {
      throw ScriptMismatchError("no mock rule matches call " + std::to_string(call_index + 1));
    }
    entry = &*it;
  }

  log_.push_back({transcript, decoding, entry->response});
  if (!entry->fail.empty()) throw BackendError("mock failure: " + entry->fail, 500);

  Completion out;
  out.text = entry->response;
  if (entry->prompt_tokens && entry->completion_tokens) {
    out.usage.prompt_tokens = *entry->prompt_tokens;
    out.usage.completion_tokens = *entry->completion_tokens;
  } else {
    out.usage.prompt_tokens = estimate_prompt_tokens(transcript);
    out.usage.completion_tokens = estimate_tokens(out.text);
    out.usage.estimated = true;
  }
  out.usage.wall_time = entry->latency_s;
  return out;
}

std::size_t MockBackend::calls_made() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::vector<MockCall> MockBackend::call_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

MockEntry reply(std::string response, std::int64_t prompt_tokens, std::int64_t completion_tokens,
                double latency_s) {
  MockEntry e;
  e.response = std::move(response);
  e.prompt_tokens = prompt_tokens;
  e.completion_tokens = completion_tokens;
  e.latency_s = latency_s;
  return e;
}

std::vector<MockEntry> load_mock_script(const std::filesystem::path& path) {
  std::vector<MockEntry> out;
  jsonl::for_each_object(path, [&](const json& obj, std::size_t line) {
    jsonl::Reader r(obj, path.string(), line);
    MockEntry e;
    if (obj.contains("contains")) {
      const json& c = obj["contains"];
      if (c.is_string()) {
        e.contains.push_back(c.get<std::string>());
      } else if (c.is_array()) {
        e.contains = r.string_list("contains");
      } else {
        throw ValidationError(path.string(), line, "'contains' must be a string or list");
      }
    }
    e.seed = r.optional_int("seed");
    e.response = r.optional_string("response").value_or("");
    e.prompt_tokens = r.optional_int("prompt_tokens");
    e.completion_tokens = r.optional_int("completion_tokens");
    e.latency_s = r.optional_number("latency_s").value_or(0.0);
    e.fail = r.optional_string("fail").value_or("");
    if (!obj.contains("response") && e.fail.empty()) {
      throw ValidationError(path.string(), line, "mock entry needs 'response' or 'fail'");
    }
    out.push_back(std::move(e));
  });
  return out;
}

void save_mock_script(const std::vector<MockEntry>& script, const std::filesystem::path& path) {
  std::vector<json> rows;
  for (const auto& e : script) {
    json j = json::object();
    if (e.contains.size() == 1) j["contains"] = e.contains.front();
    if (e.contains.size() > 1) j["contains"] = e.contains;
    if (e.seed) j["seed"] = *e.seed;
    j["response"] = e.response;
    if (e.prompt_tokens) j["prompt_tokens"] = *e.prompt_tokens;
    if (e.completion_tokens) j["completion_tokens"] = *e.completion_tokens;
    if (e.latency_s != 0.0) j["latency_s"] = e.latency_s;
    if (!e.fail.empty()) j["fail"] = e.fail;
    rows.push_back(std::move(j));
  }
  jsonl::write_lines(rows, path);
}

}  // namespace hintstep

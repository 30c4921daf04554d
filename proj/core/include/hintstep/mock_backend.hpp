// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hintstep/backend.hpp"

namespace hintstep {

// One scripted reply. An entry applies to a call when every `contains`
// substring occurs in the joined transcript and, if set, the request seed
// equals `seed`.
struct MockEntry {
  std::vector<std::string> contains;
  std::optional<std::int64_t> seed;
  std::string response;
  // Omitted usage behaves like a server without a usage block.
  std::optional<std::int64_t> prompt_tokens;
  std::optional<std::int64_t> completion_tokens;
  double latency_s = 0.0;  // reported as the call's wall time
  // Non-empty: the call fails with a BackendError carrying this message.
  std::string fail;

  bool matches(const ChatTranscript& transcript, const DecodingParams& decoding) const;
};

enum class MockMode {
  kOrdered,  // the i-th call consumes entry i; running past the end is an error
  kRules,    // first matching entry answers; entries may be reused
};

// One call as seen by the mock, kept for transcript inspection.
struct MockCall {
  ChatTranscript transcript;
  DecodingParams decoding;
  std::string response;

  bool operator==(const MockCall&) const = default;
};

// Deterministic scripted backend for tests and offline pipelines. Identical
// call sequences yield byte-identical responses and usage. Ordered scripts
// are single-consumer, so max_concurrency() is 1.
class MockBackend final : public Backend {
 public:
  MockBackend(std::vector<MockEntry> script, MockMode mode = MockMode::kOrdered,
              std::string model_name = "mock");

  Completion complete(const ChatTranscript& transcript, const DecodingParams& decoding) override;

  const DecodingParams& default_decoding() const override { return decoding_; }
  std::string model_name() const override { return model_name_; }
  int max_concurrency() const override { return 1; }
  bool scripted() const override { return true; }

  void set_default_decoding(DecodingParams d) { decoding_ = d; }

  std::size_t calls_made() const;
  std::vector<MockCall> call_log() const;
  std::size_t script_size() const { return script_.size(); }

 private:
  std::vector<MockEntry> script_;
  MockMode mode_;
  std::string model_name_;
  DecodingParams decoding_ = refinement_preset();
  mutable std::mutex mu_;
  std::size_t next_ = 0;
  std::vector<MockCall> log_;
};

// Convenience entry that always matches.
MockEntry reply(std::string response, std::int64_t prompt_tokens, std::int64_t completion_tokens,
                double latency_s = 0.0);

// Script file: JSONL of {"contains": str | [str], "seed": int, "response": str,
// "prompt_tokens": int, "completion_tokens": int, "latency_s": num, "fail": str},
// every key optional except "response" (or "fail").
std::vector<MockEntry> load_mock_script(const std::filesystem::path& path);
void save_mock_script(const std::vector<MockEntry>& script, const std::filesystem::path& path);

}  // namespace hintstep

// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "hintstep/backend.hpp"

namespace hintstep {

// Client for the OpenAI-compatible chat-completions protocol:
// POST {base_url}/chat/completions. Transient failures (network errors,
// timeouts, HTTP 429 and 5xx) are retried with exponential backoff, so one
// call makes at most 1 + max_retries attempts. Concurrent calls are bounded by
// max_concurrency.
class OpenAiBackend final : public Backend {
 public:
  explicit OpenAiBackend(EndpointConfig config);
  ~OpenAiBackend() override;

  Completion complete(const ChatTranscript& transcript, const DecodingParams& decoding) override;

  const DecodingParams& default_decoding() const override { return config_.decoding; }
  std::string model_name() const override { return config_.model_name; }
  int max_concurrency() const override { return config_.max_concurrency; }

  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string api_key_;
  ConcurrencyLimiter limiter_;
};

// Request body for one chat-completions call (compact JSON).
std::string build_chat_request(std::string_view model, const ChatTranscript& transcript,
                               const DecodingParams& decoding);

// Parses a chat-completions response body. Falls back to the local token
// estimate, flagged as estimated, when the usage block is missing.
// Throws MalformedResponseError.
Completion parse_chat_response(std::string_view body, const ChatTranscript& transcript);

struct ParsedUrl {
  std::string scheme_host_port;  // "http://host:port"
  std::string path_prefix;       // "/v1", or empty
};
ParsedUrl parse_base_url(std::string_view base_url);  // throws ConfigError

}  // namespace hintstep

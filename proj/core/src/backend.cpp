// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/backend.hpp"

#include "hintstep/error.hpp"
#include "text_util.hpp"

namespace hintstep {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

ChatTranscript& ChatTranscript::system(std::string content) {
  messages_.push_back({Role::kSystem, std::move(content)});
  return *this;
}

ChatTranscript& ChatTranscript::user(std::string content) {
  messages_.push_back({Role::kUser, std::move(content)});
  return *this;
}

ChatTranscript& ChatTranscript::assistant(std::string content) {
  messages_.push_back({Role::kAssistant, std::move(content)});
  return *this;
}

std::string ChatTranscript::joined() const {
  std::string out;
  for (const auto& m : messages_) {
    if (!out.empty()) out += '\n';
    out += m.content;
  }
  return out;
}

void ChatTranscript::validate_for_request() const {
  if (messages_.empty()) throw BackendError("chat transcript is empty");
  if (messages_.back().role == Role::kAssistant) {
    throw BackendError("chat transcript ends with an assistant turn");
  }
}

DecodingParams refinement_preset() {
  DecodingParams p;
  p.temperature = 0.0;
  p.top_p = 1.0;
  p.response_format = ResponseFormat::kFreeText;
  return p;
}

DecodingParams synthesis_preset() {
  DecodingParams p;
  p.temperature = 0.7;
  p.top_p = 0.95;
  p.response_format = ResponseFormat::kConstrainedJson;
  return p;
}

void EndpointConfig::validate() const {
  if (!(timeout_s > 0.0)) throw ConfigError("timeout_s must be > 0");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (max_concurrency < 1) throw ConfigError("max_concurrency must be >= 1");
  if (decoding.temperature < 0.0) throw ConfigError("decoding.temperature must be >= 0");
  if (!(decoding.top_p > 0.0 && decoding.top_p <= 1.0)) {
    throw ConfigError("decoding.top_p must be in (0, 1]");
  }
  if (decoding.max_new_tokens < 1) throw ConfigError("decoding.max_new_tokens must be >= 1");
}

std::int64_t estimate_tokens(std::string_view text) { return text::count_words(text); }

std::int64_t estimate_prompt_tokens(const ChatTranscript& transcript) {
  std::int64_t n = 0;
  for (const auto& m : transcript.messages()) n += estimate_tokens(m.content);
  return n;
}

ConcurrencyLimiter::ConcurrencyLimiter(int limit) : limit_(limit < 1 ? 1 : limit) {}

void ConcurrencyLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return in_flight_ < limit_; });
  ++in_flight_;
}

void ConcurrencyLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

int ConcurrencyLimiter::in_flight() const {
  std::lock_guard lock(mu_);
  return in_flight_;
}

}  // namespace hintstep

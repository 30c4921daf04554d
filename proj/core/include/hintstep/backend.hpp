// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hintstep/types.hpp"

namespace hintstep {

enum class Role { kSystem, kUser, kAssistant };
std::string_view to_string(Role r);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// Ordered chat turns sent to a completion endpoint.
class ChatTranscript {
 public:
  ChatTranscript() = default;
  ChatTranscript(std::initializer_list<ChatMessage> messages) : messages_(messages) {}

  ChatTranscript& system(std::string content);
  ChatTranscript& user(std::string content);
  ChatTranscript& assistant(std::string content);

  const std::vector<ChatMessage>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }

  // All message contents joined with '\n', for matching and estimation.
  std::string joined() const;

  // Throws BackendError unless non-empty and not ending on an assistant turn.
  void validate_for_request() const;

  bool operator==(const ChatTranscript&) const = default;

 private:
  std::vector<ChatMessage> messages_;
};

enum class ResponseFormat { kFreeText, kConstrainedJson };

struct DecodingParams {
  double temperature = 0.0;  // 0 requests sampling-free decoding
  double top_p = 1.0;
  int max_new_tokens = 1024;
  std::optional<std::int64_t> seed;
  ResponseFormat response_format = ResponseFormat::kFreeText;

  bool deterministic() const { return temperature == 0.0; }
  bool operator==(const DecodingParams&) const = default;
};

// Deterministic decoding for step-wise refinement.
DecodingParams refinement_preset();
// Mildly stochastic decoding with JSON output for answer synthesis.
DecodingParams synthesis_preset();

struct EndpointConfig {
  std::string base_url;       // e.g. http://localhost:8000/v1
  std::string model_name;
  std::string api_key_env;    // name of the variable holding the key, may be empty
  double timeout_s = 120.0;
  int max_retries = 3;
  int max_concurrency = 4;
  double backoff_initial_s = 0.5;  // doubled after every failed attempt
  DecodingParams decoding = refinement_preset();

  void validate() const;  // throws ConfigError
};

struct Completion {
  std::string text;
  CallUsage usage;
};

// A language-model endpoint. Implementations must be safe for concurrent
// complete() calls unless documented otherwise.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual Completion complete(const ChatTranscript& transcript, const DecodingParams& decoding) = 0;

  // Default decoding configured for this endpoint.
  virtual const DecodingParams& default_decoding() const = 0;
  virtual std::string model_name() const = 0;
  // Upper bound on useful concurrent callers.
  virtual int max_concurrency() const = 0;
  // True when responses are scripted rather than produced by a model.
  virtual bool scripted() const { return false; }
};

// Local token estimate used when a server omits its usage report.
std::int64_t estimate_tokens(std::string_view text);
std::int64_t estimate_prompt_tokens(const ChatTranscript& transcript);

// Counting semaphore with a runtime bound (std::counting_semaphore fixes its
// maximum at compile time).
class ConcurrencyLimiter {
 public:
  explicit ConcurrencyLimiter(int limit);

  void acquire();
  void release();
  int limit() const { return limit_; }
  int in_flight() const;

  class Slot {
   public:
    explicit Slot(ConcurrencyLimiter& l) : limiter_(l) { limiter_.acquire(); }
    ~Slot() { limiter_.release(); }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

   private:
    ConcurrencyLimiter& limiter_;
  };

 private:
  int limit_;
  int in_flight_ = 0;
  mutable std::mutex mu_;
  std::condition_variable cv_;
};

}  // namespace hintstep

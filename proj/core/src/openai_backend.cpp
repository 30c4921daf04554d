// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/openai_backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "hintstep/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hintstep {

using nlohmann::json;

namespace {

bool transient_status(int status) { return status == 429 || status >= 500; }

std::chrono::duration<double> seconds(double s) { return std::chrono::duration<double>(s); }

}  // namespace

ParsedUrl parse_base_url(std::string_view base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw ConfigError("base_url must start with http:// or https://: " + std::string(base_url));
  }
  std::string_view scheme = base_url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported URL scheme '" + std::string(scheme) + "'");
  }
  std::string_view rest = base_url.substr(scheme_end + 3);
  auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (authority.empty()) throw ConfigError("base_url has no host: " + std::string(base_url));
  ParsedUrl out;
  out.scheme_host_port = std::string(scheme) + "://" + std::string(authority);
  if (slash != std::string_view::npos) {
    out.path_prefix = std::string(rest.substr(slash));
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
  }
  return out;
}

std::string build_chat_request(std::string_view model, const ChatTranscript& transcript,
                               const DecodingParams& decoding) {
  json messages = json::array();
  for (const auto& m : transcript.messages()) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  json body = {
      {"model", model},
      {"messages", std::move(messages)},
      {"temperature", decoding.temperature},
      {"top_p", decoding.top_p},
      {"max_tokens", decoding.max_new_tokens},
  };
  if (decoding.seed) body["seed"] = *decoding.seed;
  if (decoding.response_format == ResponseFormat::kConstrainedJson) {
    body["response_format"] = {{"type", "json_object"}};
  }
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

Completion parse_chat_response(std::string_view body, const ChatTranscript& transcript) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw MalformedResponseError("response is not a JSON object", 200, std::string(body));
  }
  const json* content = nullptr;
  if (auto choices = doc.find("choices"); choices != doc.end() && choices->is_array() &&
                                          !choices->empty()) {
    const json& first = (*choices)[0];
    if (auto msg = first.find("message"); msg != first.end() && msg->is_object()) {
      if (auto c = msg->find("content"); c != msg->end() && c->is_string()) content = &*c;
    }
  }
  if (content == nullptr) {
    throw MalformedResponseError("response has no choices[0].message.content string", 200,
                                 std::string(body));
  }
  Completion out;
  out.text = content->get<std::string>();

  auto usage = doc.find("usage");
  bool have_usage = usage != doc.end() && usage->is_object() &&
                    usage->contains("prompt_tokens") && (*usage)["prompt_tokens"].is_number_integer() &&
                    usage->contains("completion_tokens") &&
                    (*usage)["completion_tokens"].is_number_integer();
  if (have_usage) {
    out.usage.prompt_tokens = (*usage)["prompt_tokens"].get<std::int64_t>();
    out.usage.completion_tokens = (*usage)["completion_tokens"].get<std::int64_t>();
  } else {
    out.usage.prompt_tokens = estimate_prompt_tokens(transcript);
    out.usage.completion_tokens = estimate_tokens(out.text);
    out.usage.estimated = true;
  }
  return out;
}

OpenAiBackend::OpenAiBackend(EndpointConfig config)
    : config_(std::move(config)), limiter_(config_.max_concurrency) {
  config_.validate();
  ParsedUrl url = parse_base_url(config_.base_url);
  scheme_host_port_ = std::move(url.scheme_host_port);
  path_prefix_ = std::move(url.path_prefix);
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr) {
      throw ConfigError("environment variable " + config_.api_key_env +
                        " (api_key_env) is not set");
    }
    api_key_ = key;
  }
}

OpenAiBackend::~OpenAiBackend() = default;

Completion OpenAiBackend::complete(const ChatTranscript& transcript,
                                   const DecodingParams& decoding) {
  transcript.validate_for_request();
  ConcurrencyLimiter::Slot slot(limiter_);

  const std::string body = build_chat_request(config_.model_name, transcript, decoding);
  const std::string path = path_prefix_ + "/chat/completions";
  const auto start = std::chrono::steady_clock::now();

  httplib::Client client(scheme_host_port_);
  auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(seconds(config_.timeout_s));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  std::string last_error;
  bool last_was_timeout = false;
  int last_status = 0;
  std::string last_body;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(seconds(config_.backoff_initial_s * std::pow(2.0, attempt - 1)));
    }
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      auto err = res.error();
      last_error = "request to " + scheme_host_port_ + path + " failed: " + httplib::to_string(err);
      last_was_timeout = err == httplib::Error::Read || err == httplib::Error::Write ||
                         err == httplib::Error::ConnectionTimeout;
      last_status = 0;
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      Completion out = parse_chat_response(res->body, transcript);
      out.usage.retries = attempt;
      out.usage.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    }
    last_status = res->status;
    last_body = res->body;
    last_was_timeout = false;
    last_error = "HTTP " + std::to_string(res->status) + " from " + scheme_host_port_ + path;
    if (!transient_status(res->status)) break;
  }
  std::string what = last_error + " (attempts: up to " + std::to_string(config_.max_retries + 1) + ")";
  if (last_was_timeout) throw TimeoutError(what);
  throw BackendError(what, last_status, last_body);
}

}  // namespace hintstep

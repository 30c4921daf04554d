// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace hintstep {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input with a file position. line is 1-based; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// A record parsed but violates an invariant of its type.
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateIdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

// Anything that went wrong talking to a model endpoint.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, int http_status = 0, std::string body = {})
      : Error(what), http_status_(http_status), body_(std::move(body)) {}

  int http_status() const noexcept { return http_status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int http_status_;
  std::string body_;
};

class TimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
};

class MalformedResponseError : public BackendError {
 public:
  using BackendError::BackendError;
};

class ScriptExhaustedError : public BackendError {
 public:
  using BackendError::BackendError;
};

class ScriptMismatchError : public BackendError {
 public:
  using BackendError::BackendError;
};

class NoUsableHintsError : public Error {
 public:
  using Error::Error;
};

class VerifyError : public Error {
 public:
  using Error::Error;
};

class MetricsError : public Error {
 public:
  using Error::Error;
};

}  // namespace hintstep

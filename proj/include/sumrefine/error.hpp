// Copyright 2026 The sumrefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUMREFINE_ERROR_HPP
#define SUMREFINE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sumrefine {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (bad field values, missing keys, unreadable config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Base for failures talking to a generator or evaluator backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Transient failures persisted through every retry.
class BackendUnavailableError : public BackendError {
 public:
  BackendUnavailableError(const std::string& what, int last_status)
      : BackendError(what), last_status_(last_status) {}
  /// Last HTTP status seen, or 0 when the transport itself failed.
  int last_status() const { return last_status_; }

 private:
  int last_status_;
};

/// The backend answered with a non-retryable client error.
class RequestRejectedError : public BackendError {
 public:
  RequestRejectedError(int status, std::string body)
      : BackendError("request rejected with HTTP " + std::to_string(status) + ": " + body),
        status_(status),
        body_(std::move(body)) {}
  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

/// A 2xx response whose body did not follow the expected wire format.
class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// A scripted mock was called with no queued responses left.
class MockExhaustedError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// The judge output could not be turned into a ScoreReport.
class MalformedReportError : public Error {
 public:
  using Error::Error;
};

/// Sentence-score aggregation was asked to average nothing.
class EmptySummaryError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for its inputs (e.g. BERTScore on an empty side).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Corpus loading failed; carries the 1-based line (record) number when known.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sumrefine

#endif  // SUMREFINE_ERROR_HPP

// Copyright 2026 The SecureExam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SECUREXAM_CORE_ERROR_HPP_
#define SECUREXAM_CORE_ERROR_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "json.hpp"

namespace securexam {

// Every failure the library reports. The string form (to_string) is the
// stable wire code used in error envelopes and CLI output.
enum class ErrorCode {
  // generic
  kMalformedRequest,
  kIoError,
  kInvalidArgument,
  kNotFound,
  kInternal,
  // exam_model
  kMalformedDraft,
  kEmptyExam,
  kBadOptionCount,
  kMissingCorrectOption,
  kDanglingResourceRef,
  kDuplicateId,
  kNonPositiveDuration,
  kNonPositiveMarks,
  kDigestMismatch,
  kResourceTooLarge,
  kDesignMismatch,
  // crypto_packaging
  kRandomnessUnavailable,
  kNoRecipients,
  kSerializationFailure,
  kWrongKeyRole,
  kMalformedKey,
  kMalformedPackage,
  kBadSignature,
  kNotARecipient,
  kTampered,
  kInvalidPayload,
  // scheduling
  kMalformedRoster,
  kDuplicateCandidate,
  kInsufficientCapacity,
  // session_engine
  kUnknownCandidate,
  kWrongIdentityNumber,
  kNotAssignedToSitting,
  kOutsideAdmissionWindow,
  kAlreadyCompleted,
  kUnknownSitting,
  kSittingNotOpen,
  kUnknownToken,
  kLockdownRejected,
  kTokenExpired,
  kAlreadyStarted,
  kSessionNotActive,
  kUnknownQuestion,
  kMalformedAnswer,
  kPastDeadline,
  // grading_results
  kExamMismatch,
  kNotAnEssayQuestion,
  kMarkOutOfRange,
  kAlreadyFinalized,
  kNoScriptOnRecord,
  kCardAlreadyIssued,
  kBadCredentials,
  kBadPin,
  kCardUsed,
  kEmbargoActive,
  kResultNotFinal,
  // service_api
  kDuplicatePackage,
  kUnauthorized,
  kTooEarly,
  kUnsealFailure,
  kThrottled,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> error_code_from_string(std::string_view name);

struct Error {
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
  // Inner error for wrapping codes such as UnsealFailure(Tampered).
  std::optional<ErrorCode> cause;
  // Structured extras, e.g. {"minimal_days": 3} for InsufficientCapacity.
  nlohmann::json details;

  Error() = default;
  Error(ErrorCode c, std::string msg = {}) : code(c), message(std::move(msg)) {}

  Error& with_cause(ErrorCode c) {
    cause = c;
    return *this;
  }
  Error& with_details(nlohmann::json d) {
    details = std::move(d);
    return *this;
  }

  // "Code: message" for logs and exceptions.
  std::string describe() const;
};

// Value-or-error return type for every fallible operation.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : state_(std::in_place_index<0>, std::move(value)) {}
  Result(Error error) : state_(std::in_place_index<1>, std::move(error)) {}
  Result(ErrorCode code, std::string message = {})
      : state_(std::in_place_index<1>, Error(code, std::move(message))) {}

  bool ok() const { return state_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<0>(state_); }
  T& value() & { return std::get<0>(state_); }
  T&& value() && { return std::get<0>(std::move(state_)); }

  const Error& error() const { return std::get<1>(state_); }
  ErrorCode code() const { return ok() ? ErrorCode::kInternal : error().code; }

  const T& operator*() const& { return value(); }
  T& operator*() & { return value(); }
  const T* operator->() const { return &value(); }
  T* operator->() { return &value(); }

 private:
  std::variant<T, Error> state_;
};

template <>
class [[nodiscard]] Result<void> {
 public:
  Result() = default;
  Result(Error error) : error_(std::move(error)) {}
  Result(ErrorCode code, std::string message = {})
      : error_(Error(code, std::move(message))) {}

  bool ok() const { return !error_.has_value(); }
  explicit operator bool() const { return ok(); }
  const Error& error() const { return *error_; }
  ErrorCode code() const { return ok() ? ErrorCode::kInternal : error_->code; }

 private:
  std::optional<Error> error_;
};

using Status = Result<void>;

}  // namespace securexam

#endif  // SECUREXAM_CORE_ERROR_HPP_

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

#include "securexam/core/error.hpp"

#include <utility>

namespace securexam {
namespace {

constexpr std::pair<ErrorCode, std::string_view> kNames[] = {
    {ErrorCode::kMalformedRequest, "MalformedRequest"},
    {ErrorCode::kIoError, "IoError"},
    {ErrorCode::kInvalidArgument, "InvalidArgument"},
    {ErrorCode::kNotFound, "NotFound"},
    {ErrorCode::kInternal, "Internal"},
    {ErrorCode::kMalformedDraft, "MalformedDraft"},
    {ErrorCode::kEmptyExam, "EmptyExam"},
    {ErrorCode::kBadOptionCount, "BadOptionCount"},
    {ErrorCode::kMissingCorrectOption, "MissingCorrectOption"},
    {ErrorCode::kDanglingResourceRef, "DanglingResourceRef"},
    {ErrorCode::kDuplicateId, "DuplicateId"},
    {ErrorCode::kNonPositiveDuration, "NonPositiveDuration"},
    {ErrorCode::kNonPositiveMarks, "NonPositiveMarks"},
    {ErrorCode::kDigestMismatch, "DigestMismatch"},
    {ErrorCode::kResourceTooLarge, "ResourceTooLarge"},
    {ErrorCode::kDesignMismatch, "DesignMismatch"},
    {ErrorCode::kRandomnessUnavailable, "RandomnessUnavailable"},
    {ErrorCode::kNoRecipients, "NoRecipients"},
    {ErrorCode::kSerializationFailure, "SerializationFailure"},
    {ErrorCode::kWrongKeyRole, "WrongKeyRole"},
    {ErrorCode::kMalformedKey, "MalformedKey"},
    {ErrorCode::kMalformedPackage, "MalformedPackage"},
    {ErrorCode::kBadSignature, "BadSignature"},
    {ErrorCode::kNotARecipient, "NotARecipient"},
    {ErrorCode::kTampered, "Tampered"},
    {ErrorCode::kInvalidPayload, "InvalidPayload"},
    {ErrorCode::kMalformedRoster, "MalformedRoster"},
    {ErrorCode::kDuplicateCandidate, "DuplicateCandidate"},
    {ErrorCode::kInsufficientCapacity, "InsufficientCapacity"},
    {ErrorCode::kUnknownCandidate, "UnknownCandidate"},
    {ErrorCode::kWrongIdentityNumber, "WrongIdentityNumber"},
    {ErrorCode::kNotAssignedToSitting, "NotAssignedToSitting"},
    {ErrorCode::kOutsideAdmissionWindow, "OutsideAdmissionWindow"},
    {ErrorCode::kAlreadyCompleted, "AlreadyCompleted"},
    {ErrorCode::kUnknownSitting, "UnknownSitting"},
    {ErrorCode::kSittingNotOpen, "SittingNotOpen"},
    {ErrorCode::kUnknownToken, "UnknownToken"},
    {ErrorCode::kLockdownRejected, "LockdownRejected"},
    {ErrorCode::kTokenExpired, "TokenExpired"},
    {ErrorCode::kAlreadyStarted, "AlreadyStarted"},
    {ErrorCode::kSessionNotActive, "SessionNotActive"},
    {ErrorCode::kUnknownQuestion, "UnknownQuestion"},
    {ErrorCode::kMalformedAnswer, "MalformedAnswer"},
    {ErrorCode::kPastDeadline, "PastDeadline"},
    {ErrorCode::kExamMismatch, "ExamMismatch"},
    {ErrorCode::kNotAnEssayQuestion, "NotAnEssayQuestion"},
    {ErrorCode::kMarkOutOfRange, "MarkOutOfRange"},
    {ErrorCode::kAlreadyFinalized, "AlreadyFinalized"},
    {ErrorCode::kNoScriptOnRecord, "NoScriptOnRecord"},
    {ErrorCode::kCardAlreadyIssued, "CardAlreadyIssued"},
    {ErrorCode::kBadCredentials, "BadCredentials"},
    {ErrorCode::kBadPin, "BadPin"},
    {ErrorCode::kCardUsed, "CardUsed"},
    {ErrorCode::kEmbargoActive, "EmbargoActive"},
    {ErrorCode::kResultNotFinal, "ResultNotFinal"},
    {ErrorCode::kDuplicatePackage, "DuplicatePackage"},
    {ErrorCode::kUnauthorized, "Unauthorized"},
    {ErrorCode::kTooEarly, "TooEarly"},
    {ErrorCode::kUnsealFailure, "UnsealFailure"},
    {ErrorCode::kThrottled, "Throttled"},
};

}  // namespace

std::string_view to_string(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Internal";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

std::string Error::describe() const {
  std::string out(to_string(code));
  if (cause) {
    out += "(";
    out += to_string(*cause);
    out += ")";
  }
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace securexam

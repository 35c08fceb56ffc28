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

#ifndef SECUREXAM_SCHEDULING_ROSTER_HPP_
#define SECUREXAM_SCHEDULING_ROSTER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/core/bytes.hpp"
#include "securexam/core/error.hpp"

namespace securexam {

struct CandidateRecord {
  std::string reg_no;
  std::string identity_no;
  std::string full_name;
  std::string course_code;
  int eligibility_score = 0;
  // Opaque stand-in for a biometric enrollment record.
  Bytes enrollment_token;

  friend bool operator==(const CandidateRecord&, const CandidateRecord&) = default;
};

inline constexpr std::string_view kRosterHeader =
    "reg_no,identity_no,full_name,course_code,eligibility_score";

// Parses the roster CSV. reg_no must be unique, and so must each
// (reg_no, identity_no) pair.
Result<std::vector<CandidateRecord>> parse_roster_csv(std::string_view text);
std::string roster_to_csv(const std::vector<CandidateRecord>& roster);

nlohmann::json roster_to_json(const std::vector<CandidateRecord>& roster);
Result<std::vector<CandidateRecord>> roster_from_json(const nlohmann::json& j);

// Candidates with eligibility_score >= cutoff, original order kept.
std::vector<CandidateRecord> filter_eligible(const std::vector<CandidateRecord>& roster,
                                             int cutoff);

}  // namespace securexam

#endif  // SECUREXAM_SCHEDULING_ROSTER_HPP_

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

#ifndef SECUREXAM_SCHEDULING_POLICY_HPP_
#define SECUREXAM_SCHEDULING_POLICY_HPP_

#include <string_view>

namespace securexam {

enum class CourseLevel { k100, k200, kOther };
enum class ExamMode { kElectronic, kPaper };

std::string_view to_string(ExamMode m);

struct ExamModePolicy {
  CourseLevel level = CourseLevel::kOther;
  int enrolment = 0;
  ExamMode lecturer_preference = ExamMode::kElectronic;
};

// Lecturers may opt out of electronic mode only when enrolment is at most
// this many students.
inline constexpr int kOptOutEnrolmentLimit = 100;

// 100- and 200-level courses are electronic unless enrolment is small enough
// for the lecturer's preference to apply; other levels follow the lecturer.
ExamMode exam_mode(const ExamModePolicy& policy);

}  // namespace securexam

#endif  // SECUREXAM_SCHEDULING_POLICY_HPP_

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

#ifndef SECUREXAM_EXAM_PRESENTATION_HPP_
#define SECUREXAM_EXAM_PRESENTATION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/exam/model.hpp"

namespace securexam {

// Per-session anti-collusion ordering of questions and objective options.
//
// The seed is SHA-256(exam_id || 0x00 || session_token). A deterministic
// stream of 64-bit words is drawn from SHA-256(seed || le64(counter)) and
// fed to Fisher-Yates with rejection sampling: first the question order,
// then each objective question's options in original question order.
struct PresentationOrder {
  // question_order[i] = original index of the question shown at position i.
  std::vector<std::size_t> question_order;
  // option_orders[q][p] = original option index shown at position p for
  // original question q. Empty for essays.
  std::vector<std::vector<std::size_t>> option_orders;
  Digest256 seed_digest;

  friend bool operator==(const PresentationOrder&, const PresentationOrder&) = default;
};

PresentationOrder derive_presentation(const ValidatedExam& exam,
                                      std::string_view session_token);

// Labels shown to the candidate are re-lettered A, B, C... by position.
std::string presented_label(std::size_t position);

// Maps a label the candidate saw back to the canonical option label.
std::optional<std::string> canonical_label(const ValidatedExam& exam,
                                           const PresentationOrder& order,
                                           std::size_t question_index,
                                           std::string_view shown_label);

// The inverse: what the candidate saw for a canonical label.
std::optional<std::string> shown_label(const ValidatedExam& exam,
                                       const PresentationOrder& order,
                                       std::size_t question_index,
                                       std::string_view canonical);

// The candidate's paper: presentation order, re-lettered options, no keys.
nlohmann::json render_paper(const ValidatedExam& exam,
                            const PresentationOrder& order,
                            bool include_resource_bytes = true);

}  // namespace securexam

#endif  // SECUREXAM_EXAM_PRESENTATION_HPP_

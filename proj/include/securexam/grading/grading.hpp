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

#ifndef SECUREXAM_GRADING_GRADING_HPP_
#define SECUREXAM_GRADING_GRADING_HPP_

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/random.hpp"
#include "securexam/core/time.hpp"
#include "securexam/exam/model.hpp"
#include "securexam/scheduling/planner.hpp"
#include "securexam/scheduling/roster.hpp"
#include "securexam/session/engine.hpp"

namespace securexam {

enum class ScoreStatus { kPartial, kFinal };
std::string_view to_string(ScoreStatus s);

struct EssayAward {
  int awarded = 0;
  std::string marker_id;
  friend bool operator==(const EssayAward&, const EssayAward&) = default;
};

struct RemarkEntry {
  std::string question_id;
  std::optional<int> previous;
  int awarded = 0;
  std::string marker_id;
  friend bool operator==(const RemarkEntry&, const RemarkEntry&) = default;
};

struct Score {
  std::string reg_no;
  std::string exam_id;
  std::string course_code;
  int objective_marks = 0;
  int objective_max = 0;
  std::map<std::string, EssayAward> essay_marks;
  std::vector<std::string> essay_questions;  // every essay id in the exam
  int total = 0;
  int max_total = 0;
  ScoreStatus status = ScoreStatus::kPartial;
  std::vector<RemarkEntry> mark_history;

  int essay_total() const;
  nlohmann::json to_json() const;
  static Result<Score> from_json(const nlohmann::json& j);
  friend bool operator==(const Score&, const Score&) = default;
};

// One mark per objective question whose recorded label equals the key.
// Blanks and unknown labels score 0; no negative marking.
Result<Score> grade_objective(const AnswerScript& script, const ValidatedExam& exam);

// Records a human mark for an essay question. Re-marking overwrites and
// appends to mark_history. Totals and finality are recomputed.
Result<Score> record_essay_mark(Score score, const ValidatedExam& exam,
                                std::string_view question_id, int awarded,
                                std::string_view marker_id);

inline constexpr std::string_view kResultCsvHeader =
    "reg_no,course_code,objective_marks,essay_marks_total,total,max_total,status";
std::string results_to_csv(const std::vector<Score>& scores);

// --- scratch cards ---

inline constexpr int kPinDigits = 12;

struct ScratchCard {
  std::string card_id;
  std::string reg_no;
  std::string exam_id;
  Bytes salt;
  Digest256 pin_hash;  // SHA-256(salt || pin)
  bool used = false;
  bool voided = false;
  Timestamp release_time;
  std::string provenance = "purchased";

  nlohmann::json to_json() const;
  static Result<ScratchCard> from_json(const nlohmann::json& j);
};

struct IssuedCard {
  ScratchCard card;
  std::string pin;  // shown exactly once, never stored
};

Digest256 hash_pin(ByteView salt, std::string_view pin);

struct ResultsDeskConfig {
  Hours embargo{24};
};

// Scores, scratch cards and the embargoed result lookup. Thread-safe; card
// redemption is an atomic test-and-set under the desk lock.
class ResultsDesk {
 public:
  explicit ResultsDesk(std::vector<CandidateRecord> roster, ResultsDeskConfig config = {});

  void put_score(Score score);
  std::optional<Score> score(std::string_view reg_no, std::string_view exam_id) const;
  std::vector<Score> scores() const;

  Result<Score> record_essay_mark(std::string_view reg_no, const ValidatedExam& exam,
                                  std::string_view question_id, int awarded,
                                  std::string_view marker_id);

  // release_time = sitting end + embargo.
  Result<IssuedCard> issue_scratch_card(std::string_view reg_no, const Sitting& sitting,
                                        RandomSource& rng);
  Status void_card(std::string_view card_id);

  Result<Score> check_result(std::string_view reg_no, std::string_view identity_no,
                             std::string_view pin, Timestamp now);

  std::vector<ScratchCard> cards() const;
  void restore_card(ScratchCard card);

 private:
  ResultsDeskConfig config_;
  std::map<std::string, std::string, std::less<>> identity_;  // reg_no -> identity_no
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, Score> scores_;
  std::vector<ScratchCard> cards_;
};

}  // namespace securexam

#endif  // SECUREXAM_GRADING_GRADING_HPP_

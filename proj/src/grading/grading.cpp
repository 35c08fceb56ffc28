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

#include "securexam/grading/grading.hpp"

#include <sodium.h>

#include <algorithm>

namespace securexam {

using nlohmann::json;

std::string_view to_string(ScoreStatus s) { return s == ScoreStatus::kFinal ? "final" : "partial"; }

int Score::essay_total() const {
  int sum = 0;
  for (const auto& [_, award] : essay_marks) sum += award.awarded;
  return sum;
}

json Score::to_json() const {
  json essays = json::object();
  for (const auto& [qid, a] : essay_marks) essays[qid] = {{"awarded", a.awarded}, {"marker_id", a.marker_id}};
  json history = json::array();
  for (const auto& h : mark_history) {
    history.push_back({{"question_id", h.question_id},
                       {"previous", h.previous ? json(*h.previous) : json(nullptr)},
                       {"awarded", h.awarded},
                       {"marker_id", h.marker_id}});
  }
  return {{"reg_no", reg_no},
          {"exam_id", exam_id},
          {"course_code", course_code},
          {"objective_marks", objective_marks},
          {"objective_max", objective_max},
          {"essay_marks", std::move(essays)},
          {"essay_questions", essay_questions},
          {"essay_marks_total", essay_total()},
          {"total", total},
          {"max_total", max_total},
          {"status", std::string(to_string(status))},
          {"mark_history", std::move(history)}};
}

Result<Score> Score::from_json(const json& j) {
  Score s;
  try {
    s.reg_no = j.at("reg_no").get<std::string>();
    s.exam_id = j.at("exam_id").get<std::string>();
    s.course_code = j.at("course_code").get<std::string>();
    s.objective_marks = j.at("objective_marks").get<int>();
    s.objective_max = j.at("objective_max").get<int>();
    for (const auto& [qid, a] : j.at("essay_marks").items()) {
      s.essay_marks[qid] = {a.at("awarded").get<int>(), a.at("marker_id").get<std::string>()};
    }
    s.essay_questions = j.at("essay_questions").get<std::vector<std::string>>();
    s.total = j.at("total").get<int>();
    s.max_total = j.at("max_total").get<int>();
    s.status = j.at("status").get<std::string>() == "final" ? ScoreStatus::kFinal : ScoreStatus::kPartial;
    for (const auto& h : j.value("mark_history", json::array())) {
      RemarkEntry e;
      e.question_id = h.at("question_id").get<std::string>();
      if (!h.at("previous").is_null()) e.previous = h.at("previous").get<int>();
      e.awarded = h.at("awarded").get<int>();
      e.marker_id = h.at("marker_id").get<std::string>();
      s.mark_history.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    return Error(ErrorCode::kMalformedRequest, std::string("score: ") + e.what());
  }
  return s;
}

namespace {

void recompute(Score& s) {
  s.total = s.objective_marks + s.essay_total();
  const bool all_marked = std::all_of(s.essay_questions.begin(), s.essay_questions.end(),
                                      [&](const std::string& q) { return s.essay_marks.contains(q); });
  s.status = all_marked ? ScoreStatus::kFinal : ScoreStatus::kPartial;
}

}  // namespace

Result<Score> grade_objective(const AnswerScript& script, const ValidatedExam& exam) {
  if (script.exam_id != exam.exam_id()) {
    return Error(ErrorCode::kExamMismatch,
                 "script is for " + script.exam_id + ", exam is " + exam.exam_id());
  }
  Score s;
  s.reg_no = script.reg_no;
  s.exam_id = exam.exam_id();
  s.course_code = exam.course_code();
  s.max_total = exam.max_total();
  for (const auto& q : exam.questions()) {
    if (q.is_essay()) {
      s.essay_questions.push_back(q.id);
      continue;
    }
    ++s.objective_max;
    auto it = script.answers.find(q.id);
    if (it != script.answers.end() && it->second && it->second->value == q.correct_option) {
      ++s.objective_marks;
    }
  }
  recompute(s);
  return s;
}

Result<Score> record_essay_mark(Score score, const ValidatedExam& exam,
                                std::string_view question_id, int awarded,
                                std::string_view marker_id) {
  if (score.exam_id != exam.exam_id()) return Error(ErrorCode::kExamMismatch, "score is for another exam");
  if (score.status == ScoreStatus::kFinal) {
    return Error(ErrorCode::kAlreadyFinalized, "marks for " + score.reg_no + " are frozen");
  }
  const Question* q = exam.find_question(question_id);
  if (!q || !q->is_essay()) {
    return Error(ErrorCode::kNotAnEssayQuestion, std::string(question_id) + " is not an essay question");
  }
  if (awarded < 0 || awarded > q->max_marks) {
    return Error(ErrorCode::kMarkOutOfRange, std::to_string(awarded) + " outside [0, " +
                                                 std::to_string(q->max_marks) + "]");
  }
  std::optional<int> previous;
  if (auto it = score.essay_marks.find(q->id); it != score.essay_marks.end()) previous = it->second.awarded;
  score.essay_marks[q->id] = EssayAward{awarded, std::string(marker_id)};
  score.mark_history.push_back({q->id, previous, awarded, std::string(marker_id)});
  recompute(score);
  return score;
}

std::string results_to_csv(const std::vector<Score>& scores) {
  std::string out(kResultCsvHeader);
  out += '\n';
  for (const auto& s : scores) {
    out += s.reg_no + ',' + s.course_code + ',' + std::to_string(s.objective_marks) + ',' +
           std::to_string(s.essay_total()) + ',' + std::to_string(s.total) + ',' +
           std::to_string(s.max_total) + ',' + std::string(to_string(s.status)) + '\n';
  }
  return out;
}

// --- scratch cards ---

Digest256 hash_pin(ByteView salt, std::string_view pin) {
  return Sha256().update(salt).update(pin).finish();
}

json ScratchCard::to_json() const {
  return {{"card_id", card_id},
          {"reg_no", reg_no},
          {"exam_id", exam_id},
          {"salt", to_hex(salt)},
          {"pin_hash", pin_hash.hex()},
          {"used", used},
          {"voided", voided},
          {"release_time", to_unix(release_time)},
          {"provenance", provenance}};
}

Result<ScratchCard> ScratchCard::from_json(const json& j) {
  ScratchCard c;
  try {
    c.card_id = j.at("card_id").get<std::string>();
    c.reg_no = j.at("reg_no").get<std::string>();
    c.exam_id = j.at("exam_id").get<std::string>();
    auto salt = from_hex(j.at("salt").get<std::string>());
    auto hash = Digest256::from_hex(j.at("pin_hash").get<std::string>());
    if (!salt || !hash) return Error(ErrorCode::kMalformedRequest, "card: bad salt or hash");
    c.salt = std::move(*salt);
    c.pin_hash = *hash;
    c.used = j.at("used").get<bool>();
    c.voided = j.value("voided", false);
    c.release_time = from_unix(j.at("release_time").get<std::int64_t>());
    c.provenance = j.value("provenance", "purchased");
  } catch (const json::exception& e) {
    return Error(ErrorCode::kMalformedRequest, std::string("card: ") + e.what());
  }
  return c;
}

ResultsDesk::ResultsDesk(std::vector<CandidateRecord> roster, ResultsDeskConfig config)
    : config_(config) {
  for (const auto& c : roster) identity_[c.reg_no] = c.identity_no;
}

void ResultsDesk::put_score(Score score) {
  std::lock_guard lock(mu_);
  auto key = std::make_pair(score.reg_no, score.exam_id);
  scores_[key] = std::move(score);
}

std::optional<Score> ResultsDesk::score(std::string_view reg_no, std::string_view exam_id) const {
  std::lock_guard lock(mu_);
  auto it = scores_.find({std::string(reg_no), std::string(exam_id)});
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

std::vector<Score> ResultsDesk::scores() const {
  std::lock_guard lock(mu_);
  std::vector<Score> out;
  out.reserve(scores_.size());
  for (const auto& [_, s] : scores_) out.push_back(s);
  return out;
}

Result<Score> ResultsDesk::record_essay_mark(std::string_view reg_no, const ValidatedExam& exam,
                                             std::string_view question_id, int awarded,
                                             std::string_view marker_id) {
  std::lock_guard lock(mu_);
  auto it = scores_.find({std::string(reg_no), exam.exam_id()});
  if (it == scores_.end()) {
    return Error(ErrorCode::kNoScriptOnRecord, "no graded script for " + std::string(reg_no));
  }
  auto updated = securexam::record_essay_mark(it->second, exam, question_id, awarded, marker_id);
  if (updated) it->second = *updated;
  return updated;
}

Result<IssuedCard> ResultsDesk::issue_scratch_card(std::string_view reg_no, const Sitting& sitting,
                                                   RandomSource& rng) {
  std::lock_guard lock(mu_);
  if (!sitting.has(reg_no) || !scores_.contains({std::string(reg_no), sitting.exam_id})) {
    return Error(ErrorCode::kNoScriptOnRecord,
                 std::string(reg_no) + " has no script for " + sitting.sitting_id);
  }
  for (const auto& c : cards_) {
    if (c.reg_no == reg_no && c.exam_id == sitting.exam_id && !c.voided) {
      return Error(ErrorCode::kCardAlreadyIssued, "card " + c.card_id + " already issued");
    }
  }
  IssuedCard out;
  out.pin.reserve(kPinDigits);
  for (int i = 0; i < kPinDigits; ++i) out.pin.push_back(static_cast<char>('0' + rng.uniform(10)));
  out.card.card_id = to_hex(rng.bytes(8));
  out.card.reg_no = std::string(reg_no);
  out.card.exam_id = sitting.exam_id;
  out.card.salt = rng.bytes(16);
  out.card.pin_hash = hash_pin(out.card.salt, out.pin);
  out.card.release_time = sitting.end_time() + config_.embargo;
  cards_.push_back(out.card);
  return out;
}

Status ResultsDesk::void_card(std::string_view card_id) {
  std::lock_guard lock(mu_);
  for (auto& c : cards_) {
    if (c.card_id == card_id) {
      c.voided = true;
      return {};
    }
  }
  return {ErrorCode::kNotFound, "no card " + std::string(card_id)};
}

Result<Score> ResultsDesk::check_result(std::string_view reg_no, std::string_view identity_no,
                                        std::string_view pin, Timestamp now) {
  auto id = identity_.find(reg_no);
  if (id == identity_.end() || id->second != identity_no) {
    return Error(ErrorCode::kBadCredentials, "registration/identity pair not recognised");
  }
  std::lock_guard lock(mu_);
  ScratchCard* card = nullptr;
  for (auto& c : cards_) {
    if (c.reg_no != reg_no || c.voided) continue;
    Digest256 h = hash_pin(c.salt, pin);
    if (sodium_memcmp(h.bytes.data(), c.pin_hash.bytes.data(), h.bytes.size()) == 0) {
      card = &c;
      break;
    }
  }
  if (!card) return Error(ErrorCode::kBadPin, "PIN not recognised");
  if (card->used) return Error(ErrorCode::kCardUsed, "card already used");
  if (now < card->release_time) {
    return Error(ErrorCode::kEmbargoActive, "results release at " + to_iso8601(card->release_time))
        .with_details({{"release_time", to_unix(card->release_time)}});
  }
  auto it = scores_.find({card->reg_no, card->exam_id});
  if (it == scores_.end() || it->second.status != ScoreStatus::kFinal) {
    return Error(ErrorCode::kResultNotFinal, "essay marks outstanding for " + card->reg_no);
  }
  card->used = true;
  return it->second;
}

std::vector<ScratchCard> ResultsDesk::cards() const {
  std::lock_guard lock(mu_);
  return cards_;
}

void ResultsDesk::restore_card(ScratchCard card) {
  std::lock_guard lock(mu_);
  cards_.push_back(std::move(card));
}

}  // namespace securexam

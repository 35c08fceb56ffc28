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


#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "securexam/grading/grading.hpp"
#include "test_support.hpp"

using namespace securexam;
using namespace securexam::testing;

namespace {

const Timestamp kStart = at("2026-11-02T10:00:00Z");

// Independent re-count: walks the key map rather than the question list.
int recount(const AnswerScript& s, const ValidatedExam& exam) {
  int n = 0;
  for (const auto& [qid, label] : answer_key(exam)) {
    auto it = s.answers.find(qid);
    if (it != s.answers.end() && it->second.has_value() && it->second->value == label) ++n;
  }
  return n;
}

std::string wrong_label(const Question& q, std::mt19937_64& gen) {
  std::vector<std::string> wrong;
  for (const auto& o : q.options) {
    if (o.label != q.correct_option) wrong.push_back(o.label);
  }
  return wrong[gen() % wrong.size()];
}

AnswerScript empty_script(const ValidatedExam& exam, const std::string& reg_no) {
  AnswerScript s;
  s.reg_no = reg_no;
  s.exam_id = exam.exam_id();
  s.sitting_id = "S";
  s.deadline = kStart + Minutes(30);
  s.submitted_at = s.deadline;
  for (const auto& q : exam.questions()) s.answers[q.id] = std::nullopt;
  return s;
}

void answer(AnswerScript& s, const std::string& qid, const std::string& value) {
  s.answers[qid] = RecordedAnswer{value, kStart + Minutes(1)};
}

Sitting sitting_for(const std::vector<CandidateRecord>& roster, const std::string& exam_id) {
  Sitting st;
  st.sitting_id = "S-1";
  st.exam_id = exam_id;
  st.start_time = kStart;
  st.capacity = static_cast<int>(roster.size());
  for (const auto& c : roster) st.assigned.push_back(c.reg_no);
  return st;
}

}  // namespace

TEST_CASE("13 correct, 5 wrong, 2 blank") {
  std::mt19937_64 gen(2026);
  auto exam = random_exam(gen, {.objective = 20}, "OBJ-20");
  std::vector<int> idx(20);
  for (int i = 0; i < 20; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  AnswerScript s = empty_script(exam, "REG00001");
  for (int k = 0; k < 18; ++k) {
    const auto& q = exam.questions()[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    answer(s, q.id, k < 13 ? q.correct_option : wrong_label(q, gen));
  }
  auto score = grade_objective(s, exam);
  REQUIRE(score.ok());
  CHECK(recount(s, exam) == 13);
  CHECK(score->objective_marks == 13);
  CHECK(score->total == 13);
  CHECK(score->max_total == 20);
  CHECK(score->status == ScoreStatus::kFinal);
  CHECK(s.blank_count() == 2);
}

TEST_CASE("grading agrees with the brute-force counter") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 500; ++trial) {
    auto exam = random_exam(gen, {.objective = 1 + static_cast<int>(gen() % 40)}, "R");
    AnswerScript s = empty_script(exam, "REG");
    for (const auto& q : exam.questions()) {
      switch (gen() % 3) {
        case 0: answer(s, q.id, q.correct_option); break;
        case 1: answer(s, q.id, wrong_label(q, gen)); break;
        default: break;
      }
    }
    auto score = grade_objective(s, exam);
    REQUIRE(score.ok());
    CHECK(score->objective_marks == recount(s, exam));
    CHECK(score->objective_max == static_cast<int>(exam.questions().size()));
  }
}

TEST_CASE("grading rejects a script for another exam") {
  std::mt19937_64 gen(1);
  auto a = random_exam(gen, {.objective = 3}, "A");
  auto b = random_exam(gen, {.objective = 3}, "B");
  CHECK(grade_objective(empty_script(a, "R"), b).code() == ErrorCode::kExamMismatch);
}

TEST_CASE("essay marks move a score from partial to final") {
  auto exam = load_exam_file(fixture_path("tennis/exam.json"));
  REQUIRE(exam.ok());
  AnswerScript s = empty_script(*exam, "REG1");
  answer(s, "q-hats", exam->find_question("q-hats")->correct_option);
  answer(s, "q-tennis", "The ball is in the air; it will be in the court.");
  auto score = grade_objective(s, *exam);
  REQUIRE(score.ok());
  CHECK(score->status == ScoreStatus::kPartial);
  CHECK(score->objective_marks == 1);
  CHECK(score->max_total == 11);

  CHECK(record_essay_mark(*score, *exam, "q-tennis", 11, "m1").code() == ErrorCode::kMarkOutOfRange);
  CHECK(record_essay_mark(*score, *exam, "q-tennis", -1, "m1").code() == ErrorCode::kMarkOutOfRange);
  CHECK(record_essay_mark(*score, *exam, "q-hats", 1, "m1").code() == ErrorCode::kNotAnEssayQuestion);
  CHECK(record_essay_mark(*score, *exam, "q-none", 1, "m1").code() == ErrorCode::kNotAnEssayQuestion);

  auto marked = record_essay_mark(*score, *exam, "q-tennis", 10, "m1");
  REQUIRE(marked.ok());
  CHECK(marked->status == ScoreStatus::kFinal);
  CHECK(marked->total == 11);
  CHECK(marked->mark_history.size() == 1);
  CHECK(record_essay_mark(*marked, *exam, "q-tennis", 5, "m2").code() == ErrorCode::kAlreadyFinalized);
}

TEST_CASE("a score stays partial until every essay is marked") {
  std::mt19937_64 gen(8);
  auto exam = random_exam(gen, {.objective = 4, .essay = 3}, "MIX");
  auto score = *grade_objective(empty_script(exam, "R"), exam);
  std::vector<const Question*> essays;
  for (const auto& q : exam.questions()) {
    if (q.is_essay()) essays.push_back(&q);
  }
  REQUIRE(essays.size() == 3);
  int essay_sum = 0;
  for (std::size_t i = 0; i < essays.size(); ++i) {
    CHECK(score.status == ScoreStatus::kPartial);
    int mark = essays[i]->max_marks / 2;
    essay_sum += mark;
    score = *record_essay_mark(score, exam, essays[i]->id, mark, "m");
  }
  CHECK(score.status == ScoreStatus::kFinal);
  CHECK(score.total == essay_sum);
  CHECK(score.essay_total() == essay_sum);
}

TEST_CASE("score json round trip") {
  auto exam = *load_exam_file(fixture_path("law/exam.json"));
  auto score = *grade_objective(empty_script(exam, "R"), exam);
  score = *record_essay_mark(score, exam, "q-review", 17, "marker-7");
  auto back = Score::from_json(score.to_json());
  REQUIRE(back.ok());
  CHECK(*back == score);
}

TEST_CASE("results csv") {
  std::mt19937_64 gen(3);
  auto exam = random_exam(gen, {.objective = 2}, "CSV");
  AnswerScript s = empty_script(exam, "REG9");
  answer(s, "q1", exam.questions()[0].correct_option);
  auto csv = results_to_csv({*grade_objective(s, exam)});
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == kResultCsvHeader);
  CHECK(row == "REG9,RND101,1,0,1,2,final");
}

TEST_CASE("scratch cards: issuance") {
  auto roster = make_roster(3, "RND101");
  std::mt19937_64 gen(4);
  auto exam = random_exam(gen, {.objective = 2}, "E");
  ResultsDesk desk(roster);
  Sitting st = sitting_for(roster, "E");
  SeededRandom rng(1);
  CHECK(desk.issue_scratch_card(roster[0].reg_no, st, rng).code() == ErrorCode::kNoScriptOnRecord);
  desk.put_score(*grade_objective(empty_script(exam, roster[0].reg_no), exam));
  auto card = desk.issue_scratch_card(roster[0].reg_no, st, rng);
  REQUIRE(card.ok());
  CHECK(card->pin.size() == 12);
  CHECK(std::all_of(card->pin.begin(), card->pin.end(), [](char c) { return c >= '0' && c <= '9'; }));
  CHECK(card->card.release_time == at("2026-11-03T10:30:00Z"));
  CHECK(card->card.pin_hash == hash_pin(card->card.salt, card->pin));
  CHECK(card->card.to_json().dump().find(card->pin) == std::string::npos);
  CHECK(desk.issue_scratch_card(roster[0].reg_no, st, rng).code() == ErrorCode::kCardAlreadyIssued);

  REQUIRE(desk.void_card(card->card.card_id).ok());
  CHECK(desk.issue_scratch_card(roster[0].reg_no, st, rng).ok());
  CHECK(desk.void_card("missing").code() == ErrorCode::kNotFound);

  auto back = ScratchCard::from_json(card->card.to_json());
  REQUIRE(back.ok());
  CHECK(back->pin_hash == card->card.pin_hash);
  CHECK(back->release_time == card->card.release_time);
}

TEST_CASE("scratch cards: 10^4 distinct PINs") {
  const int n = 10000;
  auto roster = make_roster(n, "RND101");
  std::mt19937_64 gen(6);
  auto exam = random_exam(gen, {.objective = 1}, "E");
  ResultsDesk desk(roster);
  Sitting st = sitting_for(roster, "E");
  for (const auto& c : roster) desk.put_score(*grade_objective(empty_script(exam, c.reg_no), exam));
  std::set<std::string> pins;
  for (const auto& c : roster) {
    auto card = desk.issue_scratch_card(c.reg_no, st, system_random());
    REQUIRE(card.ok());
    pins.insert(card->pin);
  }
  CHECK(pins.size() == static_cast<std::size_t>(n));
}

TEST_CASE("result check order of refusals") {
  auto roster = make_roster(2, "RND101");
  auto exam = *load_exam_file(fixture_path("tennis/exam.json"));
  ResultsDesk desk(roster);
  Sitting st = sitting_for(roster, exam.exam_id());
  const auto& a = roster[0];
  desk.put_score(*grade_objective(empty_script(exam, a.reg_no), exam));
  SeededRandom rng(9);
  auto card = *desk.issue_scratch_card(a.reg_no, st, rng);
  Timestamp release = card.card.release_time;
  CHECK(release == st.end_time() + Hours(24));

  CHECK(desk.check_result(a.reg_no, roster[1].identity_no, card.pin, release).code() ==
        ErrorCode::kBadCredentials);
  CHECK(desk.check_result("NOPE", a.identity_no, card.pin, release).code() == ErrorCode::kBadCredentials);
  std::string wrong = card.pin;
  wrong[0] = wrong[0] == '9' ? '0' : static_cast<char>(wrong[0] + 1);
  CHECK(desk.check_result(a.reg_no, a.identity_no, wrong, release).code() == ErrorCode::kBadPin);
  auto early = desk.check_result(a.reg_no, a.identity_no, card.pin, release - Hours(1));
  CHECK(early.code() == ErrorCode::kEmbargoActive);
  CHECK(early.error().details["release_time"] == to_unix(release));
  CHECK(desk.check_result(a.reg_no, a.identity_no, card.pin, release).code() ==
        ErrorCode::kResultNotFinal);
  // Refusals above did not consume the card.
  REQUIRE(desk.record_essay_mark(a.reg_no, exam, "q-tennis", 6, "m").ok());
  auto ok = desk.check_result(a.reg_no, a.identity_no, card.pin, release);
  REQUIRE(ok.ok());
  CHECK(ok->total == 6);
  CHECK(desk.check_result(a.reg_no, a.identity_no, card.pin, release + Hours(1)).code() ==
        ErrorCode::kCardUsed);
  CHECK(desk.record_essay_mark(roster[1].reg_no, exam, "q-tennis", 1, "m").code() ==
        ErrorCode::kNoScriptOnRecord);
}

TEST_CASE("a card is consumed by exactly one of 100 concurrent checks") {
  auto roster = make_roster(1, "RND101");
  std::mt19937_64 gen(10);
  auto exam = random_exam(gen, {.objective = 3}, "E");
  ResultsDesk desk(roster);
  Sitting st = sitting_for(roster, "E");
  desk.put_score(*grade_objective(empty_script(exam, roster[0].reg_no), exam));
  auto card = *desk.issue_scratch_card(roster[0].reg_no, st, system_random());
  Timestamp when = card.card.release_time + Minutes(1);
  std::atomic<int> ok{0}, used{0}, other{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 100; ++i) {
    threads.emplace_back([&] {
      auto r = desk.check_result(roster[0].reg_no, roster[0].identity_no, card.pin, when);
      if (r.ok()) {
        ++ok;
      } else if (r.code() == ErrorCode::kCardUsed) {
        ++used;
      } else {
        ++other;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok == 1);
  CHECK(used == 99);
  CHECK(other == 0);
}

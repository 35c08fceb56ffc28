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


#include <atomic>
#include <set>
#include <thread>

#include "doctest.h"
#include "securexam/session/engine.hpp"
#include "test_support.hpp"

using namespace securexam;
using namespace securexam::testing;

namespace {

const Digest256 kEnv = sha256("sanctioned client");
const Timestamp kStart = at("2026-11-02T10:00:00Z");

LockdownReport good_report() {
  LockdownReport r;
  r.communications_disabled = true;
  r.external_storage_blocked = true;
  r.environment_digest = kEnv;
  return r;
}

struct Fixture {
  std::shared_ptr<const ValidatedExam> exam;
  std::vector<CandidateRecord> roster;
  Schedule schedule;
  std::unique_ptr<SessionEngine> engine;

  explicit Fixture(int candidates = 10, int questions = 20, std::uint64_t seed = 7) {
    std::mt19937_64 gen(seed);
    exam = std::make_shared<const ValidatedExam>(
        random_exam(gen, {.objective = questions}, "EXAM-1"));
    roster = make_roster(candidates, "RND101");
    PlanOptions o;
    o.capacity = candidates;
    o.first_start = kStart;
    schedule = *plan_sittings(roster, "EXAM-1", o);
    engine = std::make_unique<SessionEngine>(roster, schedule);
    REQUIRE(engine->open_sitting(sitting_id(), exam, kEnv).ok());
  }

  std::string sitting_id() const { return schedule.sittings[0].sitting_id; }

  std::string start(int i, Timestamp now = kStart) {
    const auto& c = roster[static_cast<std::size_t>(i)];
    auto tok = engine->authenticate(c.reg_no, c.identity_no, sitting_id(), now - Minutes(5));
    REQUIRE(tok.ok());
    auto v = engine->begin_exam(tok->value, good_report(), now);
    REQUIRE(v.ok());
    return tok->value;
  }

  // Presented label that maps to `canonical` for this session.
  std::string shown(const std::string& token, const std::string& qid, const std::string& canonical) {
    auto order = engine->presentation(token);
    auto qi = exam->question_index(qid);
    return *shown_label(*exam, *order, *qi, canonical);
  }
};

}  // namespace

TEST_CASE("authentication checks the identity pair and assignment") {
  Fixture f;
  const auto& a = f.roster[0];
  const auto& b = f.roster[1];
  Timestamp t = kStart - Minutes(10);
  auto tok = f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), t);
  REQUIRE(tok.ok());
  CHECK(tok->value.size() == 64);
  CHECK(tok->reg_no == a.reg_no);

  CHECK(f.engine->authenticate(a.reg_no, b.identity_no, f.sitting_id(), t).code() ==
        ErrorCode::kWrongIdentityNumber);
  CHECK(f.engine->authenticate("NOBODY", a.identity_no, f.sitting_id(), t).code() ==
        ErrorCode::kUnknownCandidate);
  CHECK(f.engine->authenticate(a.reg_no, a.identity_no, "nope", t).code() ==
        ErrorCode::kUnknownSitting);

  auto again = f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), t + Minutes(1));
  REQUIRE(again.ok());
  CHECK(again->value == tok->value);
  CHECK(f.engine->session_count() == 1);
}

TEST_CASE("admission window") {
  Fixture f;
  const auto& a = f.roster[0];
  CHECK(f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), kStart - Minutes(31))
            .code() == ErrorCode::kOutsideAdmissionWindow);
  CHECK(f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), kStart - Minutes(30)).ok());
  const auto& b = f.roster[1];
  Timestamp end = f.schedule.sittings[0].end_time();
  CHECK(f.engine->authenticate(b.reg_no, b.identity_no, f.sitting_id(), end).code() ==
        ErrorCode::kOutsideAdmissionWindow);
  CHECK(f.engine->authenticate(b.reg_no, b.identity_no, f.sitting_id(), end - Seconds(1)).ok());
}

TEST_CASE("candidates are bound to their sitting") {
  auto roster = make_roster(4, "C");
  PlanOptions o;
  o.capacity = 2;
  o.sittings_per_day = 2;
  o.first_start = kStart;
  auto schedule = *plan_sittings(roster, "E", o);
  REQUIRE(schedule.sittings.size() == 2);
  SessionEngine engine(roster, schedule);
  const auto& c = roster[3];
  CHECK(engine.authenticate(c.reg_no, c.identity_no, schedule.sittings[0].sitting_id, kStart)
            .code() == ErrorCode::kNotAssignedToSitting);
}

TEST_CASE("begin sets a thirty minute deadline") {
  Fixture f;
  const auto& a = f.roster[0];
  auto tok = f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), kStart);
  REQUIRE(tok.ok());
  auto v = f.engine->begin_exam(tok->value, good_report(), kStart);
  REQUIRE(v.ok());
  CHECK(v->state == SessionState::kActive);
  CHECK(*v->started_at == at("2026-11-02T10:00:00Z"));
  CHECK(*v->deadline == at("2026-11-02T10:30:00Z"));

  auto twice = f.engine->begin_exam(tok->value, good_report(), kStart + Minutes(3));
  CHECK(twice.code() == ErrorCode::kAlreadyStarted);
  CHECK(*f.engine->view(tok->value, kStart + Minutes(3))->deadline == at("2026-11-02T10:30:00Z"));
  CHECK(f.engine->begin_exam("feed", good_report(), kStart).code() == ErrorCode::kUnknownToken);
}

TEST_CASE("failing lockdown keeps the session pending") {
  Fixture f;
  const auto& a = f.roster[0];
  auto tok = f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), kStart);
  LockdownReport bad = good_report();
  bad.communications_disabled = false;
  auto v = f.engine->begin_exam(tok->value, bad, kStart);
  REQUIRE_FALSE(v.ok());
  CHECK(v.code() == ErrorCode::kLockdownRejected);
  CHECK(v.error().details["violations"] == nlohmann::json::array({"communications"}));
  CHECK(f.engine->view(tok->value, kStart)->state == SessionState::kLockdownPending);
  // A later clean report admits.
  CHECK(f.engine->begin_exam(tok->value, good_report(), kStart + Minutes(1)).ok());
}

TEST_CASE("unopened sitting refuses to start") {
  std::mt19937_64 gen(1);
  auto roster = make_roster(2, "C");
  PlanOptions o;
  o.capacity = 2;
  o.sittings_per_day = 2;
  o.first_start = kStart;
  auto schedule = *plan_sittings(roster, "E", o);
  SessionEngine engine(roster, schedule);
  auto tok = engine.authenticate(roster[0].reg_no, roster[0].identity_no,
                                 schedule.sittings[0].sitting_id, kStart);
  REQUIRE(tok.ok());
  CHECK(engine.begin_exam(tok->value, good_report(), kStart).code() == ErrorCode::kSittingNotOpen);
  auto other = std::make_shared<const ValidatedExam>(random_exam(gen, {.objective = 1}, "OTHER"));
  CHECK(engine.open_sitting(schedule.sittings[0].sitting_id, other, kEnv).code() ==
        ErrorCode::kExamMismatch);
}

TEST_CASE("answers: free order, last write wins, label mapping") {
  Fixture f;
  std::string tok = f.start(0);
  CHECK(f.engine->record_answer(tok, "q7", f.shown(tok, "q7", f.exam->questions()[6].options[0].label),
                                kStart + Minutes(1)).ok());
  CHECK(f.engine->record_answer(tok, "q1", "A", kStart + Minutes(2)).ok());
  REQUIRE(f.engine->record_answer(tok, "q1", "A", kStart + Minutes(3)).ok());
  auto last = f.engine->record_answer(tok, "q1", "B", kStart + Minutes(4));
  REQUIRE(last.ok());
  auto order = *f.engine->presentation(tok);
  CHECK(last->stored_value == *canonical_label(*f.exam, order, 0, "B"));

  auto script = f.engine->submit(tok, kStart + Minutes(5));
  REQUIRE(script.ok());
  CHECK(script->answers["q1"]->value == last->stored_value);
  CHECK(script->answers["q7"]->value == f.exam->questions()[6].options[0].label);
}

TEST_CASE("answer validation") {
  Fixture f;
  const auto& a = f.roster[0];
  auto pending = f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), kStart);
  CHECK(f.engine->record_answer(pending->value, "q1", "A", kStart).code() ==
        ErrorCode::kSessionNotActive);
  std::string tok = f.start(1);
  CHECK(f.engine->record_answer(tok, "q99", "A", kStart).code() == ErrorCode::kUnknownQuestion);
  CHECK(f.engine->record_answer(tok, "q1", "Z", kStart).code() == ErrorCode::kMalformedAnswer);
  CHECK(f.engine->record_answer(tok, "q1", "a", kStart).code() == ErrorCode::kMalformedAnswer);
}

TEST_CASE("a write at the exact deadline is refused and absent") {
  Fixture f;
  std::string tok = f.start(0);
  Timestamp deadline = kStart + Minutes(30);
  REQUIRE(f.engine->record_answer(tok, "q2", "A", deadline - Seconds(1)).ok());
  auto late = f.engine->record_answer(tok, "q3", "A", deadline);
  CHECK(late.code() == ErrorCode::kPastDeadline);
  auto script = f.engine->script_for(f.roster[0].reg_no, "EXAM-1");
  REQUIRE(script.has_value());
  CHECK(script->termination == Termination::kAutoExpired);
  CHECK(script->answers["q2"].has_value());
  CHECK_FALSE(script->answers["q3"].has_value());
  CHECK(script->submitted_at == deadline);
  CHECK(f.engine->view(tok, deadline)->state == SessionState::kExpired);
}

TEST_CASE("submit semantics") {
  Fixture f;
  std::string tok = f.start(0);
  for (int q = 1; q <= 10; ++q) {
    REQUIRE(f.engine->record_answer(tok, "q" + std::to_string(q), "A", kStart + Minutes(1)).ok());
  }
  auto script = f.engine->submit(tok, kStart + Minutes(30) - Seconds(1));
  REQUIRE(script.ok());
  CHECK(script->termination == Termination::kCandidateSubmitted);
  CHECK(script->answered_count() == 10);
  CHECK(script->blank_count() == 10);
  CHECK(script->answers.size() == 20);
  CHECK(f.engine->submit(tok, kStart + Minutes(10)).code() == ErrorCode::kSessionNotActive);

  std::string tok2 = f.start(1);
  CHECK(f.engine->submit(tok2, kStart + Minutes(30)).code() == ErrorCode::kPastDeadline);
  CHECK(f.engine->script_for(f.roster[1].reg_no, "EXAM-1")->termination ==
        Termination::kAutoExpired);

  const auto& a = f.roster[0];
  CHECK(f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), kStart + Minutes(11))
            .code() == ErrorCode::kAlreadyCompleted);
  CHECK(f.engine->begin_exam(tok, good_report(), kStart + Minutes(11)).code() ==
        ErrorCode::kTokenExpired);
}

TEST_CASE("expiry sweep boundary pair") {
  Fixture f;
  std::string tok = f.start(0);
  CHECK(f.engine->expire_due_sessions(at("2026-11-02T10:29:59Z")).empty());
  CHECK(f.engine->view(tok, at("2026-11-02T10:29:59Z"))->state == SessionState::kActive);
  auto due = f.engine->expire_due_sessions(at("2026-11-02T10:30:00Z"));
  REQUIRE(due.size() == 1);
  CHECK(due[0].termination == Termination::kAutoExpired);
  CHECK(f.engine->expire_due_sessions(at("2026-11-02T11:00:00Z")).empty());
}

TEST_CASE("resume after disconnection") {
  Fixture f;
  std::string tok = f.start(0);
  REQUIRE(f.engine->record_answer(tok, "q4", "B", kStart + Minutes(2)).ok());
  const auto& a = f.roster[0];
  auto again = f.engine->authenticate(a.reg_no, a.identity_no, f.sitting_id(), kStart + Minutes(20));
  REQUIRE(again.ok());
  CHECK(again->value == tok);
  CHECK(f.engine->view(tok, kStart + Minutes(20))->answers.contains("q4"));
  auto paper = f.engine->paper(tok, kStart + Minutes(20));
  REQUIRE(paper.ok());
  CHECK((*paper)["answers"]["q4"] == "B");
  CHECK((*paper)["deadline"] == to_unix(kStart + Minutes(30)));
  CHECK(paper->dump().find("correct_option") == std::string::npos);
}

TEST_CASE("listener sees each script exactly once") {
  Fixture f(6);
  std::atomic<int> calls{0};
  f.engine->set_script_listener([&](const AnswerScript&) { ++calls; });
  std::vector<std::string> toks;
  for (int i = 0; i < 6; ++i) toks.push_back(f.start(i));
  CHECK(f.engine->submit(toks[0], kStart + Minutes(1)).ok());
  CHECK(f.engine->record_answer(toks[1], "q1", "A", kStart + Minutes(31)).code() == ErrorCode::kPastDeadline);
  f.engine->expire_due_sessions(kStart + Minutes(40));
  f.engine->expire_due_sessions(kStart + Minutes(50));
  CHECK(calls == 6);
  CHECK(f.engine->scripts().size() == 6);
}

TEST_CASE("monotone safety under random interleavings") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 40; ++trial) {
    Fixture f(8, 6, gen());
    std::vector<std::string> toks;
    for (int i = 0; i < 8; ++i) {
      toks.push_back(f.start(i, kStart + Seconds(static_cast<int>(gen() % 120))));
    }
    Timestamp now = kStart + Minutes(2);
    for (int step = 0; step < 400; ++step) {
      now += Seconds(static_cast<int>(gen() % 15));
      const std::string& tok = toks[gen() % toks.size()];
      switch (gen() % 10) {
        case 0:
          (void)f.engine->submit(tok, now);
          break;
        case 1:
          f.engine->expire_due_sessions(now);
          break;
        default:
          (void)f.engine->record_answer(tok, "q" + std::to_string(1 + gen() % 6), "A", now);
      }
    }
    f.engine->expire_due_sessions(now + Hours(1));
    auto scripts = f.engine->scripts();
    CHECK(scripts.size() == 8);
    std::set<std::string> owners;
    for (const auto& s : scripts) {
      owners.insert(s.reg_no);
      CHECK(s.submitted_at <= s.deadline);
      for (const auto& [qid, ans] : s.answers) {
        if (ans) CHECK(ans->written_at < s.deadline);
      }
    }
    CHECK(owners.size() == 8);
    for (const auto& t : f.engine->transitions()) CHECK(is_allowed_transition(t.from, t.to));
  }
}

TEST_CASE("concurrent submit and expiry yield one script per session") {
  Fixture f(200, 5);
  std::vector<std::string> toks;
  for (int i = 0; i < 200; ++i) toks.push_back(f.start(i));
  Timestamp deadline = kStart + Minutes(30);
  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < toks.size(); i += 4) {
        (void)f.engine->record_answer(toks[i], "q1", "A", deadline - Seconds(1));
        (void)f.engine->submit(toks[i], i % 2 ? deadline - Seconds(1) : deadline);
      }
    });
  }
  threads.emplace_back([&] {
    for (int k = 0; k < 50; ++k) f.engine->expire_due_sessions(deadline);
  });
  for (auto& t : threads) t.join();
  auto scripts = f.engine->scripts();
  CHECK(scripts.size() == 200);
  std::set<std::string> owners;
  for (const auto& s : scripts) owners.insert(s.reg_no);
  CHECK(owners.size() == 200);
}

TEST_CASE("state machine edges") {
  using S = SessionState;
  const S all[] = {S::kAuthenticated, S::kLockdownPending, S::kActive, S::kSubmitted, S::kExpired};
  int allowed = 0;
  for (S a : all) {
    for (S b : all) allowed += is_allowed_transition(a, b);
  }
  CHECK(allowed == 4);
  CHECK(is_allowed_transition(S::kAuthenticated, S::kLockdownPending));
  CHECK(is_allowed_transition(S::kLockdownPending, S::kActive));
  CHECK(is_allowed_transition(S::kActive, S::kSubmitted));
  CHECK(is_allowed_transition(S::kActive, S::kExpired));
  CHECK(to_string(S::kLockdownPending) == "lockdown-pending");
}

TEST_CASE("no duplicate tokens across 10^5 issuances") {
  const int n = 100000;
  auto roster = make_roster(n, "BIG");
  PlanOptions o;
  o.capacity = n;
  o.first_start = kStart;
  auto schedule = *plan_sittings(roster, "E", o);
  SessionEngine engine(roster, schedule);
  std::set<std::string> tokens;
  for (const auto& c : roster) {
    auto t = engine.authenticate(c.reg_no, c.identity_no, schedule.sittings[0].sitting_id, kStart);
    REQUIRE(t.ok());
    tokens.insert(t->value);
  }
  CHECK(tokens.size() == static_cast<std::size_t>(n));
}

TEST_CASE("script json round trip") {
  Fixture f;
  std::string tok = f.start(0);
  REQUIRE(f.engine->record_answer(tok, "q2", "A", kStart + Minutes(1)).ok());
  auto script = f.engine->submit(tok, kStart + Minutes(2));
  REQUIRE(script.ok());
  auto back = AnswerScript::from_json(script->to_json());
  REQUIRE(back.ok());
  CHECK(back->answers == script->answers);
  CHECK(back->deadline == script->deadline);
  CHECK(back->termination == script->termination);
}

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

#include "securexam/session/engine.hpp"

#include <algorithm>

namespace securexam {

using nlohmann::json;

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::kAuthenticated: return "authenticated";
    case SessionState::kLockdownPending: return "lockdown-pending";
    case SessionState::kActive: return "active";
    case SessionState::kSubmitted: return "submitted";
    case SessionState::kExpired: return "expired";
  }
  return "authenticated";
}

std::string_view to_string(Termination t) {
  return t == Termination::kAutoExpired ? "auto-expired" : "candidate-submitted";
}

bool is_allowed_transition(SessionState from, SessionState to) {
  using S = SessionState;
  return (from == S::kAuthenticated && to == S::kLockdownPending) ||
         (from == S::kLockdownPending && to == S::kActive) ||
         (from == S::kActive && to == S::kSubmitted) ||
         (from == S::kActive && to == S::kExpired);
}

std::size_t AnswerScript::answered_count() const {
  return static_cast<std::size_t>(std::count_if(
      answers.begin(), answers.end(), [](const auto& kv) { return kv.second.has_value(); }));
}

std::size_t AnswerScript::blank_count() const { return answers.size() - answered_count(); }

json AnswerScript::to_json() const {
  json a = json::object();
  for (const auto& [qid, ans] : answers) {
    if (ans) {
      a[qid] = {{"value", ans->value}, {"written_at", to_unix(ans->written_at)}};
    } else {
      a[qid] = nullptr;
    }
  }
  return {{"reg_no", reg_no},
          {"exam_id", exam_id},
          {"sitting_id", sitting_id},
          {"answers", std::move(a)},
          {"submitted_at", to_unix(submitted_at)},
          {"deadline", to_unix(deadline)},
          {"termination", std::string(to_string(termination))}};
}

Result<AnswerScript> AnswerScript::from_json(const json& j) {
  AnswerScript s;
  try {
    s.reg_no = j.at("reg_no").get<std::string>();
    s.exam_id = j.at("exam_id").get<std::string>();
    s.sitting_id = j.at("sitting_id").get<std::string>();
    s.submitted_at = from_unix(j.at("submitted_at").get<std::int64_t>());
    s.deadline = from_unix(j.at("deadline").get<std::int64_t>());
    s.termination = j.at("termination").get<std::string>() == "auto-expired"
                        ? Termination::kAutoExpired
                        : Termination::kCandidateSubmitted;
    for (const auto& [qid, v] : j.at("answers").items()) {
      if (v.is_null()) {
        s.answers[qid] = std::nullopt;
      } else {
        s.answers[qid] = RecordedAnswer{v.at("value").get<std::string>(),
                                        from_unix(v.at("written_at").get<std::int64_t>())};
      }
    }
  } catch (const json::exception& e) {
    return Error(ErrorCode::kMalformedRequest, std::string("answer script: ") + e.what());
  }
  return s;
}

SessionEngine::SessionEngine(std::vector<CandidateRecord> roster, Schedule schedule,
                             SessionEngineConfig config, RandomSource* rng)
    : config_(config), rng_(rng ? rng : &system_random()), schedule_(std::move(schedule)) {
  for (auto& c : roster) {
    std::string key = c.reg_no;
    roster_.emplace(std::move(key), std::move(c));
  }
  for (const auto& s : schedule_.sittings) {
    assignments_[s.sitting_id].insert(s.assigned.begin(), s.assigned.end());
  }
}

Status SessionEngine::open_sitting(std::string_view sitting_id,
                                   std::shared_ptr<const ValidatedExam> exam,
                                   const Digest256& expected_environment) {
  const Sitting* s = sitting(sitting_id);
  if (!s) return {ErrorCode::kUnknownSitting, std::string(sitting_id)};
  if (!exam || exam->exam_id() != s->exam_id) {
    return {ErrorCode::kExamMismatch, "sitting " + s->sitting_id + " expects exam " + s->exam_id};
  }
  std::unique_lock lock(sittings_mu_);
  open_[std::string(sitting_id)] = OpenSitting{std::move(exam), expected_environment};
  return {};
}

bool SessionEngine::is_open(std::string_view sitting_id) const {
  std::shared_lock lock(sittings_mu_);
  return open_.find(sitting_id) != open_.end();
}

std::shared_ptr<const ValidatedExam> SessionEngine::exam_for(std::string_view sitting_id) const {
  std::shared_lock lock(sittings_mu_);
  auto it = open_.find(sitting_id);
  return it == open_.end() ? nullptr : it->second.exam;
}

const Sitting* SessionEngine::sitting(std::string_view sitting_id) const {
  return schedule_.find(sitting_id);
}

const CandidateRecord* SessionEngine::candidate(std::string_view reg_no) const {
  auto it = roster_.find(reg_no);
  return it == roster_.end() ? nullptr : &it->second;
}

std::shared_ptr<SessionEngine::Slot> SessionEngine::find_slot(std::string_view token) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(std::string(token));
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionEngine::move_to(Live& s, SessionState to, Timestamp at) {
  Transition t{s.token.reg_no, s.token.sitting_id, s.state, to, at};
  s.state = to;
  std::lock_guard lock(scripts_mu_);
  transitions_.push_back(std::move(t));
}

AnswerScript SessionEngine::finalize(Live& s, Termination how, Timestamp at) {
  AnswerScript script;
  script.reg_no = s.token.reg_no;
  script.exam_id = s.exam_id;
  script.sitting_id = s.token.sitting_id;
  script.deadline = *s.deadline;
  script.termination = how;
  script.submitted_at = how == Termination::kAutoExpired ? *s.deadline : at;
  for (const auto& q : s.exam->questions()) {
    auto it = s.answers.find(q.id);
    if (it != s.answers.end() && it->second.written_at < *s.deadline) {
      script.answers[q.id] = it->second;
    } else {
      script.answers[q.id] = std::nullopt;
    }
  }
  move_to(s, how == Termination::kAutoExpired ? SessionState::kExpired : SessionState::kSubmitted,
          script.submitted_at);
  std::lock_guard lock(scripts_mu_);
  scripts_.push_back(script);
  return script;
}

std::optional<AnswerScript> SessionEngine::expire_if_due(Live& s, Timestamp now) {
  if (s.state != SessionState::kActive || now < *s.deadline) return std::nullopt;
  return finalize(s, Termination::kAutoExpired, now);
}

void SessionEngine::publish(const std::vector<AnswerScript>& emitted) {
  if (emitted.empty()) return;
  ScriptListener listener;
  {
    std::lock_guard lock(scripts_mu_);
    listener = listener_;
  }
  if (!listener) return;
  for (const auto& s : emitted) listener(s);
}

SessionView SessionEngine::make_view(const Live& s) {
  return {s.token.value, s.token.reg_no, s.token.sitting_id, s.exam_id, s.state,
          s.started_at,  s.deadline,     s.answers};
}

Result<SessionToken> SessionEngine::authenticate(std::string_view reg_no,
                                                 std::string_view identity_no,
                                                 std::string_view sitting_id, Timestamp now) {
  const Sitting* sit = sitting(sitting_id);
  if (!sit) return Error(ErrorCode::kUnknownSitting, std::string(sitting_id));
  const CandidateRecord* cand = candidate(reg_no);
  if (!cand) return Error(ErrorCode::kUnknownCandidate, "no candidate " + std::string(reg_no));
  if (cand->identity_no != identity_no) {
    return Error(ErrorCode::kWrongIdentityNumber, "identity number does not match " + cand->reg_no);
  }
  auto assigned = assignments_.find(sitting_id);
  if (assigned == assignments_.end() || !assigned->second.contains(reg_no)) {
    return Error(ErrorCode::kNotAssignedToSitting,
                 cand->reg_no + " is not assigned to " + sit->sitting_id);
  }
  const bool in_window =
      now >= sit->start_time - config_.admission_lead && now < sit->end_time();
  const auto key = std::make_pair(std::string(reg_no), std::string(sitting_id));

  auto resume = [&](Slot& slot) -> Result<SessionToken> {
    std::vector<AnswerScript> emitted;
    Result<SessionToken> out = Error(ErrorCode::kInternal);
    {
      std::lock_guard lock(slot.mu);
      Live& s = slot.live;
      if (auto script = expire_if_due(s, now)) emitted.push_back(std::move(*script));
      switch (s.state) {
        case SessionState::kSubmitted:
        case SessionState::kExpired:
          out = Error(ErrorCode::kAlreadyCompleted, s.token.reg_no + " already finished " + s.token.sitting_id);
          break;
        case SessionState::kActive:
          out = s.token;
          break;
        default:
          if (!in_window) {
            out = Error(ErrorCode::kOutsideAdmissionWindow, "sitting " + sit->sitting_id + " is not admitting");
          } else {
            out = s.token;
          }
      }
    }
    publish(emitted);
    return out;
  };

  std::shared_ptr<Slot> existing;
  {
    std::shared_lock lock(sessions_mu_);
    if (auto it = by_candidate_.find(key); it != by_candidate_.end()) existing = sessions_.at(it->second);
  }
  if (existing) return resume(*existing);
  if (!in_window) {
    return Error(ErrorCode::kOutsideAdmissionWindow, "sitting " + sit->sitting_id + " is not admitting");
  }

  std::unique_lock lock(sessions_mu_);
  if (auto it = by_candidate_.find(key); it != by_candidate_.end()) {
    existing = sessions_.at(it->second);
    lock.unlock();
    return resume(*existing);
  }
  auto slot = std::make_shared<Slot>();
  Live& s = slot->live;
  do {
    Bytes raw = rng_->bytes(32);
    s.token.value = to_hex(raw);
  } while (sessions_.contains(s.token.value));
  s.token.reg_no = std::string(reg_no);
  s.token.sitting_id = std::string(sitting_id);
  s.token.issued_at = now;
  s.exam_id = sit->exam_id;
  s.state = SessionState::kAuthenticated;
  sessions_.emplace(s.token.value, slot);
  by_candidate_.emplace(key, s.token.value);
  return s.token;
}

Result<SessionView> SessionEngine::begin_exam(std::string_view token, const LockdownReport& report,
                                              Timestamp now) {
  auto slot = find_slot(token);
  if (!slot) return Error(ErrorCode::kUnknownToken, "unknown session token");

  std::vector<AnswerScript> emitted;
  Result<SessionView> out = Error(ErrorCode::kInternal);
  {
    std::lock_guard lock(slot->mu);
    Live& s = slot->live;
    if (auto script = expire_if_due(s, now)) emitted.push_back(std::move(*script));

    if (s.state == SessionState::kActive) {
      out = Error(ErrorCode::kAlreadyStarted, "session already active");
    } else if (s.state == SessionState::kSubmitted || s.state == SessionState::kExpired) {
      out = Error(ErrorCode::kTokenExpired, "session is finished");
    } else {
      const Sitting* sit = sitting(s.token.sitting_id);
      std::optional<OpenSitting> open;
      {
        std::shared_lock slock(sittings_mu_);
        if (auto it = open_.find(s.token.sitting_id); it != open_.end()) open = it->second;
      }
      if (!open) {
        out = Error(ErrorCode::kSittingNotOpen, "sitting " + s.token.sitting_id + " has not been opened");
      } else if (now >= sit->end_time()) {
        out = Error(ErrorCode::kOutsideAdmissionWindow, "sitting " + sit->sitting_id + " has ended");
      } else {
        if (s.state == SessionState::kAuthenticated) move_to(s, SessionState::kLockdownPending, now);
        LockdownVerdict verdict = verify_lockdown(report, open->expected_environment);
        if (!verdict.passed) {
          std::string reasons;
          for (const auto& v : verdict.violations) reasons += (reasons.empty() ? "" : ", ") + v;
          out = Error(ErrorCode::kLockdownRejected, "lockdown violations: " + reasons)
                    .with_details({{"violations", verdict.violations}});
        } else {
          s.exam = open->exam;
          s.order = derive_presentation(*s.exam, s.token.value);
          s.started_at = now;
          s.deadline = now + Minutes(s.exam->duration_minutes());
          move_to(s, SessionState::kActive, now);
          out = make_view(s);
        }
      }
    }
  }
  publish(emitted);
  return out;
}

Result<AnswerAck> SessionEngine::record_answer(std::string_view token,
                                               std::string_view question_id,
                                               std::string_view value, Timestamp now) {
  auto slot = find_slot(token);
  if (!slot) return Error(ErrorCode::kUnknownToken, "unknown session token");

  std::vector<AnswerScript> emitted;
  Result<AnswerAck> out = Error(ErrorCode::kInternal);
  {
    std::lock_guard lock(slot->mu);
    Live& s = slot->live;
    if (s.state != SessionState::kActive) {
      out = Error(ErrorCode::kSessionNotActive, std::string("session is ") + std::string(to_string(s.state)));
    } else if (auto script = expire_if_due(s, now)) {
      emitted.push_back(std::move(*script));
      out = Error(ErrorCode::kPastDeadline, "deadline was " + to_iso8601(*s.deadline));
    } else if (auto qi = s.exam->question_index(question_id); !qi) {
      out = Error(ErrorCode::kUnknownQuestion, "no question " + std::string(question_id));
    } else {
      const Question& q = s.exam->questions()[*qi];
      std::optional<std::string> stored;
      if (q.is_objective()) {
        stored = canonical_label(*s.exam, s.order, *qi, value);
      } else {
        stored = std::string(value);
      }
      if (!stored) {
        out = Error(ErrorCode::kMalformedAnswer,
                    "'" + std::string(value) + "' is not an option of " + q.id);
      } else {
        s.answers[q.id] = RecordedAnswer{*stored, now};
        out = AnswerAck{q.id, *stored, now, *s.deadline};
      }
    }
  }
  publish(emitted);
  return out;
}

Result<AnswerScript> SessionEngine::submit(std::string_view token, Timestamp now) {
  auto slot = find_slot(token);
  if (!slot) return Error(ErrorCode::kUnknownToken, "unknown session token");

  std::vector<AnswerScript> emitted;
  Result<AnswerScript> out = Error(ErrorCode::kInternal);
  {
    std::lock_guard lock(slot->mu);
    Live& s = slot->live;
    if (s.state != SessionState::kActive) {
      out = Error(ErrorCode::kSessionNotActive, std::string("session is ") + std::string(to_string(s.state)));
    } else if (auto script = expire_if_due(s, now)) {
      emitted.push_back(std::move(*script));
      out = Error(ErrorCode::kPastDeadline, "deadline was " + to_iso8601(*s.deadline));
    } else {
      emitted.push_back(finalize(s, Termination::kCandidateSubmitted, now));
      out = emitted.back();
    }
  }
  publish(emitted);
  return out;
}

std::vector<AnswerScript> SessionEngine::expire_due_sessions(Timestamp now) {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::shared_lock lock(sessions_mu_);
    slots.reserve(sessions_.size());
    for (const auto& [_, slot] : sessions_) slots.push_back(slot);
  }
  std::vector<AnswerScript> emitted;
  for (const auto& slot : slots) {
    std::lock_guard lock(slot->mu);
    if (auto script = expire_if_due(slot->live, now)) emitted.push_back(std::move(*script));
  }
  publish(emitted);
  return emitted;
}

std::optional<SessionToken> SessionEngine::token_info(std::string_view token) const {
  auto slot = find_slot(token);
  if (!slot) return std::nullopt;
  std::lock_guard lock(slot->mu);
  return slot->live.token;
}

Result<SessionView> SessionEngine::view(std::string_view token, Timestamp now) {
  auto slot = find_slot(token);
  if (!slot) return Error(ErrorCode::kUnknownToken, "unknown session token");
  std::vector<AnswerScript> emitted;
  SessionView v;
  {
    std::lock_guard lock(slot->mu);
    if (auto script = expire_if_due(slot->live, now)) emitted.push_back(std::move(*script));
    v = make_view(slot->live);
  }
  publish(emitted);
  return v;
}

Result<json> SessionEngine::paper(std::string_view token, Timestamp now) {
  auto slot = find_slot(token);
  if (!slot) return Error(ErrorCode::kUnknownToken, "unknown session token");
  std::vector<AnswerScript> emitted;
  Result<json> out = Error(ErrorCode::kInternal);
  {
    std::lock_guard lock(slot->mu);
    Live& s = slot->live;
    if (auto script = expire_if_due(s, now)) emitted.push_back(std::move(*script));
    if (s.state != SessionState::kActive) {
      out = Error(ErrorCode::kSessionNotActive, std::string("session is ") + std::string(to_string(s.state)));
    } else {
      json p = render_paper(*s.exam, s.order);
      p["deadline"] = to_unix(*s.deadline);
      p["server_now"] = to_unix(now);
      json answered = json::object();
      for (const auto& [qid, ans] : s.answers) {
        auto qi = s.exam->question_index(qid);
        const Question& q = s.exam->questions()[*qi];
        answered[qid] = q.is_objective() ? *shown_label(*s.exam, s.order, *qi, ans.value) : ans.value;
      }
      p["answers"] = std::move(answered);
      out = std::move(p);
    }
  }
  publish(emitted);
  return out;
}

Result<PresentationOrder> SessionEngine::presentation(std::string_view token) const {
  auto slot = find_slot(token);
  if (!slot) return Error(ErrorCode::kUnknownToken, "unknown session token");
  std::lock_guard lock(slot->mu);
  if (!slot->live.exam) return Error(ErrorCode::kSessionNotActive, "session has not started");
  return slot->live.order;
}

std::vector<AnswerScript> SessionEngine::scripts() const {
  std::lock_guard lock(scripts_mu_);
  return scripts_;
}

std::optional<AnswerScript> SessionEngine::script_for(std::string_view reg_no,
                                                      std::string_view exam_id) const {
  std::lock_guard lock(scripts_mu_);
  for (const auto& s : scripts_) {
    if (s.reg_no == reg_no && s.exam_id == exam_id) return s;
  }
  return std::nullopt;
}

std::vector<Transition> SessionEngine::transitions() const {
  std::lock_guard lock(scripts_mu_);
  return transitions_;
}

std::map<SessionState, std::size_t> SessionEngine::state_counts(std::string_view sitting_id) const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::shared_lock lock(sessions_mu_);
    for (const auto& [_, slot] : sessions_) slots.push_back(slot);
  }
  std::map<SessionState, std::size_t> counts;
  for (const auto& slot : slots) {
    std::lock_guard lock(slot->mu);
    if (slot->live.token.sitting_id == sitting_id) ++counts[slot->live.state];
  }
  return counts;
}

std::size_t SessionEngine::session_count() const {
  std::shared_lock lock(sessions_mu_);
  return sessions_.size();
}

void SessionEngine::set_script_listener(ScriptListener listener) {
  std::lock_guard lock(scripts_mu_);
  listener_ = std::move(listener);
}

}  // namespace securexam

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

#ifndef SECUREXAM_SESSION_ENGINE_HPP_
#define SECUREXAM_SESSION_ENGINE_HPP_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "securexam/attestation/lockdown.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/random.hpp"
#include "securexam/core/time.hpp"
#include "securexam/exam/model.hpp"
#include "securexam/exam/presentation.hpp"
#include "securexam/scheduling/planner.hpp"
#include "securexam/scheduling/roster.hpp"

namespace securexam {

enum class SessionState { kAuthenticated, kLockdownPending, kActive, kSubmitted, kExpired };
enum class Termination { kCandidateSubmitted, kAutoExpired };

std::string_view to_string(SessionState s);
std::string_view to_string(Termination t);

// The only edges a session may take.
bool is_allowed_transition(SessionState from, SessionState to);

struct SessionToken {
  std::string value;  // 64 hex chars, 256 bits from the CSPRNG
  std::string reg_no;
  std::string sitting_id;
  Timestamp issued_at;
};

struct RecordedAnswer {
  std::string value;  // canonical option label, or essay text
  Timestamp written_at;
  friend bool operator==(const RecordedAnswer&, const RecordedAnswer&) = default;
};

// A frozen submission. Every question of the exam has an entry; blanks are
// nullopt.
struct AnswerScript {
  std::string reg_no;
  std::string exam_id;
  std::string sitting_id;
  std::map<std::string, std::optional<RecordedAnswer>> answers;
  Timestamp submitted_at;
  Timestamp deadline;
  Termination termination = Termination::kCandidateSubmitted;

  std::size_t answered_count() const;
  std::size_t blank_count() const;
  nlohmann::json to_json() const;
  static Result<AnswerScript> from_json(const nlohmann::json& j);
};

struct AnswerAck {
  std::string question_id;
  std::string stored_value;
  Timestamp written_at;
  Timestamp deadline;
};

struct SessionView {
  std::string token;
  std::string reg_no;
  std::string sitting_id;
  std::string exam_id;
  SessionState state = SessionState::kAuthenticated;
  std::optional<Timestamp> started_at;
  std::optional<Timestamp> deadline;
  std::map<std::string, RecordedAnswer> answers;
};

struct Transition {
  std::string reg_no;
  std::string sitting_id;
  SessionState from;
  SessionState to;
  Timestamp at;
};

struct SessionEngineConfig {
  // Authentication opens this long before a sitting's start time.
  Minutes admission_lead{30};
};

// Server-authoritative lifecycle of every candidate attempt.
//
// Each session is guarded by its own mutex; the session table has a
// reader/writer lock used only to find or insert sessions. Validity of a
// session is the closed-open interval [started_at, deadline).
class SessionEngine {
 public:
  using ScriptListener = std::function<void(const AnswerScript&)>;

  SessionEngine(std::vector<CandidateRecord> roster, Schedule schedule,
                SessionEngineConfig config = {}, RandomSource* rng = nullptr);

  SessionEngine(const SessionEngine&) = delete;
  SessionEngine& operator=(const SessionEngine&) = delete;

  // Makes an unsealed exam available to a sitting. Candidates can begin
  // only once this has happened.
  Status open_sitting(std::string_view sitting_id, std::shared_ptr<const ValidatedExam> exam,
                      const Digest256& expected_environment);
  bool is_open(std::string_view sitting_id) const;
  std::shared_ptr<const ValidatedExam> exam_for(std::string_view sitting_id) const;
  const Sitting* sitting(std::string_view sitting_id) const;
  const CandidateRecord* candidate(std::string_view reg_no) const;
  const Schedule& schedule() const { return schedule_; }

  Result<SessionToken> authenticate(std::string_view reg_no, std::string_view identity_no,
                                    std::string_view sitting_id, Timestamp now);
  Result<SessionView> begin_exam(std::string_view token, const LockdownReport& report,
                                 Timestamp now);
  // `value` is a presented option label for objective questions (mapped to
  // the canonical label before storing) or free text for essays.
  Result<AnswerAck> record_answer(std::string_view token, std::string_view question_id,
                                  std::string_view value, Timestamp now);
  Result<AnswerScript> submit(std::string_view token, Timestamp now);
  std::vector<AnswerScript> expire_due_sessions(Timestamp now);

  // Owner of a token, without touching session state.
  std::optional<SessionToken> token_info(std::string_view token) const;
  // Read access; expires the session first if its deadline has passed.
  Result<SessionView> view(std::string_view token, Timestamp now);
  // The presentation-ordered paper for an active session, without keys.
  Result<nlohmann::json> paper(std::string_view token, Timestamp now);
  Result<PresentationOrder> presentation(std::string_view token) const;

  std::vector<AnswerScript> scripts() const;
  std::optional<AnswerScript> script_for(std::string_view reg_no, std::string_view exam_id) const;
  std::vector<Transition> transitions() const;
  std::map<SessionState, std::size_t> state_counts(std::string_view sitting_id) const;
  std::size_t session_count() const;

  // Called once per AnswerScript, outside every session lock.
  void set_script_listener(ScriptListener listener);

 private:
  struct Live {
    SessionToken token;
    std::string exam_id;
    SessionState state = SessionState::kAuthenticated;
    std::optional<Timestamp> started_at;
    std::optional<Timestamp> deadline;
    std::map<std::string, RecordedAnswer> answers;
    std::shared_ptr<const ValidatedExam> exam;
    PresentationOrder order;
  };
  struct Slot {
    std::mutex mu;
    Live live;
  };
  struct OpenSitting {
    std::shared_ptr<const ValidatedExam> exam;
    Digest256 expected_environment;
  };

  std::shared_ptr<Slot> find_slot(std::string_view token) const;
  void move_to(Live& s, SessionState to, Timestamp at);
  // Requires s.state == kActive and the slot lock held.
  AnswerScript finalize(Live& s, Termination how, Timestamp at);
  // Expires an active session whose deadline has passed. Returns the new
  // script, if any.
  std::optional<AnswerScript> expire_if_due(Live& s, Timestamp now);
  void publish(const std::vector<AnswerScript>& emitted);
  static SessionView make_view(const Live& s);

  SessionEngineConfig config_;
  RandomSource* rng_;
  std::map<std::string, CandidateRecord, std::less<>> roster_;
  Schedule schedule_;
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> assignments_;

  mutable std::shared_mutex sittings_mu_;
  std::map<std::string, OpenSitting, std::less<>> open_;

  mutable std::shared_mutex sessions_mu_;
  std::unordered_map<std::string, std::shared_ptr<Slot>> sessions_;
  std::map<std::pair<std::string, std::string>, std::string> by_candidate_;

  mutable std::mutex scripts_mu_;
  std::vector<AnswerScript> scripts_;
  std::vector<Transition> transitions_;
  ScriptListener listener_;
};

}  // namespace securexam

#endif  // SECUREXAM_SESSION_ENGINE_HPP_

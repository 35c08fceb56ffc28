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

#ifndef SECUREXAM_SERVICE_SERVICE_HPP_
#define SECUREXAM_SERVICE_SERVICE_HPP_

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/attestation/lockdown.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/random.hpp"
#include "securexam/core/time.hpp"
#include "securexam/crypto/keys.hpp"
#include "securexam/crypto/package.hpp"
#include "securexam/grading/grading.hpp"
#include "securexam/service/config.hpp"
#include "securexam/service/stores.hpp"
#include "securexam/service/throttle.hpp"
#include "securexam/session/engine.hpp"

namespace securexam {

// Transport-neutral request/response used by the HTTP binding and tests.
struct ApiRequest {
  std::string method;  // GET, POST, PUT
  std::string path;    // e.g. /v1/sessions/<token>/paper
  std::string body;
  std::string bearer;  // Authorization: Bearer <value>, if any
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// {code, message, retriable}
nlohmann::json error_envelope(const Error& error);
int http_status_for(ErrorCode code);
bool is_retriable(ErrorCode code);

// The exam service: binds every primary module behind the /v1 routes.
//
// Unsealed exam content lives only in memory, per opened sitting. The two
// stores are the question store (packages, keys, schedule) and the
// candidate store (roster, scripts, scores, cards, audit log).
class ExamService {
 public:
  ExamService(ServiceConfig config, Clock clock, RandomSource* rng = nullptr);

  ExamService(const ExamService&) = delete;
  ExamService& operator=(const ExamService&) = delete;

  // --- administrative setup (local, before sittings open) ---
  Status register_author_key(const PublicKey& key);
  Status install_roster(std::vector<CandidateRecord> roster);
  Status install_schedule(Schedule schedule);
  void set_center_key(KeyPair key);

  // --- module operations ---
  Result<std::string> upload_package(ByteView package_bytes);
  Result<SecurityImage> open_sitting(std::string_view admin_token, std::string_view sitting_id,
                                     const KeyPair* center_key = nullptr);
  Result<SessionToken> authenticate(std::string_view reg_no, std::string_view identity_no,
                                    std::string_view sitting_id);
  Result<SessionView> begin_exam(std::string_view token, const LockdownReport& report);
  Result<nlohmann::json> paper(std::string_view token);
  Result<AnswerAck> record_answer(std::string_view token, std::string_view question_id,
                                  std::string_view value);
  Result<AnswerScript> submit(std::string_view token);
  Result<Confirmation> invigilator_confirm(std::string_view admin_token,
                                           std::string_view sitting_id, int observed_index,
                                           std::string_view observed_code,
                                           std::string_view invigilator_id);
  Result<IssuedCard> issue_card(std::string_view admin_token, std::string_view reg_no,
                                std::string_view sitting_id);
  Result<Score> check_result(std::string_view reg_no, std::string_view identity_no,
                             std::string_view pin);
  Result<Score> record_essay_mark(std::string_view admin_token, std::string_view reg_no,
                                  std::string_view exam_id, std::string_view question_id,
                                  int awarded, std::string_view marker_id);
  // Periodic expiry sweep.
  std::vector<AnswerScript> sweep();

  // Routes a request to exactly one operation and appends one audit event.
  ApiResponse handle(const ApiRequest& request);

  // --- inspection ---
  SessionEngine& engine();
  ResultsDesk& desk();
  const InvigilatorBoard& board() const { return board_; }
  std::vector<AuditEvent> audit_events() const { return audit_.events(); }
  const QuestionStore& question_store() const { return question_store_; }
  const CandidateStore& candidate_store() const { return candidate_store_; }
  const ServiceConfig& config() const { return config_; }
  Timestamp now() const { return clock_(); }

 private:
  struct StoredPackage {
    Digest256 fingerprint;
    ExamPackage package;
  };

  void rebuild_engine();
  void on_script(const AnswerScript& script);
  bool admin_ok(std::string_view token) const;
  std::shared_ptr<const ValidatedExam> find_exam(std::string_view exam_id) const;
  void audit(std::string_view role, std::string_view actor, std::string_view action,
             std::string_view subject, std::string_view outcome);
  template <typename R>
  void audit_result(std::string_view role, std::string_view actor, std::string_view action,
                    std::string_view subject, const R& result) {
    audit(role, actor, action, subject, result.ok() ? "ok" : to_string(result.error().code));
  }

  ServiceConfig config_;
  Clock clock_;
  RandomSource* rng_;
  QuestionStore question_store_;
  CandidateStore candidate_store_;
  AuditLog audit_;
  FailureThrottle throttle_;
  InvigilatorBoard board_;
  Digest256 environment_digest_;

  mutable std::shared_mutex state_mu_;
  std::vector<CandidateRecord> roster_;
  Schedule schedule_;
  std::unique_ptr<SessionEngine> engine_;
  std::unique_ptr<ResultsDesk> desk_;
  std::map<Digest256, PublicKey> author_keys_;
  std::map<std::string, StoredPackage> packages_;  // by exam_id; latest upload wins
  std::optional<KeyPair> center_key_;
};

}  // namespace securexam

#endif  // SECUREXAM_SERVICE_SERVICE_HPP_

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

#ifndef SECUREXAM_SERVICE_STORES_HPP_
#define SECUREXAM_SERVICE_STORES_HPP_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "securexam/core/bytes.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/time.hpp"
#include "securexam/crypto/keys.hpp"
#include "securexam/grading/grading.hpp"
#include "securexam/scheduling/planner.hpp"
#include "securexam/scheduling/roster.hpp"
#include "securexam/session/engine.hpp"

namespace securexam {

// Writes to a sibling temp file and renames over the target.
Status write_file_atomic(const std::filesystem::path& path, ByteView data);
Result<Bytes> read_file(const std::filesystem::path& path);

// Sealed packages, public keys and schedules. Never holds candidate
// personal data or unsealed exam content.
//
//   <root>/packages/<fingerprint>.pkg
//   <root>/keys/<key_id>.pub
//   <root>/schedule.json
class QuestionStore {
 public:
  explicit QuestionStore(std::filesystem::path root);

  Status put_package(const Digest256& fingerprint, ByteView bytes);
  bool has_package(const Digest256& fingerprint) const;
  std::vector<Bytes> packages() const;

  Status put_public_key(const PublicKey& key);
  std::vector<PublicKey> public_keys() const;

  Status put_schedule(const Schedule& schedule);
  std::optional<Schedule> schedule() const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  mutable std::mutex mu_;
};

struct AuditEvent {
  std::uint64_t sequence = 0;
  Timestamp timestamp;
  std::string actor_role;
  std::string actor_id;
  std::string action;
  std::string subject;
  std::string outcome;  // "ok" or an error code

  nlohmann::json to_json() const;
  static Result<AuditEvent> from_json(const nlohmann::json& j);
};

// Roster, sessions' scripts, scores, scratch cards (hashes only) and the
// audit log.
//
//   <root>/roster.json
//   <root>/scripts/<reg_no>__<exam_id>.json
//   <root>/scores/<reg_no>__<exam_id>.json
//   <root>/cards/<card_id>.json
//   <root>/audit.jsonl
class CandidateStore {
 public:
  explicit CandidateStore(std::filesystem::path root);

  Status put_roster(const std::vector<CandidateRecord>& roster);
  std::optional<std::vector<CandidateRecord>> roster() const;

  Status put_script(const AnswerScript& script);
  std::vector<AnswerScript> scripts() const;
  Status put_score(const Score& score);
  std::vector<Score> scores() const;
  Status put_card(const ScratchCard& card);
  std::vector<ScratchCard> cards() const;

  Status append_audit(const AuditEvent& event);
  std::vector<AuditEvent> audit_events() const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::vector<nlohmann::json> read_dir(const std::filesystem::path& dir) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
  mutable std::mutex audit_mu_;
};

// In-memory append-only audit sequence backed by the candidate store.
class AuditLog {
 public:
  explicit AuditLog(CandidateStore& store);

  AuditEvent append(std::string actor_role, std::string actor_id, std::string action,
                    std::string subject, std::string outcome, Timestamp at);
  std::vector<AuditEvent> events() const;

 private:
  CandidateStore& store_;
  mutable std::mutex mu_;
  std::vector<AuditEvent> events_;
};

}  // namespace securexam

#endif  // SECUREXAM_SERVICE_STORES_HPP_

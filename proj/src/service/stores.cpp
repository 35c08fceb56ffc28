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

#include "securexam/service/stores.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

namespace securexam {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// File-name-safe form of an identifier such as "FUT/2012/0042".
std::string safe_name(std::string_view id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

Status write_json(const fs::path& path, const json& j) {
  return write_file_atomic(path, as_bytes(j.dump(2)));
}

std::optional<json> read_json(const fs::path& path) {
  auto bytes = read_file(path);
  if (!bytes) return std::nullopt;
  json j = json::parse(bytes->begin(), bytes->end(), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

}  // namespace

Status write_file_atomic(const fs::path& path, ByteView data) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return {ErrorCode::kIoError, "cannot write " + tmp.string()};
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) return {ErrorCode::kIoError, "short write to " + tmp.string()};
  }
  fs::rename(tmp, path, ec);
  if (ec) return {ErrorCode::kIoError, "rename failed for " + path.string() + ": " + ec.message()};
  return {};
}

Result<Bytes> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error(ErrorCode::kIoError, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// --- question store ---

QuestionStore::QuestionStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "packages");
  fs::create_directories(root_ / "keys");
}

Status QuestionStore::put_package(const Digest256& fingerprint, ByteView bytes) {
  std::lock_guard lock(mu_);
  return write_file_atomic(root_ / "packages" / (fingerprint.hex() + ".pkg"), bytes);
}

bool QuestionStore::has_package(const Digest256& fingerprint) const {
  std::lock_guard lock(mu_);
  return fs::exists(root_ / "packages" / (fingerprint.hex() + ".pkg"));
}

std::vector<Bytes> QuestionStore::packages() const {
  std::lock_guard lock(mu_);
  std::vector<std::pair<fs::file_time_type, Bytes>> found;
  for (const auto& e : fs::directory_iterator(root_ / "packages")) {
    if (e.path().extension() != ".pkg") continue;
    if (auto b = read_file(e.path())) found.emplace_back(e.last_write_time(), std::move(*b));
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Bytes> out;
  for (auto& [_, b] : found) out.push_back(std::move(b));
  return out;
}

Status QuestionStore::put_public_key(const PublicKey& key) {
  std::lock_guard lock(mu_);
  return write_file_atomic(root_ / "keys" / (key.key_id.hex() + ".pub"), export_public_key(key));
}

std::vector<PublicKey> QuestionStore::public_keys() const {
  std::lock_guard lock(mu_);
  std::vector<PublicKey> out;
  for (const auto& e : fs::directory_iterator(root_ / "keys")) {
    if (e.path().extension() != ".pub") continue;
    auto bytes = read_file(e.path());
    if (!bytes) continue;
    if (auto kf = import_key_file(*bytes)) out.push_back(kf->public_key);
  }
  return out;
}

Status QuestionStore::put_schedule(const Schedule& schedule) {
  std::lock_guard lock(mu_);
  return write_json(root_ / "schedule.json", schedule_to_json(schedule));
}

std::optional<Schedule> QuestionStore::schedule() const {
  std::lock_guard lock(mu_);
  auto j = read_json(root_ / "schedule.json");
  if (!j) return std::nullopt;
  auto s = schedule_from_json(*j);
  if (!s) return std::nullopt;
  return *s;
}

// --- audit events ---

json AuditEvent::to_json() const {
  return {{"sequence", sequence},
          {"timestamp", to_unix(timestamp)},
          {"actor", {{"role", actor_role}, {"id", actor_id}}},
          {"action", action},
          {"subject", subject},
          {"outcome", outcome}};
}

Result<AuditEvent> AuditEvent::from_json(const json& j) {
  AuditEvent e;
  try {
    e.sequence = j.at("sequence").get<std::uint64_t>();
    e.timestamp = from_unix(j.at("timestamp").get<std::int64_t>());
    e.actor_role = j.at("actor").at("role").get<std::string>();
    e.actor_id = j.at("actor").at("id").get<std::string>();
    e.action = j.at("action").get<std::string>();
    e.subject = j.at("subject").get<std::string>();
    e.outcome = j.at("outcome").get<std::string>();
  } catch (const json::exception& ex) {
    return Error(ErrorCode::kMalformedRequest, std::string("audit event: ") + ex.what());
  }
  return e;
}

// --- candidate store ---

CandidateStore::CandidateStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "scripts");
  fs::create_directories(root_ / "scores");
  fs::create_directories(root_ / "cards");
}

Status CandidateStore::put_roster(const std::vector<CandidateRecord>& roster) {
  std::lock_guard lock(mu_);
  return write_json(root_ / "roster.json", roster_to_json(roster));
}

std::optional<std::vector<CandidateRecord>> CandidateStore::roster() const {
  std::lock_guard lock(mu_);
  auto j = read_json(root_ / "roster.json");
  if (!j) return std::nullopt;
  auto r = roster_from_json(*j);
  if (!r) return std::nullopt;
  return *r;
}

Status CandidateStore::put_script(const AnswerScript& script) {
  std::lock_guard lock(mu_);
  return write_json(root_ / "scripts" / (safe_name(script.reg_no) + "__" + safe_name(script.exam_id) + ".json"),
                    script.to_json());
}

Status CandidateStore::put_score(const Score& score) {
  std::lock_guard lock(mu_);
  return write_json(root_ / "scores" / (safe_name(score.reg_no) + "__" + safe_name(score.exam_id) + ".json"),
                    score.to_json());
}

Status CandidateStore::put_card(const ScratchCard& card) {
  std::lock_guard lock(mu_);
  return write_json(root_ / "cards" / (safe_name(card.card_id) + ".json"), card.to_json());
}

std::vector<json> CandidateStore::read_dir(const fs::path& dir) const {
  std::lock_guard lock(mu_);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<json> out;
  for (const auto& f : files) {
    if (auto j = read_json(f)) out.push_back(std::move(*j));
  }
  return out;
}

std::vector<AnswerScript> CandidateStore::scripts() const {
  std::vector<AnswerScript> out;
  for (const auto& j : read_dir(root_ / "scripts")) {
    if (auto s = AnswerScript::from_json(j)) out.push_back(std::move(*s));
  }
  return out;
}

std::vector<Score> CandidateStore::scores() const {
  std::vector<Score> out;
  for (const auto& j : read_dir(root_ / "scores")) {
    if (auto s = Score::from_json(j)) out.push_back(std::move(*s));
  }
  return out;
}

std::vector<ScratchCard> CandidateStore::cards() const {
  std::vector<ScratchCard> out;
  for (const auto& j : read_dir(root_ / "cards")) {
    if (auto c = ScratchCard::from_json(j)) out.push_back(std::move(*c));
  }
  return out;
}

Status CandidateStore::append_audit(const AuditEvent& event) {
  std::lock_guard lock(audit_mu_);
  std::ofstream out(root_ / "audit.jsonl", std::ios::app);
  if (!out) return {ErrorCode::kIoError, "cannot append to audit log"};
  out << event.to_json().dump() << '\n';
  out.flush();
  if (!out) return {ErrorCode::kIoError, "audit append failed"};
  return {};
}

std::vector<AuditEvent> CandidateStore::audit_events() const {
  std::lock_guard lock(audit_mu_);
  std::vector<AuditEvent> out;
  std::ifstream in(root_ / "audit.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;
    if (auto e = AuditEvent::from_json(j)) out.push_back(std::move(*e));
  }
  return out;
}

AuditLog::AuditLog(CandidateStore& store) : store_(store), events_(store.audit_events()) {}

AuditEvent AuditLog::append(std::string actor_role, std::string actor_id, std::string action,
                            std::string subject, std::string outcome, Timestamp at) {
  std::lock_guard lock(mu_);
  AuditEvent e;
  e.sequence = events_.empty() ? 1 : events_.back().sequence + 1;
  e.timestamp = at;
  e.actor_role = std::move(actor_role);
  e.actor_id = std::move(actor_id);
  e.action = std::move(action);
  e.subject = std::move(subject);
  e.outcome = std::move(outcome);
  // Persist before publishing so the sequence on disk never has gaps.
  (void)store_.append_audit(e);
  events_.push_back(e);
  return e;
}

std::vector<AuditEvent> AuditLog::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

}  // namespace securexam

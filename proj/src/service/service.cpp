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


#include "securexam/service/service.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace securexam {

using nlohmann::json;

namespace {

constexpr ErrorCode kRetriable[] = {
    ErrorCode::kThrottled,     ErrorCode::kEmbargoActive,
    ErrorCode::kTooEarly,      ErrorCode::kSittingNotOpen,
    ErrorCode::kResultNotFinal, ErrorCode::kOutsideAdmissionWindow,
    ErrorCode::kIoError,       ErrorCode::kInternal,
};

std::string session_subject(const std::optional<SessionToken>& t) {
  if (!t) return "unknown-token";
  return t->reg_no + "@" + t->sitting_id;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> out;
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::size_t i = 0;
  while (i <= path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

Error malformed(std::string message) {
  return Error(ErrorCode::kMalformedRequest, std::move(message));
}

Result<std::string> string_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    return malformed(std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

ApiResponse failure(const Error& e) { return {http_status_for(e.code), error_envelope(e)}; }

json score_view(const Score& s) {
  json j = s.to_json();
  j.erase("mark_history");
  return j;
}

}  // namespace

json error_envelope(const Error& error) {
  json j = {{"code", to_string(error.code)},
            {"message", error.message},
            {"retriable", is_retriable(error.code)}};
  if (!error.details.is_null()) j["details"] = error.details;
  if (error.cause) j["cause"] = to_string(*error.cause);
  return j;
}

bool is_retriable(ErrorCode code) {
  return std::find(std::begin(kRetriable), std::end(kRetriable), code) != std::end(kRetriable);
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRequest:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMalformedDraft:
    case ErrorCode::kMalformedPackage:
    case ErrorCode::kMalformedAnswer:
    case ErrorCode::kMalformedKey:
    case ErrorCode::kMalformedRoster:
      return 400;
    case ErrorCode::kUnauthorized:
    case ErrorCode::kUnknownCandidate:
    case ErrorCode::kWrongIdentityNumber:
    case ErrorCode::kBadCredentials:
    case ErrorCode::kBadPin:
    case ErrorCode::kUnknownToken:
    case ErrorCode::kTokenExpired:
      return 401;
    case ErrorCode::kNotAssignedToSitting:
    case ErrorCode::kLockdownRejected:
    case ErrorCode::kEmbargoActive:
      return 403;
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownSitting:
    case ErrorCode::kUnknownQuestion:
    case ErrorCode::kNoScriptOnRecord:
      return 404;
    case ErrorCode::kDuplicatePackage:
    case ErrorCode::kAlreadyCompleted:
    case ErrorCode::kAlreadyStarted:
    case ErrorCode::kSessionNotActive:
    case ErrorCode::kPastDeadline:
    case ErrorCode::kSittingNotOpen:
    case ErrorCode::kOutsideAdmissionWindow:
    case ErrorCode::kTooEarly:
    case ErrorCode::kCardAlreadyIssued:
    case ErrorCode::kCardUsed:
    case ErrorCode::kResultNotFinal:
    case ErrorCode::kAlreadyFinalized:
    case ErrorCode::kExamMismatch:
      return 409;
    case ErrorCode::kBadSignature:
    case ErrorCode::kUnsealFailure:
    case ErrorCode::kNotARecipient:
    case ErrorCode::kTampered:
    case ErrorCode::kInvalidPayload:
    case ErrorCode::kNotAnEssayQuestion:
    case ErrorCode::kMarkOutOfRange:
      return 422;
    case ErrorCode::kThrottled:
      return 429;
    default:
      return 500;
  }
}

// ---------------------------------------------------------------------------

ExamService::ExamService(ServiceConfig config, Clock clock, RandomSource* rng)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock) : Clock(system_now)),
      rng_(rng ? rng : &system_random()),
      question_store_(config_.question_store),
      candidate_store_(config_.candidate_store),
      audit_(candidate_store_),
      throttle_(config_.throttle_failures, Seconds(config_.throttle_window_seconds)) {
  if (auto st = ensure_crypto_runtime(); !st.ok()) throw std::runtime_error(st.error().describe());
  if (auto d = Digest256::from_hex(config_.sanctioned_environment_digest)) {
    environment_digest_ = *d;
  }
  for (const PublicKey& k : question_store_.public_keys()) {
    if (k.role == KeyRole::kLecturer) author_keys_.emplace(k.key_id, k);
  }
  if (auto r = candidate_store_.roster()) roster_ = std::move(*r);
  if (auto s = question_store_.schedule()) schedule_ = std::move(*s);
  for (const Bytes& raw : question_store_.packages()) {
    auto pkg = parse_package(raw);
    if (!pkg.ok()) continue;
    std::string exam_id = pkg->manifest.exam_id;
    packages_[exam_id] = StoredPackage{package_fingerprint(raw), std::move(*pkg)};
  }
  if (!config_.center_key_path.empty()) {
    if (auto raw = read_file(config_.center_key_path); raw.ok()) {
      if (auto kf = import_key_file(*raw); kf.ok() && kf->keypair &&
                                           kf->keypair->role() == KeyRole::kCenter) {
        center_key_ = std::move(*kf->keypair);
      }
    }
  }
  rebuild_engine();
  for (ScratchCard& c : candidate_store_.cards()) desk_->restore_card(std::move(c));
  for (Score& s : candidate_store_.scores()) desk_->put_score(std::move(s));
}

void ExamService::rebuild_engine() {
  SessionEngineConfig ec;
  ec.admission_lead = Minutes(config_.admission_lead_minutes);
  engine_ = std::make_unique<SessionEngine>(roster_, schedule_, ec, rng_);
  engine_->set_script_listener([this](const AnswerScript& s) { on_script(s); });
  ResultsDeskConfig dc;
  dc.embargo = Hours(config_.embargo_hours);
  auto desk = std::make_unique<ResultsDesk>(roster_, dc);
  if (desk_) {
    for (ScratchCard c : desk_->cards()) desk->restore_card(std::move(c));
    for (Score s : desk_->scores()) desk->put_score(std::move(s));
  }
  desk_ = std::move(desk);
}

// Runs on the thread that finalized the script, outside engine locks. The
// caller already holds state_mu_ (shared), so this must not take it again.
void ExamService::on_script(const AnswerScript& script) {
  (void)candidate_store_.put_script(script);
  if (auto exam = engine_->exam_for(script.sitting_id)) {
    if (auto score = grade_objective(script, *exam); score.ok()) {
      desk_->put_score(*score);
      (void)candidate_store_.put_score(*score);
    }
  }
}

bool ExamService::admin_ok(std::string_view token) const {
  const std::string& want = config_.admin_token;
  if (want.empty() || token.size() != want.size()) return false;
  return sodium_memcmp(token.data(), want.data(), want.size()) == 0;
}

std::shared_ptr<const ValidatedExam> ExamService::find_exam(std::string_view exam_id) const {
  for (const Sitting& s : schedule_.sittings) {
    if (s.exam_id != exam_id) continue;
    if (auto exam = engine_->exam_for(s.sitting_id)) return exam;
  }
  return nullptr;
}

void ExamService::audit(std::string_view role, std::string_view actor, std::string_view action,
                        std::string_view subject, std::string_view outcome) {
  audit_.append(std::string(role), std::string(actor), std::string(action), std::string(subject),
                std::string(outcome), clock_());
}

SessionEngine& ExamService::engine() {
  std::shared_lock lock(state_mu_);
  return *engine_;
}

ResultsDesk& ExamService::desk() {
  std::shared_lock lock(state_mu_);
  return *desk_;
}

// --- setup -----------------------------------------------------------------

Status ExamService::register_author_key(const PublicKey& key) {
  if (key.role != KeyRole::kLecturer) {
    return Error(ErrorCode::kWrongKeyRole, "author keys must have the lecturer role");
  }
  if (auto st = question_store_.put_public_key(key); !st.ok()) return st;
  std::unique_lock lock(state_mu_);
  author_keys_.insert_or_assign(key.key_id, key);
  return {};
}

Status ExamService::install_roster(std::vector<CandidateRecord> roster) {
  if (auto st = candidate_store_.put_roster(roster); !st.ok()) return st;
  std::unique_lock lock(state_mu_);
  roster_ = std::move(roster);
  rebuild_engine();
  return {};
}

Status ExamService::install_schedule(Schedule schedule) {
  if (auto st = question_store_.put_schedule(schedule); !st.ok()) return st;
  std::unique_lock lock(state_mu_);
  schedule_ = std::move(schedule);
  rebuild_engine();
  return {};
}

void ExamService::set_center_key(KeyPair key) {
  std::unique_lock lock(state_mu_);
  center_key_ = std::move(key);
}

// --- operations ------------------------------------------------------------

Result<std::string> ExamService::upload_package(ByteView package_bytes) {
  std::string actor = "unknown";
  std::string subject = "unknown";
  auto run = [&]() -> Result<std::string> {
    auto pkg = parse_package(package_bytes);
    if (!pkg.ok()) return pkg.error();
    subject = pkg->manifest.exam_id;
    actor = pkg->manifest.author_key_id.hex().substr(0, 16);
    std::unique_lock lock(state_mu_);
    auto key = author_keys_.find(pkg->manifest.author_key_id);
    if (key == author_keys_.end()) {
      return Error(ErrorCode::kUnauthorized, "package author key is not registered");
    }
    if (auto st = verify_package_signature(*pkg, key->second); !st.ok()) return st.error();
    Digest256 fp = package_fingerprint(package_bytes);
    if (question_store_.has_package(fp)) {
      return Error(ErrorCode::kDuplicatePackage, "package already uploaded")
          .with_details({{"package_id", fp.hex()}});
    }
    if (auto st = question_store_.put_package(fp, package_bytes); !st.ok()) return st.error();
    std::string exam_id = pkg->manifest.exam_id;
    packages_[exam_id] = StoredPackage{fp, std::move(*pkg)};
    return fp.hex();
  };
  auto result = run();
  audit_result("lecturer", actor, "package.upload", subject, result);
  return result;
}

Result<SecurityImage> ExamService::open_sitting(std::string_view admin_token,
                                                std::string_view sitting_id,
                                                const KeyPair* center_key) {
  auto run = [&]() -> Result<SecurityImage> {
    if (!admin_ok(admin_token)) return Error(ErrorCode::kUnauthorized, "admin token required");
    std::shared_lock lock(state_mu_);
    const Sitting* sitting = engine_->sitting(sitting_id);
    if (!sitting) return Error(ErrorCode::kUnknownSitting, "no such sitting");
    Timestamp now = clock_();
    if (now < sitting->start_time - Minutes(config_.pre_exam_window_minutes)) {
      return Error(ErrorCode::kTooEarly, "sitting cannot be opened yet")
          .with_details({{"opens_at", to_unix(sitting->start_time -
                                              Minutes(config_.pre_exam_window_minutes))}});
    }
    auto stored = packages_.find(sitting->exam_id);
    if (stored == packages_.end()) {
      return Error(ErrorCode::kNotFound, "no package uploaded for exam " + sitting->exam_id);
    }
    const KeyPair* key = center_key ? center_key : (center_key_ ? &*center_key_ : nullptr);
    if (!key) return Error(ErrorCode::kInvalidArgument, "no center key configured");
    const ExamPackage& pkg = stored->second.package;
    auto author = author_keys_.find(pkg.manifest.author_key_id);
    if (author == author_keys_.end()) {
      return Error(ErrorCode::kUnauthorized, "package author key is not registered");
    }
    auto exam = unseal_exam(pkg, *key, author->second);
    if (!exam.ok()) {
      return Error(ErrorCode::kUnsealFailure, "package could not be unsealed")
          .with_cause(exam.error().code);
    }
    auto shared = std::make_shared<const ValidatedExam>(std::move(*exam));
    if (auto st = engine_->open_sitting(sitting_id, shared, environment_digest_); !st.ok()) {
      return st.error();
    }
    SecurityImage image = derive_security_image(stored->second.fingerprint, sitting_id);
    board_.publish(image);
    return image;
  };
  auto result = run();
  audit_result("admin", "admin", "sitting.open", sitting_id, result);
  return result;
}

Result<SessionToken> ExamService::authenticate(std::string_view reg_no,
                                               std::string_view identity_no,
                                               std::string_view sitting_id) {
  Timestamp now = clock_();
  Result<SessionToken> result = Error(ErrorCode::kInternal, "unreachable");
  if (throttle_.throttled(reg_no, now)) {
    result = Error(ErrorCode::kThrottled, "too many failed attempts; try again later");
  } else {
    std::shared_lock lock(state_mu_);
    result = engine_->authenticate(reg_no, identity_no, sitting_id, now);
  }
  std::string subject = std::string(reg_no) + "@" + std::string(sitting_id);
  audit_result("candidate", reg_no, "session.authenticate", subject, result);
  if (!result.ok()) {
    ErrorCode c = result.error().code;
    if (c == ErrorCode::kUnknownCandidate || c == ErrorCode::kWrongIdentityNumber) {
      throttle_.record_failure(reg_no, now);
      // A wrong identity number is reported exactly like an unknown candidate.
      return Error(ErrorCode::kUnknownCandidate, "unknown candidate or identity number");
    }
  }
  return result;
}

Result<SessionView> ExamService::begin_exam(std::string_view token,
                                            const LockdownReport& report) {
  std::shared_lock lock(state_mu_);
  auto owner = engine_->token_info(token);
  auto result = engine_->begin_exam(token, report, clock_());
  audit_result("candidate", owner ? owner->reg_no : "unknown", "session.begin",
               session_subject(owner), result);
  return result;
}

Result<json> ExamService::paper(std::string_view token) {
  std::shared_lock lock(state_mu_);
  auto owner = engine_->token_info(token);
  auto result = engine_->paper(token, clock_());
  if (result.ok() && owner) {
    if (auto image = board_.image(owner->sitting_id)) {
      (*result)["security_image"] = image->to_json();
    }
  }
  audit_result("candidate", owner ? owner->reg_no : "unknown", "session.paper",
               session_subject(owner), result);
  return result;
}

Result<AnswerAck> ExamService::record_answer(std::string_view token,
                                             std::string_view question_id,
                                             std::string_view value) {
  std::shared_lock lock(state_mu_);
  auto owner = engine_->token_info(token);
  auto result = engine_->record_answer(token, question_id, value, clock_());
  audit_result("candidate", owner ? owner->reg_no : "unknown", "session.answer",
               session_subject(owner) + ":" + std::string(question_id), result);
  return result;
}

Result<AnswerScript> ExamService::submit(std::string_view token) {
  std::shared_lock lock(state_mu_);
  auto owner = engine_->token_info(token);
  auto result = engine_->submit(token, clock_());
  audit_result("candidate", owner ? owner->reg_no : "unknown", "session.submit",
               session_subject(owner), result);
  return result;
}

Result<Confirmation> ExamService::invigilator_confirm(std::string_view admin_token,
                                                      std::string_view sitting_id,
                                                      int observed_index,
                                                      std::string_view observed_code,
                                                      std::string_view invigilator_id) {
  Result<Confirmation> result = Error(ErrorCode::kUnauthorized, "admin token required");
  if (admin_ok(admin_token)) {
    result = board_.confirm(sitting_id, observed_index, observed_code, invigilator_id, clock_());
  }
  std::string outcome = !result.ok() ? std::string(to_string(result.error().code))
                        : *result == Confirmation::kConfirmed ? "confirmed"
                                                              : "mismatch";
  audit("invigilator", invigilator_id, "invigilator.confirm", sitting_id, outcome);
  return result;
}

Result<IssuedCard> ExamService::issue_card(std::string_view admin_token, std::string_view reg_no,
                                           std::string_view sitting_id) {
  auto run = [&]() -> Result<IssuedCard> {
    if (!admin_ok(admin_token)) return Error(ErrorCode::kUnauthorized, "admin token required");
    std::shared_lock lock(state_mu_);
    const Sitting* sitting = engine_->sitting(sitting_id);
    if (!sitting) return Error(ErrorCode::kUnknownSitting, "no such sitting");
    auto issued = desk_->issue_scratch_card(reg_no, *sitting, *rng_);
    if (!issued.ok()) return issued;
    if (auto st = candidate_store_.put_card(issued->card); !st.ok()) return st.error();
    return issued;
  };
  auto result = run();
  audit_result("admin", "admin", "card.issue", reg_no, result);
  return result;
}

Result<Score> ExamService::check_result(std::string_view reg_no, std::string_view identity_no,
                                        std::string_view pin) {
  Timestamp now = clock_();
  Result<Score> result = Error(ErrorCode::kInternal, "unreachable");
  if (throttle_.throttled(reg_no, now)) {
    result = Error(ErrorCode::kThrottled, "too many failed attempts; try again later");
  } else {
    std::shared_lock lock(state_mu_);
    result = desk_->check_result(reg_no, identity_no, pin, now);
    if (result.ok()) {
      for (const ScratchCard& c : desk_->cards()) {
        if (c.reg_no == reg_no) (void)candidate_store_.put_card(c);
      }
    }
  }
  audit_result("candidate", reg_no, "result.check", reg_no, result);
  if (!result.ok()) {
    ErrorCode c = result.error().code;
    if (c == ErrorCode::kBadCredentials || c == ErrorCode::kBadPin) {
      throttle_.record_failure(reg_no, now);
    }
  }
  return result;
}

Result<Score> ExamService::record_essay_mark(std::string_view admin_token,
                                             std::string_view reg_no, std::string_view exam_id,
                                             std::string_view question_id, int awarded,
                                             std::string_view marker_id) {
  auto run = [&]() -> Result<Score> {
    if (!admin_ok(admin_token)) return Error(ErrorCode::kUnauthorized, "admin token required");
    std::shared_lock lock(state_mu_);
    auto exam = find_exam(exam_id);
    if (!exam) return Error(ErrorCode::kNotFound, "exam is not open in this service");
    auto score = desk_->record_essay_mark(reg_no, *exam, question_id, awarded, marker_id);
    if (!score.ok()) return score;
    if (auto st = candidate_store_.put_score(*score); !st.ok()) return st.error();
    return score;
  };
  auto result = run();
  audit_result("marker", marker_id, "essay.mark",
               std::string(reg_no) + "@" + std::string(exam_id) + ":" + std::string(question_id),
               result);
  return result;
}

std::vector<AnswerScript> ExamService::sweep() {
  std::shared_lock lock(state_mu_);
  auto expired = engine_->expire_due_sessions(clock_());
  for (const AnswerScript& s : expired) {
    audit("system", "expiry", "session.expire", s.reg_no + "@" + s.sitting_id, "ok");
  }
  return expired;
}

// --- routing ---------------------------------------------------------------

ApiResponse ExamService::handle(const ApiRequest& request) {
  auto seg = split_path(request.path);
  const std::string& m = request.method;
  auto not_found = [&] {
    return failure(Error(ErrorCode::kNotFound, "no route for " + m + " " + request.path));
  };
  if (seg.size() < 2 || seg[0] != "v1") return not_found();

  json body = json::object();
  if (m == "POST" || m == "PUT") {
    if (!request.body.empty()) {
      body = json::parse(request.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) {
        return failure(malformed("request body must be a JSON object"));
      }
    }
  }

  // POST /v1/packages
  if (seg.size() == 2 && seg[1] == "packages" && m == "POST") {
    auto b64 = string_field(body, "package_base64");
    if (!b64.ok()) return failure(b64.error());
    auto raw = from_base64(*b64);
    if (!raw) return failure(malformed("package_base64 is not valid base64"));
    auto r = upload_package(*raw);
    if (!r.ok()) return failure(r.error());
    return {201, {{"package_id", *r}}};
  }

  // POST /v1/sittings/{id}/open
  if (seg.size() == 4 && seg[1] == "sittings" && seg[3] == "open" && m == "POST") {
    std::optional<KeyPair> supplied;
    if (body.contains("center_key_base64")) {
      auto b64 = string_field(body, "center_key_base64");
      if (!b64.ok()) return failure(b64.error());
      auto raw = from_base64(*b64);
      if (!raw) return failure(malformed("center_key_base64 is not valid base64"));
      auto kf = import_key_file(*raw);
      if (!kf.ok()) return failure(kf.error());
      if (!kf->keypair) return failure(malformed("center key file has no private part"));
      supplied = std::move(*kf->keypair);
    }
    auto r = open_sitting(request.bearer, seg[2], supplied ? &*supplied : nullptr);
    if (!r.ok()) return failure(r.error());
    return {200, {{"sitting_id", std::string(seg[2])}, {"ready", true},
                  {"security_image", r->to_json()}}};
  }

  // POST /v1/auth
  if (seg.size() == 2 && seg[1] == "auth" && m == "POST") {
    auto reg = string_field(body, "reg_no");
    auto id = string_field(body, "identity_no");
    auto sit = string_field(body, "sitting_id");
    if (!reg.ok()) return failure(reg.error());
    if (!id.ok()) return failure(id.error());
    if (!sit.ok()) return failure(sit.error());
    auto r = authenticate(*reg, *id, *sit);
    if (!r.ok()) return failure(r.error());
    return {200, {{"token", r->value}, {"reg_no", r->reg_no}, {"sitting_id", r->sitting_id},
                  {"issued_at", to_unix(r->issued_at)}}};
  }

  // /v1/sessions/{token}/...
  if (seg.size() >= 4 && seg[1] == "sessions") {
    std::string_view token = seg[2];
    if (seg.size() == 4 && seg[3] == "begin" && m == "POST") {
      auto report = LockdownReport::from_json(body);
      if (!report.ok()) return failure(malformed(report.error().message));
      auto r = begin_exam(token, *report);
      if (!r.ok()) return failure(r.error());
      json j = {{"state", to_string(r->state)}, {"exam_id", r->exam_id}};
      if (r->started_at) j["started_at"] = to_unix(*r->started_at);
      if (r->deadline) j["deadline"] = to_unix(*r->deadline);
      return {200, j};
    }
    if (seg.size() == 4 && seg[3] == "paper" && m == "GET") {
      auto r = paper(token);
      if (!r.ok()) return failure(r.error());
      return {200, *r};
    }
    if (seg.size() == 5 && seg[3] == "answers" && m == "PUT") {
      auto value = string_field(body, "value");
      if (!value.ok()) return failure(value.error());
      auto r = record_answer(token, seg[4], *value);
      if (!r.ok()) return failure(r.error());
      return {200, {{"question_id", r->question_id}, {"value", *value},
                    {"written_at", to_unix(r->written_at)}, {"deadline", to_unix(r->deadline)}}};
    }
    if (seg.size() == 4 && seg[3] == "submit" && m == "POST") {
      auto r = submit(token);
      if (!r.ok()) return failure(r.error());
      return {200, {{"termination", to_string(r->termination)},
                    {"submitted_at", to_unix(r->submitted_at)},
                    {"answered", r->answered_count()},
                    {"blank", r->blank_count()}}};
    }
    return not_found();
  }

  // POST /v1/invigilator/{sitting}/confirm
  if (seg.size() == 4 && seg[1] == "invigilator" && seg[3] == "confirm" && m == "POST") {
    auto idx = body.find("image_index");
    if (idx == body.end() || !idx->is_number_integer()) {
      return failure(malformed("missing integer field 'image_index'"));
    }
    auto code = string_field(body, "confirm_code");
    auto who = string_field(body, "invigilator_id");
    if (!code.ok()) return failure(code.error());
    if (!who.ok()) return failure(who.error());
    auto r = invigilator_confirm(request.bearer, seg[2], idx->get<int>(), *code, *who);
    if (!r.ok()) return failure(r.error());
    return {200, {{"result", *r == Confirmation::kConfirmed ? "confirmed" : "mismatch"}}};
  }

  // POST /v1/cards
  if (seg.size() == 2 && seg[1] == "cards" && m == "POST") {
    auto reg = string_field(body, "reg_no");
    auto sit = string_field(body, "sitting_id");
    if (!reg.ok()) return failure(reg.error());
    if (!sit.ok()) return failure(sit.error());
    auto r = issue_card(request.bearer, *reg, *sit);
    if (!r.ok()) return failure(r.error());
    return {201, {{"card_id", r->card.card_id}, {"reg_no", r->card.reg_no},
                  {"exam_id", r->card.exam_id}, {"pin", r->pin},
                  {"release_time", to_unix(r->card.release_time)}}};
  }

  // POST /v1/results/check
  if (seg.size() == 3 && seg[1] == "results" && seg[2] == "check" && m == "POST") {
    auto reg = string_field(body, "reg_no");
    auto id = string_field(body, "identity_no");
    auto pin = string_field(body, "pin");
    if (!reg.ok()) return failure(reg.error());
    if (!id.ok()) return failure(id.error());
    if (!pin.ok()) return failure(pin.error());
    auto r = check_result(*reg, *id, *pin);
    if (!r.ok()) return failure(r.error());
    return {200, score_view(*r)};
  }

  // POST /v1/marks
  if (seg.size() == 2 && seg[1] == "marks" && m == "POST") {
    auto reg = string_field(body, "reg_no");
    auto exam = string_field(body, "exam_id");
    auto qid = string_field(body, "question_id");
    auto marker = string_field(body, "marker_id");
    auto awarded = body.find("awarded");
    if (!reg.ok()) return failure(reg.error());
    if (!exam.ok()) return failure(exam.error());
    if (!qid.ok()) return failure(qid.error());
    if (!marker.ok()) return failure(marker.error());
    if (awarded == body.end() || !awarded->is_number_integer()) {
      return failure(malformed("missing integer field 'awarded'"));
    }
    auto r = record_essay_mark(request.bearer, *reg, *exam, *qid, awarded->get<int>(), *marker);
    if (!r.ok()) return failure(r.error());
    return {200, r->to_json()};
  }

  return not_found();
}

}  // namespace securexam

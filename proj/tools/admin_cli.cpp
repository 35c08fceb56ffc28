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


#include "admin_cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "securexam/core/bytes.hpp"
#include "securexam/core/error.hpp"
#include "securexam/crypto/keys.hpp"
#include "securexam/crypto/package.hpp"
#include "securexam/exam/model.hpp"
#include "securexam/grading/grading.hpp"
#include "securexam/scheduling/planner.hpp"
#include "securexam/scheduling/roster.hpp"
#include "securexam/service/config.hpp"
#include "securexam/service/service.hpp"
#include "securexam/service/stores.hpp"

namespace securexam::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  bool json_output = false;
  std::string config_path;
  std::string question_store;
  std::string candidate_store;
  std::string server;
  std::string admin_token;
};

class Runner {
 public:
  Runner(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  Status init() {
    std::optional<fs::path> path;
    if (!g_.config_path.empty()) path = g_.config_path;
    auto cfg = load_service_config(path);
    if (!cfg.ok()) return cfg.error();
    cfg_ = std::move(*cfg);
    if (!g_.question_store.empty()) cfg_.question_store = g_.question_store;
    if (!g_.candidate_store.empty()) cfg_.candidate_store = g_.candidate_store;
    if (!g_.admin_token.empty()) cfg_.admin_token = g_.admin_token;
    return {};
  }

  int fail(const Error& e) {
    json env = error_envelope(e);
    (g_.json_output ? out_ : err_) << env.dump() << "\n";
    return kExitOperation;
  }

  int emit(const json& j, const std::string& human) {
    if (g_.json_output) {
      out_ << j.dump() << "\n";
    } else {
      out_ << human;
      if (!human.empty() && human.back() != '\n') out_ << "\n";
    }
    return kExitOk;
  }

  std::string server_url() const {
    if (!g_.server.empty()) return g_.server;
    return "http://" + cfg_.bind_address + ":" + std::to_string(cfg_.port);
  }

  // Sends one request; API errors come back as Error built from the envelope.
  Result<json> call(const std::string& method, const std::string& path, const json& body,
                    bool with_admin) {
    httplib::Client client(server_url());
    client.set_connection_timeout(5);
    client.set_read_timeout(30);
    httplib::Headers headers;
    if (with_admin) headers.emplace("Authorization", "Bearer " + cfg_.admin_token);
    httplib::Result res = method == "GET"
                              ? client.Get(path, headers)
                              : client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      return Error(ErrorCode::kIoError, "cannot reach service at " + server_url() + ": " +
                                            httplib::to_string(res.error()));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (res->status >= 200 && res->status < 300 && !reply.is_discarded()) return reply;
    if (!reply.is_discarded() && reply.contains("code") && reply["code"].is_string()) {
      auto code = error_code_from_string(reply["code"].get<std::string>());
      Error e(code.value_or(ErrorCode::kInternal), reply.value("message", ""));
      if (reply.contains("details")) e.details = reply["details"];
      if (reply.contains("cause") && reply["cause"].is_string()) {
        e.cause = error_code_from_string(reply["cause"].get<std::string>());
      }
      return e;
    }
    return Error(ErrorCode::kInternal, "unexpected HTTP status " + std::to_string(res->status));
  }

  const ServiceConfig& config() const { return cfg_; }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
  ServiceConfig cfg_;
};

Result<KeyFile> load_key(const std::string& path) {
  auto raw = read_file(path);
  if (!raw.ok()) return raw.error();
  return import_key_file(*raw);
}

Result<std::string> read_text(const std::string& path) {
  auto raw = read_file(path);
  if (!raw.ok()) return raw.error();
  return to_string(*raw);
}

// --- commands --------------------------------------------------------------

struct KeygenArgs {
  std::string role;
  std::string out;
  std::string public_out;
  bool register_key = false;
  bool force = false;
};

int cmd_keygen(Runner& r, const KeygenArgs& a) {
  auto role = key_role_from_string(a.role);
  if (!role) return r.fail(Error(ErrorCode::kInvalidArgument, "role must be lecturer or center"));
  if (!a.force && fs::exists(a.out)) {
    return r.fail(Error(ErrorCode::kInvalidArgument, a.out + " already exists; pass --force"));
  }
  auto kp = generate_keypair(*role);
  if (!kp.ok()) return r.fail(kp.error());
  if (auto st = write_file_atomic(a.out, export_keypair(*kp)); !st.ok()) return r.fail(st.error());
  fs::permissions(a.out, fs::perms::owner_read | fs::perms::owner_write,
                  fs::perm_options::replace);
  std::string public_out = a.public_out.empty() ? a.out + ".pub" : a.public_out;
  if (auto st = write_file_atomic(public_out, export_public_key(kp->public_key())); !st.ok()) {
    return r.fail(st.error());
  }
  if (a.register_key) {
    QuestionStore store(r.config().question_store);
    if (auto st = store.put_public_key(kp->public_key()); !st.ok()) return r.fail(st.error());
  }
  json j = {{"key_id", kp->key_id().hex()}, {"role", to_string(*role)}, {"out", a.out},
            {"public_out", public_out}, {"registered", a.register_key}};
  return r.emit(j, "key " + kp->key_id().hex() + " written to " + a.out);
}

int cmd_register_key(Runner& r, const std::string& key_path) {
  auto kf = load_key(key_path);
  if (!kf.ok()) return r.fail(kf.error());
  if (kf->public_key.role != KeyRole::kLecturer) {
    return r.fail(Error(ErrorCode::kWrongKeyRole, "only lecturer keys sign packages"));
  }
  QuestionStore store(r.config().question_store);
  if (auto st = store.put_public_key(kf->public_key); !st.ok()) return r.fail(st.error());
  return r.emit({{"key_id", kf->public_key.key_id.hex()}, {"registered", true}},
                "registered " + kf->public_key.key_id.hex());
}

int cmd_validate(Runner& r, const std::string& exam_path) {
  auto exam = load_exam_file(exam_path);
  if (!exam.ok()) return r.fail(exam.error());
  json j = {{"exam_id", exam->exam_id()},
            {"course_code", exam->course_code()},
            {"questions", exam->questions().size()},
            {"objective", exam->objective_count()},
            {"essay", exam->essay_count()},
            {"max_total", exam->max_total()},
            {"bundle_digest", sha256(canonical_bundle(*exam)).hex()}};
  std::ostringstream h;
  h << exam->exam_id() << ": " << exam->questions().size() << " questions ("
    << exam->objective_count() << " objective, " << exam->essay_count() << " essay), "
    << exam->max_total() << " marks";
  return r.emit(j, h.str());
}

struct SealArgs {
  std::string exam;
  std::string author;
  std::vector<std::string> recipients;
  std::string out;
  std::string created_at;
};

int cmd_seal(Runner& r, const SealArgs& a) {
  auto exam = load_exam_file(a.exam);
  if (!exam.ok()) return r.fail(exam.error());
  auto author = load_key(a.author);
  if (!author.ok()) return r.fail(author.error());
  if (!author->keypair) {
    return r.fail(Error(ErrorCode::kMalformedKey, "author key file has no private part"));
  }
  std::vector<PublicKey> recipients;
  for (const std::string& path : a.recipients) {
    auto kf = load_key(path);
    if (!kf.ok()) return r.fail(kf.error());
    recipients.push_back(kf->public_key);
  }
  Timestamp created = system_now();
  if (!a.created_at.empty()) {
    auto t = parse_timestamp(a.created_at);
    if (!t) return r.fail(Error(ErrorCode::kInvalidArgument, "bad --created-at"));
    created = *t;
  }
  auto pkg = seal_exam(*exam, *author->keypair, recipients, created);
  if (!pkg.ok()) return r.fail(pkg.error());
  Bytes bytes = serialize_package(*pkg);
  if (auto st = write_file_atomic(a.out, bytes); !st.ok()) return r.fail(st.error());
  std::string fp = package_fingerprint(bytes).hex();
  return r.emit({{"package_id", fp}, {"exam_id", exam->exam_id()},
                 {"recipients", recipients.size()}, {"out", a.out}},
                "sealed " + exam->exam_id() + " -> " + a.out + " (" + fp + ")");
}

int cmd_fingerprint(Runner& r, const std::string& pkg_path) {
  auto raw = read_file(pkg_path);
  if (!raw.ok()) return r.fail(raw.error());
  auto pkg = parse_package(*raw);
  if (!pkg.ok()) return r.fail(pkg.error());
  std::string fp = package_fingerprint(*raw).hex();
  return r.emit({{"package_id", fp}, {"exam_id", pkg->manifest.exam_id}}, fp);
}

int cmd_ingest_roster(Runner& r, const std::string& roster_path) {
  auto text = read_text(roster_path);
  if (!text.ok()) return r.fail(text.error());
  auto roster = parse_roster_csv(*text);
  if (!roster.ok()) return r.fail(roster.error());
  CandidateStore store(r.config().candidate_store);
  if (auto st = store.put_roster(*roster); !st.ok()) return r.fail(st.error());
  return r.emit({{"candidates", roster->size()}},
                "ingested " + std::to_string(roster->size()) + " candidates");
}

struct PlanArgs {
  std::string roster;
  int cutoff = 0;
  int capacity = 0;
  int days = 4;
  int sittings_per_day = 2;
  int venues = 1;
  std::string profile = "lan-center";
  std::string exam_id = "EXAM";
  std::string start;
  std::string out;
  bool install = false;
};

int cmd_plan(Runner& r, const PlanArgs& a) {
  auto text = read_text(a.roster);
  if (!text.ok()) return r.fail(text.error());
  auto roster = parse_roster_csv(*text);
  if (!roster.ok()) return r.fail(roster.error());
  auto eligible = filter_eligible(*roster, a.cutoff);

  PlanOptions opt;
  opt.capacity = a.capacity > 0 ? a.capacity : r.config().default_capacity;
  opt.days_available = a.days;
  opt.sittings_per_day = a.sittings_per_day;
  opt.venues = a.venues;
  auto profile = venue_profile_from_string(a.profile);
  if (!profile) return r.fail(Error(ErrorCode::kInvalidArgument, "unknown venue profile"));
  opt.venue_profile = *profile;
  if (a.start.empty()) {
    auto today = std::chrono::floor<std::chrono::days>(system_now());
    opt.first_start = Timestamp(today) + Hours(24 + 9);
  } else {
    auto t = parse_timestamp(a.start);
    if (!t) return r.fail(Error(ErrorCode::kInvalidArgument, "bad --start"));
    opt.first_start = *t;
  }
  auto schedule = plan_sittings(eligible, a.exam_id, opt);
  if (!schedule.ok()) return r.fail(schedule.error());
  json sched = schedule_to_json(*schedule);
  if (!a.out.empty()) {
    if (auto st = write_file_atomic(a.out, as_bytes(sched.dump(2) + "\n")); !st.ok()) {
      return r.fail(st.error());
    }
  }
  if (a.install) {
    QuestionStore store(r.config().question_store);
    if (auto st = store.put_schedule(*schedule); !st.ok()) return r.fail(st.error());
  }
  std::ostringstream h;
  h << schedule->sittings.size() << " sittings for " << eligible.size()
    << " eligible candidates\n";
  json rows = json::array();
  for (const Sitting& s : schedule->sittings) {
    h << "  " << s.sitting_id << "  " << s.course_code << "  " << to_iso8601(s.start_time)
      << "  " << s.assigned.size() << "\n";
    rows.push_back({{"sitting_id", s.sitting_id},
                    {"course_code", s.course_code},
                    {"start_time", to_unix(s.start_time)},
                    {"assigned", s.assigned.size()}});
  }
  return r.emit({{"sittings", schedule->sittings.size()},
                 {"eligible", eligible.size()},
                 {"schedule", rows}},
                h.str());
}

int cmd_open_sitting(Runner& r, const std::string& sitting, const std::string& center_key) {
  json body = json::object();
  if (!center_key.empty()) {
    auto raw = read_file(center_key);
    if (!raw.ok()) return r.fail(raw.error());
    body["center_key_base64"] = to_base64(*raw);
  }
  auto reply = r.call("POST", "/v1/sittings/" + sitting + "/open", body, true);
  if (!reply.ok()) return r.fail(reply.error());
  const json& img = (*reply)["security_image"];
  return r.emit(*reply, "sitting " + sitting + " ready; image " +
                            std::to_string(img.value("image_index", -1)) + " (" +
                            img.value("image_name", "") + "), code " +
                            img.value("confirm_code", ""));
}

int cmd_issue_cards(Runner& r, const std::string& sitting, std::vector<std::string> reg_nos) {
  if (reg_nos.empty()) {
    QuestionStore store(r.config().question_store);
    auto schedule = store.schedule();
    const Sitting* s = schedule ? schedule->find(sitting) : nullptr;
    if (!s) return r.fail(Error(ErrorCode::kUnknownSitting, "sitting not in local schedule"));
    reg_nos = s->assigned;
  }
  json issued = json::array();
  std::ostringstream h;
  int status = kExitOk;
  for (const std::string& reg : reg_nos) {
    auto reply = r.call("POST", "/v1/cards", {{"reg_no", reg}, {"sitting_id", sitting}}, true);
    if (!reply.ok()) {
      Error e = reply.error();
      e.details = json{{"reg_no", reg}};
      r.fail(e);
      status = kExitOperation;
      continue;
    }
    issued.push_back(*reply);
    h << reg << "  " << (*reply)["card_id"].get<std::string>() << "  "
      << (*reply)["pin"].get<std::string>() << "\n";
  }
  r.emit({{"cards", issued}}, h.str());
  return status;
}

int cmd_upload(Runner& r, const std::string& pkg_path) {
  auto raw = read_file(pkg_path);
  if (!raw.ok()) return r.fail(raw.error());
  auto reply = r.call("POST", "/v1/packages", {{"package_base64", to_base64(*raw)}}, false);
  if (!reply.ok()) return r.fail(reply.error());
  return r.emit(*reply, "uploaded " + (*reply)["package_id"].get<std::string>());
}

int cmd_export_results(Runner& r, const std::string& out_path) {
  CandidateStore store(r.config().candidate_store);
  auto scores = store.scores();
  std::string csv = results_to_csv(scores);
  if (!out_path.empty()) {
    if (auto st = write_file_atomic(out_path, as_bytes(csv)); !st.ok()) return r.fail(st.error());
    return r.emit({{"rows", scores.size()}, {"out", out_path}},
                  std::to_string(scores.size()) + " results written to " + out_path);
  }
  json rows = json::array();
  for (const Score& s : scores) rows.push_back(s.to_json());
  return r.emit({{"rows", scores.size()}, {"results", rows}}, csv);
}

int cmd_audit_dump(Runner& r) {
  CandidateStore store(r.config().candidate_store);
  json events = json::array();
  std::ostringstream h;
  for (const AuditEvent& e : store.audit_events()) {
    events.push_back(e.to_json());
    h << e.to_json().dump() << "\n";
  }
  return r.emit({{"events", events}}, h.str());
}

}  // namespace

int run_admin(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SecureExam operator tool", "securexam-admin"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json_output, "Machine-readable JSON on stdout");
  app.add_option("--config", g.config_path, "Service config file");
  app.add_option("--question-store", g.question_store, "Question store directory");
  app.add_option("--candidate-store", g.candidate_store, "Candidate store directory");
  app.add_option("--server", g.server, "Service URL, e.g. http://127.0.0.1:8080");
  app.add_option("--admin-token", g.admin_token, "Admin bearer token");

  KeygenArgs keygen;
  auto* c_keygen = app.add_subcommand("keygen", "Generate a lecturer or center keypair");
  c_keygen->add_option("--role", keygen.role, "lecturer | center")->required();
  c_keygen->add_option("--out", keygen.out, "Private key file")->required();
  c_keygen->add_option("--public-out", keygen.public_out, "Public key file (default <out>.pub)");
  c_keygen->add_flag("--register", keygen.register_key, "Register the public key locally");
  c_keygen->add_flag("--force", keygen.force, "Overwrite an existing key file");

  std::string register_path;
  auto* c_register = app.add_subcommand("register-key", "Register a lecturer public key");
  c_register->add_option("--key", register_path, "Public key file")->required();

  std::string validate_path;
  auto* c_validate = app.add_subcommand("validate", "Validate an exam authoring file");
  c_validate->add_option("exam", validate_path, "Exam JSON")->required();

  SealArgs seal;
  auto* c_seal = app.add_subcommand("seal", "Sign and encrypt an exam");
  c_seal->add_option("--exam", seal.exam)->required();
  c_seal->add_option("--author", seal.author, "Lecturer key file")->required();
  c_seal->add_option("--recipient", seal.recipients, "Center public key (repeatable)")
      ->required();
  c_seal->add_option("--out", seal.out)->required();
  c_seal->add_option("--created-at", seal.created_at, "Manifest time (ISO 8601 or Unix)");

  std::string fingerprint_path;
  auto* c_fp = app.add_subcommand("fingerprint", "Print a package fingerprint");
  c_fp->add_option("package", fingerprint_path)->required();

  std::string roster_path;
  auto* c_ingest = app.add_subcommand("ingest-roster", "Load a roster CSV into the store");
  c_ingest->add_option("--roster", roster_path)->required();

  PlanArgs plan;
  auto* c_plan = app.add_subcommand("plan", "Assign eligible candidates to sittings");
  c_plan->add_option("--roster", plan.roster)->required();
  c_plan->add_option("--cutoff", plan.cutoff, "Minimum eligibility score");
  c_plan->add_option("--capacity", plan.capacity, "Seats per sitting");
  c_plan->add_option("--days", plan.days, "Days available")->capture_default_str();
  c_plan->add_option("--sittings-per-day", plan.sittings_per_day)->capture_default_str();
  c_plan->add_option("--venues", plan.venues, "Concurrent sites")->capture_default_str();
  c_plan->add_option("--profile", plan.profile, "lan-center | byod-distributed")
      ->capture_default_str();
  c_plan->add_option("--exam-id", plan.exam_id)->capture_default_str();
  c_plan->add_option("--start", plan.start, "First sitting start (ISO 8601 or Unix)");
  c_plan->add_option("--out", plan.out, "Write schedule JSON");
  c_plan->add_flag("--install", plan.install, "Store the schedule in the question store");

  std::string open_sitting;
  std::string center_key;
  auto* c_open = app.add_subcommand("open-sitting", "Unseal and open a sitting");
  c_open->add_option("--sitting", open_sitting)->required();
  c_open->add_option("--center-key", center_key, "Center key file sent with the request");

  std::string card_sitting;
  std::vector<std::string> card_regs;
  auto* c_cards = app.add_subcommand("issue-cards", "Issue result scratch cards");
  c_cards->add_option("--sitting", card_sitting)->required();
  c_cards->add_option("--reg-no", card_regs, "Candidates (default: everyone in the sitting)");

  std::string upload_path;
  auto* c_upload = app.add_subcommand("upload", "Upload a sealed package to the service");
  c_upload->add_option("--package", upload_path)->required();

  std::string export_out;
  auto* c_export = app.add_subcommand("export-results", "Export scores as CSV");
  c_export->add_option("--out", export_out);

  auto* c_audit = app.add_subcommand("audit-dump", "Print the audit log");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Runner r(g, out, err);
  if (auto st = r.init(); !st.ok()) return r.fail(st.error());

  if (c_keygen->parsed()) return cmd_keygen(r, keygen);
  if (c_register->parsed()) return cmd_register_key(r, register_path);
  if (c_validate->parsed()) return cmd_validate(r, validate_path);
  if (c_seal->parsed()) return cmd_seal(r, seal);
  if (c_fp->parsed()) return cmd_fingerprint(r, fingerprint_path);
  if (c_ingest->parsed()) return cmd_ingest_roster(r, roster_path);
  if (c_plan->parsed()) return cmd_plan(r, plan);
  if (c_open->parsed()) return cmd_open_sitting(r, open_sitting, center_key);
  if (c_cards->parsed()) return cmd_issue_cards(r, card_sitting, card_regs);
  if (c_upload->parsed()) return cmd_upload(r, upload_path);
  if (c_export->parsed()) return cmd_export_results(r, export_out);
  if (c_audit->parsed()) return cmd_audit_dump(r);
  return kExitUsage;
}

}  // namespace securexam::cli

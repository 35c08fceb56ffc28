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


#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "admin_cli.hpp"
#include "doctest.h"
#include "securexam/service/http.hpp"
#include "service_harness.hpp"

using namespace securexam;
using namespace securexam::testing;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json j() const { return json::parse(out, nullptr, false); }
};

class Cli {
 public:
  Cli() : qs_(dir_.path() / "qs"), cs_(dir_.path() / "cs") {}

  Run operator()(std::vector<std::string> args) const {
    std::vector<std::string> full = {"--question-store", qs_.string(), "--candidate-store",
                                     cs_.string()};
    full.insert(full.end(), args.begin(), args.end());
    std::ostringstream out, err;
    int code = cli::run_admin(full, out, err);
    return {code, out.str(), err.str()};
  }

  std::string file(const std::string& name) const { return (dir_.path() / name).string(); }
  const std::filesystem::path& question_store() const { return qs_; }
  const std::filesystem::path& candidate_store() const { return cs_; }

 private:
  TempDir dir_;
  std::filesystem::path qs_;
  std::filesystem::path cs_;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  Cli cli;
  CHECK(cli({}).code == cli::kExitUsage);
  CHECK(cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(cli({"seal", "--exam", "x"}).code == cli::kExitUsage);
  CHECK(cli({"plan", "--roster", "r.csv", "--capacity", "many"}).code == cli::kExitUsage);
  auto help = cli({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(help.out.find("keygen") != std::string::npos);
}

TEST_CASE("validate reports the summary or the error envelope") {
  Cli cli;
  auto ok = cli({"--json", "validate", fixture_path("tennis/exam.json").string()});
  REQUIRE(ok.code == cli::kExitOk);
  CHECK(ok.j()["exam_id"] == "ITS-2012");
  CHECK(ok.j()["essay"] == 1);
  CHECK(ok.j()["max_total"] == 11);

  auto bad = cli({"--json", "validate", fixture_path("bad_exam/exam.json").string()});
  CHECK(bad.code == cli::kExitOperation);
  CHECK(bad.j()["code"] == "DanglingResourceRef");
  auto human = cli({"validate", fixture_path("bad_exam/exam.json").string()});
  CHECK(human.code == cli::kExitOperation);
  CHECK(human.err.find("DanglingResourceRef") != std::string::npos);
}

TEST_CASE("keygen, seal and a stable fingerprint") {
  Cli cli;
  auto lect = cli({"--json", "keygen", "--role", "lecturer", "--out", cli.file("lect.key"), "--register"});
  REQUIRE(lect.code == 0);
  CHECK(lect.j()["registered"] == true);
  REQUIRE(cli({"keygen", "--role", "center", "--out", cli.file("center.key")}).code == 0);
  CHECK(std::filesystem::exists(cli.file("center.key.pub")));
  auto perms = std::filesystem::status(cli.file("center.key")).permissions();
  CHECK((perms & std::filesystem::perms::group_read) == std::filesystem::perms::none);
  auto again = cli({"keygen", "--role", "center", "--out", cli.file("center.key")});
  CHECK(again.code == cli::kExitOperation);
  CHECK(cli({"keygen", "--role", "dean", "--out", cli.file("x.key")}).code == cli::kExitOperation);

  auto sealed = cli({"--json", "seal", "--exam", fixture_path("putme_sample/exam.json").string(),
                     "--author", cli.file("lect.key"), "--recipient", cli.file("center.key.pub"),
                     "--out", cli.file("exam.sxp"), "--created-at", "2026-10-16T09:00:00Z"});
  REQUIRE(sealed.code == 0);
  auto fp1 = cli({"fingerprint", cli.file("exam.sxp")});
  auto fp2 = cli({"fingerprint", cli.file("exam.sxp")});
  REQUIRE(fp1.code == 0);
  CHECK(fp1.out == fp2.out);
  CHECK(fp1.out == sealed.j()["package_id"].get<std::string>() + "\n");

  auto no_private = cli({"seal", "--exam", fixture_path("putme_sample/exam.json").string(), "--author",
                         cli.file("lect.key.pub"), "--recipient", cli.file("center.key.pub"), "--out",
                         cli.file("y.sxp")});
  CHECK(no_private.code == cli::kExitOperation);
  CHECK(cli({"fingerprint", cli.file("missing.sxp")}).code == cli::kExitOperation);
  CHECK(cli({"register-key", "--key", cli.file("center.key.pub")}).code == cli::kExitOperation);
}

TEST_CASE("plan packs 1200 eligible candidates into three sittings") {
  Cli cli;
  std::string csv = "reg_no,identity_no,full_name,course_code,eligibility_score\n";
  for (int i = 0; i < 1300; ++i) {
    char reg[16];
    std::snprintf(reg, sizeof reg, "U%05d", i);
    int score = i < 1200 ? 180 + i % 100 : 120;
    csv += std::string(reg) + ",NIN" + reg + ",Candidate " + reg + ",PUTME," + std::to_string(score) + "\n";
  }
  write_text(cli.file("roster.csv"), csv);
  auto plan = cli({"--json", "plan", "--roster", cli.file("roster.csv"), "--cutoff", "180", "--capacity",
                   "500", "--exam-id", "PUTME-SAMPLE", "--start", "2026-11-02T09:00:00Z",
                   "--out", cli.file("schedule.json"), "--install"});
  REQUIRE(plan.code == 0);
  CHECK(plan.j()["sittings"] == 3);
  CHECK(plan.j()["eligible"] == 1200);
  std::vector<int> sizes;
  json reply = plan.j();
  for (const auto& s : reply["schedule"]) sizes.push_back(s["assigned"].get<int>());
  CHECK(sizes == std::vector<int>{500, 500, 200});
  CHECK(std::filesystem::exists(cli.file("schedule.json")));
  CHECK(QuestionStore(cli.question_store()).schedule().has_value());

  auto human = cli({"plan", "--roster", cli.file("roster.csv"), "--cutoff", "180", "--capacity", "500"});
  CHECK(human.out.rfind("3 sittings for 1200 eligible candidates", 0) == 0);

  auto tight = cli({"--json", "plan", "--roster", cli.file("roster.csv"), "--cutoff", "180", "--capacity",
                    "100", "--days", "1", "--sittings-per-day", "2"});
  CHECK(tight.code == cli::kExitOperation);
  CHECK(tight.j()["code"] == "InsufficientCapacity");

  auto ingest = cli({"--json", "ingest-roster", "--roster", cli.file("roster.csv")});
  REQUIRE(ingest.code == 0);
  CHECK(ingest.j()["candidates"] == 1300);
  write_text(cli.file("broken.csv"), "reg_no,oops\n");
  CHECK(cli({"ingest-roster", "--roster", cli.file("broken.csv")}).code == cli::kExitOperation);
}

TEST_CASE("online commands talk to a running service") {
  const Timestamp start = at("2026-11-02T10:00:00Z");
  ServiceHarness h(start - Minutes(20));
  auto exam = *load_exam_file(fixture_path("putme_sample/exam.json"));
  auto roster = make_roster(3, exam.course_code());
  PlanOptions o;
  o.capacity = 3;
  o.first_start = start;
  auto schedule = *plan_sittings(roster, exam.exam_id(), o);
  h.install(roster, schedule);
  std::string sid = schedule.sittings[0].sitting_id;

  HttpFrontend front(*h.service);
  int port = front.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread serving([&] { front.serve(); });

  TempDir tmp;
  std::string pkg = (tmp.path() / "p.sxp").string();
  Bytes raw = h.seal(exam);
  REQUIRE(write_file_atomic(pkg, raw).ok());
  auto online = [&](std::vector<std::string> args) {
    std::vector<std::string> full = {"--json", "--server", "http://127.0.0.1:" + std::to_string(port),
                                     "--admin-token", kAdminToken,
                                     "--question-store", h.config.question_store.string(),
                                     "--candidate-store", h.config.candidate_store.string()};
    full.insert(full.end(), args.begin(), args.end());
    std::ostringstream out, err;
    int code = cli::run_admin(full, out, err);
    return Run{code, out.str(), err.str()};
  };

  auto up = online({"upload", "--package", pkg});
  REQUIRE(up.code == 0);
  CHECK(up.j()["package_id"] == package_fingerprint(raw).hex());
  auto dup = online({"upload", "--package", pkg});
  CHECK(dup.code == cli::kExitOperation);
  CHECK(dup.j()["code"] == "DuplicatePackage");

  auto opened = online({"open-sitting", "--sitting", sid});
  REQUIRE(opened.code == 0);
  CHECK(opened.j()["security_image"] == h.service->board().image(sid)->to_json());

  h.clock.set(start);
  for (int i = 0; i < 2; ++i) {
    std::string tok = h.start(roster[static_cast<std::size_t>(i)], sid);
    REQUIRE(h.call("POST", "/v1/sessions/" + tok + "/submit").status == 200);
  }
  // Everyone in the local schedule; the third candidate has no script.
  auto cards = online({"issue-cards", "--sitting", sid});
  CHECK(cards.code == cli::kExitOperation);
  json issued;
  std::istringstream lines(cards.out);
  for (std::string line; std::getline(lines, line);) {
    json j = json::parse(line, nullptr, false);
    if (j.is_object() && j.contains("cards")) issued = j["cards"];
  }
  REQUIRE(issued.size() == 2);
  CHECK(issued[0]["pin"].get<std::string>().size() == 12);
  CHECK(cards.out.find("NoScriptOnRecord") != std::string::npos);

  auto exported = online({"export-results"});
  REQUIRE(exported.code == 0);
  CHECK(exported.j()["rows"] == 2);
  auto audit = online({"audit-dump"});
  REQUIRE(audit.code == 0);
  CHECK(audit.j()["events"].size() == h.service->audit_events().size());

  front.stop();
  serving.join();
  auto down = online({"open-sitting", "--sitting", sid});
  CHECK(down.code == cli::kExitOperation);
  CHECK(down.j()["code"] == "IoError");
}

TEST_CASE("the installed binary reports exit codes") {
  auto status = [](const std::string& args) {
    int raw = std::system((std::string(SECUREXAM_ADMIN_BIN) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("--help") == 0);
  CHECK(status("validate " + fixture_path("putme_sample/exam.json").string()) == 0);
  CHECK(status("validate " + fixture_path("bad_exam/exam.json").string()) == 1);
  CHECK(status("no-such-command") == 2);
}

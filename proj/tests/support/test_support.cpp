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


#include "test_support.hpp"

#include <stdexcept>

#include "securexam/core/bytes.hpp"
#include "securexam/core/digest.hpp"

namespace securexam::testing {

namespace fs = std::filesystem;

fs::path fixture_path(const std::string& relative) {
  return fs::path(SECUREXAM_FIXTURE_DIR) / relative;
}

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "securexam-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) b = static_cast<std::uint8_t>(gen_() & 0xff);
}

namespace {

std::string random_words(std::mt19937_64& gen, int n) {
  static const char* kWords[] = {"network", "matrix",  "river",  "policy", "theorem",
                                 "market",  "protein", "signal", "voltage", "lexicon",
                                 "orbit",   "ledger",  "enzyme", "sonnet", "tariff"};
  std::uniform_int_distribution<int> pick(0, 14);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += kWords[pick(gen)];
  }
  return out;
}

}  // namespace

nlohmann::json random_exam_draft(std::mt19937_64& gen, const ExamShape& shape,
                                 const std::string& exam_id) {
  using nlohmann::json;
  std::string id = exam_id.empty() ? "EX-" + std::to_string(gen() % 1000000) : exam_id;
  json resources = json::array();
  std::vector<std::string> resource_ids;
  for (int r = 0; r < shape.resources; ++r) {
    std::string rid = "res-" + std::to_string(r);
    std::string content = "resource " + rid + " " + random_words(gen, 8);
    resources.push_back({{"id", rid},
                         {"media_kind", "text"},
                         {"digest", sha256(content).hex()},
                         {"content_base64", to_base64(as_bytes(content))}});
    resource_ids.push_back(rid);
  }
  json questions = json::array();
  int total = shape.objective + shape.essay;
  std::uniform_int_distribution<int> nopt(shape.min_options, shape.max_options);
  int objective_left = shape.objective;
  int essay_left = shape.essay;
  for (int q = 0; q < total; ++q) {
    bool objective = essay_left == 0 ||
                     (objective_left > 0 && std::uniform_int_distribution<int>(0, 1)(gen) == 0);
    json jq;
    jq["id"] = "q" + std::to_string(q + 1);
    jq["prompt"] = "Question " + std::to_string(q + 1) + " of " + id + ": " +
                   random_words(gen, 6) + "?";
    jq["resource_refs"] = json::array();
    if (!resource_ids.empty() && gen() % 2 == 0) {
      jq["resource_refs"].push_back(resource_ids[gen() % resource_ids.size()]);
    }
    if (objective) {
      --objective_left;
      jq["kind"] = "objective";
      int n = nopt(gen);
      json opts = json::array();
      for (int o = 0; o < n; ++o) {
        opts.push_back({{"label", std::string(1, static_cast<char>('A' + o))},
                        {"text", random_words(gen, 3)}});
      }
      jq["options"] = opts;
      jq["correct_option"] = std::string(1, static_cast<char>('A' + gen() % n));
    } else {
      --essay_left;
      jq["kind"] = "essay";
      jq["max_marks"] = 1 + static_cast<int>(gen() % 20);
      jq["answer_sentinel"] = std::string(kDefaultAnswerSentinel);
    }
    questions.push_back(jq);
  }
  bool any_ref = false;
  for (const auto& q : questions) any_ref |= !q["resource_refs"].empty();
  return {{"exam_id", id},
          {"title", "Randomized " + id},
          {"course_code", "RND101"},
          {"duration_minutes", shape.duration_minutes},
          {"design", any_ref ? "post-paper" : "paper-replacement"},
          {"questions", questions},
          {"resources", resources}};
}

ValidatedExam random_exam(std::mt19937_64& gen, const ExamShape& shape,
                          const std::string& exam_id) {
  auto r = validate_exam(random_exam_draft(gen, shape, exam_id));
  if (!r.ok()) throw std::runtime_error("random exam invalid: " + r.error().describe());
  return std::move(*r);
}

std::vector<CandidateRecord> make_roster(int count, const std::string& course_code,
                                         const std::string& prefix, int eligibility_score) {
  std::vector<CandidateRecord> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05d", i);
    CandidateRecord c;
    c.reg_no = prefix + buf;
    c.identity_no = "ID" + prefix + buf;
    c.full_name = "Candidate " + std::string(buf);
    c.course_code = course_code;
    c.eligibility_score = eligibility_score;
    out.push_back(std::move(c));
  }
  return out;
}

Timestamp at(const char* iso8601) {
  auto t = parse_timestamp(iso8601);
  if (!t) throw std::runtime_error(std::string("bad timestamp ") + iso8601);
  return *t;
}

}  // namespace securexam::testing

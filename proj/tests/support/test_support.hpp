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


#ifndef SECUREXAM_TESTS_TEST_SUPPORT_HPP_
#define SECUREXAM_TESTS_TEST_SUPPORT_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "securexam/core/random.hpp"
#include "securexam/core/time.hpp"
#include "securexam/exam/model.hpp"
#include "securexam/scheduling/roster.hpp"

namespace securexam::testing {

std::filesystem::path fixture_path(const std::string& relative);

// Removes itself on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

class ManualClock {
 public:
  explicit ManualClock(Timestamp start) : now_(to_unix(start)) {}
  Timestamp now() const { return from_unix(now_.load()); }
  void set(Timestamp t) { now_ = to_unix(t); }
  void advance(Seconds d) { now_ += d.count(); }
  Clock clock() {
    return [this] { return now(); };
  }

 private:
  std::atomic<std::int64_t> now_;
};

// Reproducible byte stream for tests that do not need real entropy.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : gen_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 gen_;
};

struct ExamShape {
  int objective = 5;
  int essay = 0;
  int resources = 0;
  int min_options = 2;
  int max_options = 6;
  int duration_minutes = 30;
};

// Random but valid authoring draft with inline resources.
nlohmann::json random_exam_draft(std::mt19937_64& gen, const ExamShape& shape,
                                 const std::string& exam_id = "");
ValidatedExam random_exam(std::mt19937_64& gen, const ExamShape& shape,
                          const std::string& exam_id = "");

// reg_no = <prefix><index padded to 5>, identity_no = ID<index>.
std::vector<CandidateRecord> make_roster(int count, const std::string& course_code,
                                         const std::string& prefix = "REG",
                                         int eligibility_score = 200);

Timestamp at(const char* iso8601);

}  // namespace securexam::testing

#endif  // SECUREXAM_TESTS_TEST_SUPPORT_HPP_

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

#ifndef SECUREXAM_EXAM_MODEL_HPP_
#define SECUREXAM_EXAM_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/core/bytes.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"

namespace securexam {

enum class QuestionKind { kObjective, kEssay };
enum class MediaKind { kText, kHtmlBundle, kImage, kVideo };
enum class ExamDesign { kPaperReplacement, kPostPaper };

std::string_view to_string(QuestionKind k);
std::string_view to_string(MediaKind k);
std::string_view to_string(ExamDesign d);

inline constexpr std::string_view kDefaultAnswerSentinel =
    "Please type your answer below this line";

struct Option {
  std::string label;
  std::string text;
  friend bool operator==(const Option&, const Option&) = default;
};

struct Question {
  std::string id;
  QuestionKind kind = QuestionKind::kObjective;
  std::string prompt;
  std::vector<std::string> resource_refs;
  // Objective only.
  std::vector<Option> options;
  std::string correct_option;
  // Essay only.
  int max_marks = 1;
  std::string answer_sentinel;

  bool is_objective() const { return kind == QuestionKind::kObjective; }
  bool is_essay() const { return kind == QuestionKind::kEssay; }
  // Objective questions carry an implicit mark of 1.
  int marks() const { return is_objective() ? 1 : max_marks; }
  const Option* find_option(std::string_view label) const;

  friend bool operator==(const Question&, const Question&) = default;
};

struct Resource {
  std::string id;
  MediaKind media_kind = MediaKind::kText;
  Bytes bytes;
  Digest256 declared_digest;
  // Relative path in the authoring directory; informational once loaded.
  std::string path;

  friend bool operator==(const Resource& a, const Resource& b) {
    return a.id == b.id && a.media_kind == b.media_kind && a.bytes == b.bytes &&
           a.declared_digest == b.declared_digest;
  }
};

struct ValidationLimits {
  // Total resource bytes per exam.
  std::size_t max_resource_bytes = 64u << 20;
};

// Resolves a resource `path` from the authoring file to its bytes.
using ResourceLoader = std::function<Result<Bytes>(std::string_view path)>;

class ValidatedExam;

// Checks a raw exam description (authoring JSON) against every question
// paper invariant. Pure: touches nothing except through `loader`.
Result<ValidatedExam> validate_exam(const nlohmann::json& draft,
                                    const ResourceLoader& loader = {},
                                    const ValidationLimits& limits = {});

// A question paper that passed validate_exam. Immutable.
class ValidatedExam {
 public:
  const std::string& exam_id() const { return exam_id_; }
  const std::string& title() const { return title_; }
  const std::string& course_code() const { return course_code_; }
  int duration_minutes() const { return duration_minutes_; }
  ExamDesign design() const { return design_; }
  bool rich_environment() const { return rich_environment_; }
  const std::vector<Question>& questions() const { return questions_; }
  const std::vector<Resource>& resources() const { return resources_; }

  const Question* find_question(std::string_view id) const;
  std::optional<std::size_t> question_index(std::string_view id) const;
  std::size_t objective_count() const;
  std::size_t essay_count() const;
  // Sum of marks over all questions.
  int max_total() const;

  friend bool operator==(const ValidatedExam&, const ValidatedExam&) = default;

 private:
  friend Result<ValidatedExam> validate_exam(const nlohmann::json&,
                                             const ResourceLoader&,
                                             const ValidationLimits&);
  ValidatedExam() = default;

  std::string exam_id_;
  std::string title_;
  std::string course_code_;
  int duration_minutes_ = 0;
  ExamDesign design_ = ExamDesign::kPaperReplacement;
  bool rich_environment_ = false;
  std::vector<Question> questions_;
  std::vector<Resource> resources_;
};

enum class ResourceEncoding {
  // Resources carry `content_base64`; self-contained.
  kInline,
  // Resources carry their authoring `path`; bytes live in sibling files.
  kPath,
};

// Converts back to the authoring JSON. validate_exam(to_draft(e, kInline))
// reproduces `e`.
nlohmann::json to_draft(const ValidatedExam& exam,
                        ResourceEncoding encoding = ResourceEncoding::kInline);

// Sorted keys, no insignificant whitespace, resources inline. This is the
// plaintext that gets digested and sealed.
std::string canonical_bundle(const ValidatedExam& exam);

// Reads an authoring file; resource paths resolve relative to its directory.
Result<ValidatedExam> load_exam_file(const std::filesystem::path& path,
                                     const ValidationLimits& limits = {});

// Objective question id -> correct (canonical) label. Essays are absent.
std::map<std::string, std::string> answer_key(const ValidatedExam& exam);

}  // namespace securexam

#endif  // SECUREXAM_EXAM_MODEL_HPP_

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

#include "securexam/exam/model.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace securexam {

using nlohmann::json;

std::string_view to_string(QuestionKind k) {
  return k == QuestionKind::kObjective ? "objective" : "essay";
}

std::string_view to_string(MediaKind k) {
  switch (k) {
    case MediaKind::kText: return "text";
    case MediaKind::kHtmlBundle: return "html-bundle";
    case MediaKind::kImage: return "image";
    case MediaKind::kVideo: return "video";
  }
  return "text";
}

std::string_view to_string(ExamDesign d) {
  return d == ExamDesign::kPostPaper ? "post-paper" : "paper-replacement";
}

const Option* Question::find_option(std::string_view label) const {
  for (const auto& o : options) {
    if (o.label == label) return &o;
  }
  return nullptr;
}

const Question* ValidatedExam::find_question(std::string_view id) const {
  auto idx = question_index(id);
  return idx ? &questions_[*idx] : nullptr;
}

std::optional<std::size_t> ValidatedExam::question_index(std::string_view id) const {
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    if (questions_[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t ValidatedExam::objective_count() const {
  return static_cast<std::size_t>(std::count_if(
      questions_.begin(), questions_.end(), [](const Question& q) { return q.is_objective(); }));
}

std::size_t ValidatedExam::essay_count() const {
  return questions_.size() - objective_count();
}

int ValidatedExam::max_total() const {
  int total = 0;
  for (const auto& q : questions_) total += q.marks();
  return total;
}

namespace {

Error malformed(std::string what) { return {ErrorCode::kMalformedDraft, std::move(what)}; }

Result<std::string> require_string(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    return malformed(std::string(where) + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

std::optional<MediaKind> parse_media_kind(std::string_view s) {
  if (s == "text") return MediaKind::kText;
  if (s == "html-bundle") return MediaKind::kHtmlBundle;
  if (s == "image") return MediaKind::kImage;
  if (s == "video") return MediaKind::kVideo;
  return std::nullopt;
}

Result<Question> parse_question(const json& q, std::size_t index) {
  const std::string where = "questions[" + std::to_string(index) + "]";
  if (!q.is_object()) return malformed(where + ": not an object");

  Question out;
  auto id = require_string(q, "id", where);
  if (!id) return id.error();
  out.id = *id;
  auto kind = require_string(q, "kind", where);
  if (!kind) return kind.error();
  if (*kind == "objective") {
    out.kind = QuestionKind::kObjective;
  } else if (*kind == "essay") {
    out.kind = QuestionKind::kEssay;
  } else {
    return malformed(where + ": unknown kind '" + *kind + "'");
  }
  auto prompt = require_string(q, "prompt", where);
  if (!prompt) return prompt.error();
  out.prompt = *prompt;

  if (auto it = q.find("resource_refs"); it != q.end()) {
    if (!it->is_array()) return malformed(where + ": resource_refs must be an array");
    for (const auto& r : *it) {
      if (!r.is_string()) return malformed(where + ": resource_refs entries must be strings");
      out.resource_refs.push_back(r.get<std::string>());
    }
  }

  if (out.is_objective()) {
    auto it = q.find("options");
    if (it == q.end() || !it->is_array()) return malformed(where + ": objective question needs options[]");
    for (const auto& o : *it) {
      if (!o.is_object()) return malformed(where + ": option is not an object");
      auto label = require_string(o, "label", where);
      if (!label) return label.error();
      auto text = require_string(o, "text", where);
      if (!text) return text.error();
      out.options.push_back({*label, *text});
    }
    if (auto c = q.find("correct_option"); c != q.end()) {
      if (!c->is_string()) return malformed(where + ": correct_option must be a string");
      out.correct_option = c->get<std::string>();
    }
    out.max_marks = 1;
  } else {
    if (q.contains("options") && !q["options"].empty()) {
      return malformed(where + ": essay questions take no options");
    }
    auto m = q.find("max_marks");
    if (m == q.end() || !m->is_number_integer()) {
      return malformed(where + ": essay question needs integer max_marks");
    }
    out.max_marks = m->get<int>();
    if (auto s = q.find("answer_sentinel"); s != q.end()) {
      if (!s->is_string()) return malformed(where + ": answer_sentinel must be a string");
      out.answer_sentinel = s->get<std::string>();
    } else {
      out.answer_sentinel = std::string(kDefaultAnswerSentinel);
    }
  }
  return out;
}

Result<Resource> parse_resource(const json& r, std::size_t index,
                                const ResourceLoader& loader) {
  const std::string where = "resources[" + std::to_string(index) + "]";
  if (!r.is_object()) return malformed(where + ": not an object");
  Resource out;
  auto id = require_string(r, "id", where);
  if (!id) return id.error();
  out.id = *id;
  auto kind = require_string(r, "media_kind", where);
  if (!kind) return kind.error();
  auto mk = parse_media_kind(*kind);
  if (!mk) return malformed(where + ": unknown media_kind '" + *kind + "'");
  out.media_kind = *mk;

  auto digest_hex = require_string(r, "digest", where);
  if (!digest_hex) return digest_hex.error();
  auto digest = Digest256::from_hex(*digest_hex);
  if (!digest) return malformed(where + ": digest is not 64 hex digits");
  out.declared_digest = *digest;

  if (auto c = r.find("content_base64"); c != r.end()) {
    if (!c->is_string()) return malformed(where + ": content_base64 must be a string");
    auto raw = from_base64(c->get<std::string>());
    if (!raw) return malformed(where + ": content_base64 is not valid base64");
    out.bytes = std::move(*raw);
  } else if (auto p = r.find("path"); p != r.end() && p->is_string()) {
    out.path = p->get<std::string>();
    if (!loader) return malformed(where + ": path given but no resource loader available");
    auto raw = loader(out.path);
    if (!raw) return raw.error();
    out.bytes = std::move(*raw);
  } else {
    return malformed(where + ": needs either path or content_base64");
  }
  if (auto p = r.find("path"); p != r.end() && p->is_string()) out.path = p->get<std::string>();
  return out;
}

}  // namespace

Result<ValidatedExam> validate_exam(const json& draft, const ResourceLoader& loader,
                                    const ValidationLimits& limits) {
  if (!draft.is_object()) return malformed("exam draft must be a JSON object");

  ValidatedExam exam;
  auto exam_id = require_string(draft, "exam_id", "exam");
  if (!exam_id) return exam_id.error();
  exam.exam_id_ = *exam_id;
  if (exam.exam_id_.empty()) return malformed("exam: exam_id is empty");
  auto title = require_string(draft, "title", "exam");
  if (!title) return title.error();
  exam.title_ = *title;
  auto course = require_string(draft, "course_code", "exam");
  if (!course) return course.error();
  exam.course_code_ = *course;

  auto dur = draft.find("duration_minutes");
  if (dur == draft.end() || !dur->is_number_integer()) {
    return malformed("exam: duration_minutes must be an integer");
  }
  if (dur->get<std::int64_t>() <= 0) {
    return Error(ErrorCode::kNonPositiveDuration,
                 "duration_minutes = " + std::to_string(dur->get<std::int64_t>()));
  }
  exam.duration_minutes_ = dur->get<int>();

  auto design = require_string(draft, "design", "exam");
  if (!design) return design.error();
  if (*design == "paper-replacement") {
    exam.design_ = ExamDesign::kPaperReplacement;
  } else if (*design == "post-paper") {
    exam.design_ = ExamDesign::kPostPaper;
  } else {
    return malformed("exam: unknown design '" + *design + "'");
  }
  if (auto rich = draft.find("rich_environment"); rich != draft.end()) {
    if (!rich->is_boolean()) return malformed("exam: rich_environment must be a boolean");
    exam.rich_environment_ = rich->get<bool>();
  }

  auto qs = draft.find("questions");
  if (qs == draft.end() || !qs->is_array()) return malformed("exam: questions must be an array");
  if (qs->empty()) return Error(ErrorCode::kEmptyExam, "exam has no questions");
  for (std::size_t i = 0; i < qs->size(); ++i) {
    auto q = parse_question((*qs)[i], i);
    if (!q) return q.error();
    exam.questions_.push_back(std::move(*q));
  }

  if (auto rs = draft.find("resources"); rs != draft.end()) {
    if (!rs->is_array()) return malformed("exam: resources must be an array");
    for (std::size_t i = 0; i < rs->size(); ++i) {
      auto r = parse_resource((*rs)[i], i, loader);
      if (!r) return r.error();
      exam.resources_.push_back(std::move(*r));
    }
  }

  std::set<std::string> question_ids;
  for (const auto& q : exam.questions_) {
    if (!question_ids.insert(q.id).second) {
      return Error(ErrorCode::kDuplicateId, "question id '" + q.id + "' repeated");
    }
  }
  std::set<std::string> resource_ids;
  std::size_t resource_bytes = 0;
  for (const auto& r : exam.resources_) {
    if (!resource_ids.insert(r.id).second) {
      return Error(ErrorCode::kDuplicateId, "resource id '" + r.id + "' repeated");
    }
    if (sha256(r.bytes) != r.declared_digest) {
      return Error(ErrorCode::kDigestMismatch, "resource '" + r.id + "' bytes do not match digest");
    }
    resource_bytes += r.bytes.size();
  }
  if (resource_bytes > limits.max_resource_bytes) {
    return Error(ErrorCode::kResourceTooLarge,
                 std::to_string(resource_bytes) + " resource bytes exceed cap of " +
                     std::to_string(limits.max_resource_bytes));
  }

  bool any_refs = false;
  for (const auto& q : exam.questions_) {
    if (q.is_objective()) {
      if (q.options.size() < 2 || q.options.size() > 6) {
        return Error(ErrorCode::kBadOptionCount,
                     "question '" + q.id + "' has " + std::to_string(q.options.size()) +
                         " options; 2-6 allowed");
      }
      std::set<std::string> labels;
      for (const auto& o : q.options) {
        if (o.label.empty()) return malformed("question '" + q.id + "' has an empty option label");
        if (!labels.insert(o.label).second) {
          return Error(ErrorCode::kDuplicateId,
                       "question '" + q.id + "' repeats option label '" + o.label + "'");
        }
      }
      if (q.correct_option.empty() || !labels.contains(q.correct_option)) {
        return Error(ErrorCode::kMissingCorrectOption,
                     "question '" + q.id + "' correct_option is not among its options");
      }
    } else if (q.max_marks < 1) {
      return Error(ErrorCode::kNonPositiveMarks, "essay '" + q.id + "' max_marks < 1");
    }
    for (const auto& ref : q.resource_refs) {
      if (!resource_ids.contains(ref)) {
        return Error(ErrorCode::kDanglingResourceRef,
                     "question '" + q.id + "' references missing resource '" + ref + "'");
      }
      any_refs = true;
    }
  }

  const bool needs_post_paper = any_refs || exam.rich_environment_;
  if (needs_post_paper && exam.design_ != ExamDesign::kPostPaper) {
    return Error(ErrorCode::kDesignMismatch,
                 "exam uses bundled resources or a rich environment but is declared paper-replacement");
  }
  if (!needs_post_paper && exam.design_ == ExamDesign::kPostPaper) {
    // A post-paper declaration with no resource refs is itself the
    // rich-environment declaration.
    exam.rich_environment_ = true;
  }
  return exam;
}

json to_draft(const ValidatedExam& exam, ResourceEncoding encoding) {
  json out = json::object();
  out["exam_id"] = exam.exam_id();
  out["title"] = exam.title();
  out["course_code"] = exam.course_code();
  out["duration_minutes"] = exam.duration_minutes();
  out["design"] = std::string(to_string(exam.design()));
  if (exam.rich_environment()) out["rich_environment"] = true;

  json questions = json::array();
  for (const auto& q : exam.questions()) {
    json jq = json::object();
    jq["id"] = q.id;
    jq["kind"] = std::string(to_string(q.kind));
    jq["prompt"] = q.prompt;
    jq["resource_refs"] = q.resource_refs;
    if (q.is_objective()) {
      json opts = json::array();
      for (const auto& o : q.options) opts.push_back({{"label", o.label}, {"text", o.text}});
      jq["options"] = std::move(opts);
      jq["correct_option"] = q.correct_option;
    } else {
      jq["max_marks"] = q.max_marks;
      jq["answer_sentinel"] = q.answer_sentinel;
    }
    questions.push_back(std::move(jq));
  }
  out["questions"] = std::move(questions);

  json resources = json::array();
  for (const auto& r : exam.resources()) {
    json jr = json::object();
    jr["id"] = r.id;
    jr["media_kind"] = std::string(to_string(r.media_kind));
    jr["digest"] = r.declared_digest.hex();
    if (encoding == ResourceEncoding::kInline) {
      jr["content_base64"] = to_base64(r.bytes);
    } else {
      jr["path"] = r.path.empty() ? r.id : r.path;
    }
    resources.push_back(std::move(jr));
  }
  out["resources"] = std::move(resources);
  return out;
}

std::string canonical_bundle(const ValidatedExam& exam) {
  return to_draft(exam, ResourceEncoding::kInline).dump();
}

Result<ValidatedExam> load_exam_file(const std::filesystem::path& path,
                                     const ValidationLimits& limits) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error(ErrorCode::kIoError, "cannot open " + path.string());
  json draft = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (draft.is_discarded()) return malformed(path.string() + " is not valid JSON");

  const std::filesystem::path base = path.parent_path();
  ResourceLoader loader = [base](std::string_view rel) -> Result<Bytes> {
    std::filesystem::path p(rel);
    if (p.is_absolute() || std::find(p.begin(), p.end(), "..") != p.end()) {
      return Error(ErrorCode::kMalformedDraft,
                   "resource path must stay inside the exam directory: " + std::string(rel));
    }
    std::ifstream f(base / p, std::ios::binary);
    if (!f) return Error(ErrorCode::kIoError, "cannot read resource " + (base / p).string());
    return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };
  return validate_exam(draft, loader, limits);
}

std::map<std::string, std::string> answer_key(const ValidatedExam& exam) {
  std::map<std::string, std::string> key;
  for (const auto& q : exam.questions()) {
    if (q.is_objective()) key.emplace(q.id, q.correct_option);
  }
  return key;
}

}  // namespace securexam

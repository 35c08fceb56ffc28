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

#include "securexam/exam/presentation.hpp"

#include <cstdint>
#include <numeric>
#include <utility>

namespace securexam {
namespace {

// Deterministic word stream keyed by a seed digest.
class DigestStream {
 public:
  explicit DigestStream(const Digest256& seed) : seed_(seed) {}

  std::uint64_t next() {
    if (offset_ + 8 > block_.bytes.size()) refill();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(block_.bytes[offset_ + i]) << (8 * i);
    offset_ += 8;
    return v;
  }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    for (;;) {
      std::uint64_t v = next();
      if (v < limit) return v % n;
    }
  }

 private:
  void refill() {
    std::uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
    block_ = Sha256().update(seed_.view()).update(ByteView(ctr)).finish();
    ++counter_;
    offset_ = 0;
  }

  Digest256 seed_;
  Digest256 block_;
  std::size_t offset_ = 32;
  std::uint64_t counter_ = 0;
};

std::vector<std::size_t> shuffled(std::size_t n, DigestStream& stream) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(stream.below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace

PresentationOrder derive_presentation(const ValidatedExam& exam, std::string_view session_token) {
  const std::uint8_t sep = 0;
  PresentationOrder order;
  order.seed_digest = Sha256()
                          .update(exam.exam_id())
                          .update(ByteView(&sep, 1))
                          .update(session_token)
                          .finish();
  DigestStream stream(order.seed_digest);
  const auto& qs = exam.questions();
  order.question_order = shuffled(qs.size(), stream);
  order.option_orders.resize(qs.size());
  for (std::size_t q = 0; q < qs.size(); ++q) {
    if (qs[q].is_objective()) order.option_orders[q] = shuffled(qs[q].options.size(), stream);
  }
  return order;
}

std::string presented_label(std::size_t position) {
  return std::string(1, static_cast<char>('A' + position));
}

std::optional<std::string> canonical_label(const ValidatedExam& exam,
                                           const PresentationOrder& order,
                                           std::size_t question_index,
                                           std::string_view shown) {
  if (question_index >= exam.questions().size()) return std::nullopt;
  const auto& perm = order.option_orders[question_index];
  if (shown.size() != 1 || shown[0] < 'A') return std::nullopt;
  std::size_t pos = static_cast<std::size_t>(shown[0] - 'A');
  if (pos >= perm.size()) return std::nullopt;
  return exam.questions()[question_index].options[perm[pos]].label;
}

std::optional<std::string> shown_label(const ValidatedExam& exam,
                                       const PresentationOrder& order,
                                       std::size_t question_index,
                                       std::string_view canonical) {
  if (question_index >= exam.questions().size()) return std::nullopt;
  const auto& q = exam.questions()[question_index];
  const auto& perm = order.option_orders[question_index];
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    if (q.options[perm[pos]].label == canonical) return presented_label(pos);
  }
  return std::nullopt;
}

nlohmann::json render_paper(const ValidatedExam& exam, const PresentationOrder& order,
                            bool include_resource_bytes) {
  using nlohmann::json;
  json questions = json::array();
  for (std::size_t position = 0; position < order.question_order.size(); ++position) {
    const std::size_t qi = order.question_order[position];
    const Question& q = exam.questions()[qi];
    json jq = {{"number", position + 1},
               {"id", q.id},
               {"kind", std::string(to_string(q.kind))},
               {"prompt", q.prompt},
               {"resource_refs", q.resource_refs},
               {"marks", q.marks()}};
    if (q.is_objective()) {
      json opts = json::array();
      const auto& perm = order.option_orders[qi];
      for (std::size_t p = 0; p < perm.size(); ++p) {
        opts.push_back({{"label", presented_label(p)}, {"text", q.options[perm[p]].text}});
      }
      jq["options"] = std::move(opts);
    } else {
      jq["answer_sentinel"] = q.answer_sentinel;
    }
    questions.push_back(std::move(jq));
  }
  json resources = json::array();
  for (const auto& r : exam.resources()) {
    json jr = {{"id", r.id},
               {"media_kind", std::string(to_string(r.media_kind))},
               {"digest", r.declared_digest.hex()}};
    if (include_resource_bytes) jr["content_base64"] = to_base64(r.bytes);
    resources.push_back(std::move(jr));
  }
  return {{"exam_id", exam.exam_id()},
          {"title", exam.title()},
          {"course_code", exam.course_code()},
          {"duration_minutes", exam.duration_minutes()},
          {"questions", std::move(questions)},
          {"resources", std::move(resources)}};
}

}  // namespace securexam

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

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "securexam/scheduling/planner.hpp"
#include "securexam/scheduling/policy.hpp"
#include "securexam/scheduling/roster.hpp"

namespace securexam {

using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

// --- roster ---

Result<std::vector<CandidateRecord>> parse_roster_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CandidateRecord> out;
  std::set<std::string> reg_nos;
  std::set<std::pair<std::string, std::string>> pairs;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kRosterHeader) {
        return Error(ErrorCode::kMalformedRoster,
                     "expected header '" + std::string(kRosterHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    auto fields = split(line, ',');
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 5) {
      return Error(ErrorCode::kMalformedRoster, where + ": expected 5 fields");
    }
    CandidateRecord rec{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                        std::string(fields[3]), 0, {}};
    auto [ptr, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(),
                                     rec.eligibility_score);
    if (ec != std::errc{} || ptr != fields[4].data() + fields[4].size()) {
      return Error(ErrorCode::kMalformedRoster, where + ": eligibility_score is not an integer");
    }
    if (rec.reg_no.empty() || rec.identity_no.empty()) {
      return Error(ErrorCode::kMalformedRoster, where + ": empty reg_no or identity_no");
    }
    if (!pairs.emplace(rec.reg_no, rec.identity_no).second || !reg_nos.insert(rec.reg_no).second) {
      return Error(ErrorCode::kDuplicateCandidate, where + ": reg_no " + rec.reg_no + " repeated");
    }
    out.push_back(std::move(rec));
  }
  if (!header_seen) return Error(ErrorCode::kMalformedRoster, "empty roster file");
  return out;
}

std::string roster_to_csv(const std::vector<CandidateRecord>& roster) {
  std::string out(kRosterHeader);
  out += '\n';
  for (const auto& c : roster) {
    out += c.reg_no + ',' + c.identity_no + ',' + c.full_name + ',' + c.course_code + ',' +
           std::to_string(c.eligibility_score) + '\n';
  }
  return out;
}

json roster_to_json(const std::vector<CandidateRecord>& roster) {
  json arr = json::array();
  for (const auto& c : roster) {
    arr.push_back({{"reg_no", c.reg_no},
                   {"identity_no", c.identity_no},
                   {"full_name", c.full_name},
                   {"course_code", c.course_code},
                   {"eligibility_score", c.eligibility_score},
                   {"enrollment_token", to_base64(c.enrollment_token)}});
  }
  return arr;
}

Result<std::vector<CandidateRecord>> roster_from_json(const json& j) {
  if (!j.is_array()) return Error(ErrorCode::kMalformedRoster, "roster must be an array");
  std::vector<CandidateRecord> out;
  try {
    for (const auto& e : j) {
      CandidateRecord c;
      c.reg_no = e.at("reg_no").get<std::string>();
      c.identity_no = e.at("identity_no").get<std::string>();
      c.full_name = e.at("full_name").get<std::string>();
      c.course_code = e.at("course_code").get<std::string>();
      c.eligibility_score = e.at("eligibility_score").get<int>();
      if (auto t = e.find("enrollment_token"); t != e.end()) {
        auto raw = from_base64(t->get<std::string>());
        if (!raw) return Error(ErrorCode::kMalformedRoster, "bad enrollment_token");
        c.enrollment_token = std::move(*raw);
      }
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    return Error(ErrorCode::kMalformedRoster, e.what());
  }
  return out;
}

std::vector<CandidateRecord> filter_eligible(const std::vector<CandidateRecord>& roster,
                                             int cutoff) {
  std::vector<CandidateRecord> out;
  std::copy_if(roster.begin(), roster.end(), std::back_inserter(out),
               [cutoff](const CandidateRecord& c) { return c.eligibility_score >= cutoff; });
  return out;
}

// --- planner ---

std::string_view to_string(VenueProfile p) {
  return p == VenueProfile::kByodDistributed ? "byod-distributed" : "lan-center";
}

std::optional<VenueProfile> venue_profile_from_string(std::string_view s) {
  if (s == "lan-center") return VenueProfile::kLanCenter;
  if (s == "byod-distributed") return VenueProfile::kByodDistributed;
  return std::nullopt;
}

bool Sitting::has(std::string_view reg_no) const {
  return std::find(assigned.begin(), assigned.end(), reg_no) != assigned.end();
}

const Sitting* Schedule::find(std::string_view sitting_id) const {
  for (const auto& s : sittings) {
    if (s.sitting_id == sitting_id) return &s;
  }
  return nullptr;
}

Result<Schedule> plan_sittings(const std::vector<CandidateRecord>& eligible,
                               std::string_view exam_id, const PlanOptions& o) {
  if (o.capacity <= 0 || o.days_available <= 0 || o.sittings_per_day <= 0 || o.venues <= 0) {
    return Error(ErrorCode::kInvalidArgument,
                 "capacity, days_available, sittings_per_day and venues must be positive");
  }
  std::vector<const CandidateRecord*> order;
  order.reserve(eligible.size());
  for (const auto& c : eligible) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::tie(a->course_code, a->reg_no) < std::tie(b->course_code, b->reg_no);
  });

  // Course groups in sorted order; each becomes ceil(n / capacity) sittings.
  std::vector<std::pair<std::string, std::vector<std::string>>> chunks;
  for (std::size_t i = 0; i < order.size();) {
    const std::string& course = order[i]->course_code;
    std::size_t j = i;
    while (j < order.size() && order[j]->course_code == course) ++j;
    for (std::size_t k = i; k < j; k += static_cast<std::size_t>(o.capacity)) {
      std::vector<std::string> seats;
      for (std::size_t m = k; m < std::min(j, k + static_cast<std::size_t>(o.capacity)); ++m) {
        seats.push_back(order[m]->reg_no);
      }
      chunks.emplace_back(course, std::move(seats));
    }
    i = j;
  }

  const long long per_day = static_cast<long long>(o.sittings_per_day) * o.venues;
  const long long available = per_day * o.days_available;
  const long long needed = static_cast<long long>(chunks.size());
  if (needed > available) {
    const long long minimal_days = (needed + per_day - 1) / per_day;
    return Error(ErrorCode::kInsufficientCapacity,
                 std::to_string(needed) + " sittings needed but only " +
                     std::to_string(available) + " available; " +
                     std::to_string(minimal_days) + " days would suffice")
        .with_details({{"minimal_days", minimal_days}, {"sittings_needed", needed}});
  }

  Schedule schedule;
  schedule.venue_profile = o.venue_profile;
  for (std::size_t k = 0; k < chunks.size(); ++k) {
    const long long idx = static_cast<long long>(k);
    Sitting s;
    s.venue_index = static_cast<int>(idx % o.venues);
    s.slot_index = static_cast<int>((idx / o.venues) % o.sittings_per_day);
    s.day_index = static_cast<int>(idx / per_day);
    s.sitting_id = std::string(exam_id) + "-d" + std::to_string(s.day_index) + "-s" +
                   std::to_string(s.slot_index) + "-v" + std::to_string(s.venue_index);
    s.exam_id = std::string(exam_id);
    s.course_code = chunks[k].first;
    s.start_time = o.first_start + s.day_index * o.day_stride + s.slot_index * o.slot_stride;
    s.length = o.sitting_length;
    s.capacity = o.capacity;
    s.assigned = std::move(chunks[k].second);
    schedule.sittings.push_back(std::move(s));
  }
  return schedule;
}

Status check_schedule(const Schedule& schedule, const std::vector<CandidateRecord>& eligible) {
  std::map<std::string, const CandidateRecord*> by_reg;
  for (const auto& c : eligible) by_reg[c.reg_no] = &c;
  std::set<std::string> seen;
  std::set<std::string> ids;
  for (const auto& s : schedule.sittings) {
    if (!ids.insert(s.sitting_id).second) {
      return {ErrorCode::kDuplicateId, "sitting id repeated: " + s.sitting_id};
    }
    if (s.capacity <= 0 || static_cast<int>(s.assigned.size()) > s.capacity) {
      return {ErrorCode::kInsufficientCapacity, s.sitting_id + " exceeds its capacity"};
    }
    for (const auto& reg : s.assigned) {
      auto it = by_reg.find(reg);
      if (it == by_reg.end()) return {ErrorCode::kUnknownCandidate, reg + " is not eligible"};
      if (it->second->course_code != s.course_code) {
        return {ErrorCode::kInvalidArgument, s.sitting_id + " mixes courses"};
      }
      if (!seen.insert(reg).second) {
        return {ErrorCode::kDuplicateCandidate, reg + " is assigned twice"};
      }
    }
  }
  if (seen.size() != by_reg.size()) {
    return {ErrorCode::kInvalidArgument, "some eligible candidates have no sitting"};
  }
  return {};
}

json schedule_to_json(const Schedule& schedule) {
  json sittings = json::array();
  for (const auto& s : schedule.sittings) {
    sittings.push_back({{"sitting_id", s.sitting_id},
                        {"exam_id", s.exam_id},
                        {"course_code", s.course_code},
                        {"day_index", s.day_index},
                        {"slot_index", s.slot_index},
                        {"venue_index", s.venue_index},
                        {"start_time", to_unix(s.start_time)},
                        {"length_minutes", s.length.count()},
                        {"capacity", s.capacity},
                        {"assigned", s.assigned}});
  }
  return {{"venue_profile", std::string(to_string(schedule.venue_profile))},
          {"sittings", std::move(sittings)}};
}

Result<Schedule> schedule_from_json(const json& j) {
  Schedule schedule;
  try {
    auto profile = venue_profile_from_string(j.at("venue_profile").get<std::string>());
    if (!profile) return Error(ErrorCode::kMalformedRequest, "unknown venue_profile");
    schedule.venue_profile = *profile;
    for (const auto& e : j.at("sittings")) {
      Sitting s;
      s.sitting_id = e.at("sitting_id").get<std::string>();
      s.exam_id = e.at("exam_id").get<std::string>();
      s.course_code = e.at("course_code").get<std::string>();
      s.day_index = e.at("day_index").get<int>();
      s.slot_index = e.value("slot_index", 0);
      s.venue_index = e.value("venue_index", 0);
      s.start_time = from_unix(e.at("start_time").get<std::int64_t>());
      s.length = Minutes(e.value("length_minutes", 30));
      s.capacity = e.at("capacity").get<int>();
      s.assigned = e.at("assigned").get<std::vector<std::string>>();
      schedule.sittings.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    return Error(ErrorCode::kMalformedRequest, std::string("schedule: ") + e.what());
  }
  return schedule;
}

// --- policy ---

std::string_view to_string(ExamMode m) {
  return m == ExamMode::kElectronic ? "electronic" : "paper";
}

ExamMode exam_mode(const ExamModePolicy& policy) {
  if (policy.level == CourseLevel::kOther) return policy.lecturer_preference;
  if (policy.enrolment > kOptOutEnrolmentLimit) return ExamMode::kElectronic;
  return policy.lecturer_preference;
}

}  // namespace securexam

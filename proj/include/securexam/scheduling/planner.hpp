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

#ifndef SECUREXAM_SCHEDULING_PLANNER_HPP_
#define SECUREXAM_SCHEDULING_PLANNER_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/time.hpp"
#include "securexam/scheduling/roster.hpp"

namespace securexam {

enum class VenueProfile { kLanCenter, kByodDistributed };

std::string_view to_string(VenueProfile p);
std::optional<VenueProfile> venue_profile_from_string(std::string_view s);

// Seats in one hall at the reference LAN center.
inline constexpr int kLanCenterCapacity = 500;

struct Sitting {
  std::string sitting_id;
  std::string exam_id;
  std::string course_code;
  int day_index = 0;
  int slot_index = 0;
  int venue_index = 0;
  Timestamp start_time;
  Minutes length{30};
  int capacity = 0;
  std::vector<std::string> assigned;  // reg_no

  Timestamp end_time() const { return start_time + length; }
  bool has(std::string_view reg_no) const;

  friend bool operator==(const Sitting&, const Sitting&) = default;
};

struct Schedule {
  std::vector<Sitting> sittings;
  VenueProfile venue_profile = VenueProfile::kLanCenter;

  const Sitting* find(std::string_view sitting_id) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct PlanOptions {
  int capacity = kLanCenterCapacity;
  int days_available = 1;
  int sittings_per_day = 1;
  // Concurrent sites per slot; 1 for a single LAN center.
  int venues = 1;
  VenueProfile venue_profile = VenueProfile::kLanCenter;
  Timestamp first_start;
  Hours day_stride{24};
  Minutes slot_stride{60};
  Minutes sitting_length{30};
};

// Groups candidates by course_code and packs each group greedily into
// sittings of at most `capacity`, in (course_code, reg_no) order. Sitting k
// goes to venue k % venues, then slot, then day. Fails with
// InsufficientCapacity (details.minimal_days) when the slots run out.
Result<Schedule> plan_sittings(const std::vector<CandidateRecord>& eligible,
                               std::string_view exam_id, const PlanOptions& options);

// Checks every Schedule invariant against the roster it was planned from.
// Returns the first violation.
Status check_schedule(const Schedule& schedule, const std::vector<CandidateRecord>& eligible);

nlohmann::json schedule_to_json(const Schedule& schedule);
Result<Schedule> schedule_from_json(const nlohmann::json& j);

}  // namespace securexam

#endif  // SECUREXAM_SCHEDULING_PLANNER_HPP_

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

#ifndef SECUREXAM_CORE_TIME_HPP_
#define SECUREXAM_CORE_TIME_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace securexam {

// Server time, whole seconds since the Unix epoch. The server clock is the
// only time authority; client-reported times are informational.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;
using Minutes = std::chrono::minutes;
using Hours = std::chrono::hours;

using Clock = std::function<Timestamp()>;

inline std::int64_t to_unix(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_unix(std::int64_t s) { return Timestamp(Seconds(s)); }

inline Timestamp system_now() {
  return std::chrono::time_point_cast<Seconds>(std::chrono::system_clock::now());
}

// "2026-10-16T10:00:00Z"
std::string to_iso8601(Timestamp t);
// Accepts the form produced by to_iso8601, or plain Unix seconds.
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace securexam

#endif  // SECUREXAM_CORE_TIME_HPP_

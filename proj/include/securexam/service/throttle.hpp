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

#ifndef SECUREXAM_SERVICE_THROTTLE_HPP_
#define SECUREXAM_SERVICE_THROTTLE_HPP_

#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "securexam/core/time.hpp"

namespace securexam {

// Sliding-window failure counter per identity.
class FailureThrottle {
 public:
  FailureThrottle(int max_failures, Seconds window) : max_failures_(max_failures), window_(window) {}

  bool throttled(std::string_view key, Timestamp now);
  void record_failure(std::string_view key, Timestamp now);

 private:
  void prune(std::deque<Timestamp>& q, Timestamp now) const;

  int max_failures_;
  Seconds window_;
  std::mutex mu_;
  std::map<std::string, std::deque<Timestamp>, std::less<>> failures_;
};

}  // namespace securexam

#endif  // SECUREXAM_SERVICE_THROTTLE_HPP_

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

#include "securexam/service/throttle.hpp"

namespace securexam {

void FailureThrottle::prune(std::deque<Timestamp>& q, Timestamp now) const {
  while (!q.empty() && q.front() <= now - window_) q.pop_front();
}

bool FailureThrottle::throttled(std::string_view key, Timestamp now) {
  std::lock_guard lock(mu_);
  auto it = failures_.find(key);
  if (it == failures_.end()) return false;
  prune(it->second, now);
  return static_cast<int>(it->second.size()) >= max_failures_;
}

void FailureThrottle::record_failure(std::string_view key, Timestamp now) {
  std::lock_guard lock(mu_);
  auto it = failures_.find(key);
  if (it == failures_.end()) it = failures_.emplace(std::string(key), std::deque<Timestamp>{}).first;
  prune(it->second, now);
  it->second.push_back(now);
}

}  // namespace securexam

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

#ifndef SECUREXAM_SERVICE_CONFIG_HPP_
#define SECUREXAM_SERVICE_CONFIG_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"
#include "securexam/core/error.hpp"

namespace securexam {

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  std::filesystem::path question_store = "data/question_store";
  std::filesystem::path candidate_store = "data/candidate_store";
  int embargo_hours = 24;
  int pre_exam_window_minutes = 60;
  int admission_lead_minutes = 30;
  int default_capacity = 500;
  std::string admin_token;
  std::filesystem::path center_key_path;
  std::string sanctioned_environment_digest;  // hex SHA-256 of the client bundle
  int throttle_failures = 6;
  int throttle_window_seconds = 60;

  nlohmann::json to_json() const;
  static Result<ServiceConfig> from_json(const nlohmann::json& j);

  // SECUREXAM_PORT, SECUREXAM_BIND, SECUREXAM_QUESTION_STORE,
  // SECUREXAM_CANDIDATE_STORE, SECUREXAM_EMBARGO_HOURS,
  // SECUREXAM_PRE_EXAM_WINDOW_MINUTES, SECUREXAM_ADMISSION_LEAD_MINUTES,
  // SECUREXAM_DEFAULT_CAPACITY, SECUREXAM_ADMIN_TOKEN, SECUREXAM_CENTER_KEY,
  // SECUREXAM_ENVIRONMENT_DIGEST.
  using EnvLookup = std::function<std::optional<std::string>(const char*)>;
  Status apply_env(const EnvLookup& lookup);
};

// Reads a JSON config file (missing file -> defaults) and applies process
// environment overrides.
Result<ServiceConfig> load_service_config(const std::optional<std::filesystem::path>& path);

}  // namespace securexam

#endif  // SECUREXAM_SERVICE_CONFIG_HPP_

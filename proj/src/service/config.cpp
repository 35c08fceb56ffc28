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

#include "securexam/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace securexam {

using nlohmann::json;

json ServiceConfig::to_json() const {
  return {{"bind_address", bind_address},
          {"port", port},
          {"question_store", question_store.string()},
          {"candidate_store", candidate_store.string()},
          {"embargo_hours", embargo_hours},
          {"pre_exam_window_minutes", pre_exam_window_minutes},
          {"admission_lead_minutes", admission_lead_minutes},
          {"default_capacity", default_capacity},
          {"admin_token", admin_token},
          {"center_key_path", center_key_path.string()},
          {"sanctioned_environment_digest", sanctioned_environment_digest},
          {"throttle_failures", throttle_failures},
          {"throttle_window_seconds", throttle_window_seconds}};
}

Result<ServiceConfig> ServiceConfig::from_json(const json& j) {
  ServiceConfig c;
  if (!j.is_object()) return Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  try {
    c.bind_address = j.value("bind_address", c.bind_address);
    c.port = j.value("port", c.port);
    c.question_store = j.value("question_store", c.question_store.string());
    c.candidate_store = j.value("candidate_store", c.candidate_store.string());
    c.embargo_hours = j.value("embargo_hours", c.embargo_hours);
    c.pre_exam_window_minutes = j.value("pre_exam_window_minutes", c.pre_exam_window_minutes);
    c.admission_lead_minutes = j.value("admission_lead_minutes", c.admission_lead_minutes);
    c.default_capacity = j.value("default_capacity", c.default_capacity);
    c.admin_token = j.value("admin_token", c.admin_token);
    c.center_key_path = j.value("center_key_path", c.center_key_path.string());
    c.sanctioned_environment_digest =
        j.value("sanctioned_environment_digest", c.sanctioned_environment_digest);
    c.throttle_failures = j.value("throttle_failures", c.throttle_failures);
    c.throttle_window_seconds = j.value("throttle_window_seconds", c.throttle_window_seconds);
  } catch (const json::exception& e) {
    return Error(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

Status ServiceConfig::apply_env(const EnvLookup& lookup) {
  auto as_int = [&](const char* name, int& field) -> Status {
    auto v = lookup(name);
    if (!v) return {};
    int parsed = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
      return {ErrorCode::kInvalidArgument, std::string(name) + " is not an integer"};
    }
    field = parsed;
    return {};
  };
  auto as_string = [&](const char* name, std::string& field) {
    if (auto v = lookup(name)) field = *v;
  };
  auto as_path = [&](const char* name, std::filesystem::path& field) {
    if (auto v = lookup(name)) field = *v;
  };
  for (auto [name, field] : {std::pair{"SECUREXAM_PORT", &port},
                             std::pair{"SECUREXAM_EMBARGO_HOURS", &embargo_hours},
                             std::pair{"SECUREXAM_PRE_EXAM_WINDOW_MINUTES", &pre_exam_window_minutes},
                             std::pair{"SECUREXAM_ADMISSION_LEAD_MINUTES", &admission_lead_minutes},
                             std::pair{"SECUREXAM_DEFAULT_CAPACITY", &default_capacity}}) {
    if (auto st = as_int(name, *field); !st) return st;
  }
  as_string("SECUREXAM_BIND", bind_address);
  as_string("SECUREXAM_ADMIN_TOKEN", admin_token);
  as_string("SECUREXAM_ENVIRONMENT_DIGEST", sanctioned_environment_digest);
  as_path("SECUREXAM_QUESTION_STORE", question_store);
  as_path("SECUREXAM_CANDIDATE_STORE", candidate_store);
  as_path("SECUREXAM_CENTER_KEY", center_key_path);
  return {};
}

Result<ServiceConfig> load_service_config(const std::optional<std::filesystem::path>& path) {
  ServiceConfig config;
  if (path) {
    std::ifstream in(*path);
    if (!in) return Error(ErrorCode::kIoError, "cannot open config " + path->string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) return Error(ErrorCode::kInvalidArgument, path->string() + " is not JSON");
    auto parsed = ServiceConfig::from_json(j);
    if (!parsed) return parsed.error();
    config = std::move(*parsed);
  }
  auto st = config.apply_env([](const char* name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
  });
  if (!st) return st.error();
  return config;
}

}  // namespace securexam

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


#include "securexam/service/http.hpp"

#include <chrono>

#include "httplib.h"

namespace securexam {

namespace {

std::string bearer_of(const httplib::Request& req) {
  constexpr std::string_view kPrefix = "Bearer ";
  std::string auth = req.get_header_value("Authorization");
  if (auth.size() > kPrefix.size() && auth.compare(0, kPrefix.size(), kPrefix) == 0) {
    return auth.substr(kPrefix.size());
  }
  return {};
}

}  // namespace

HttpFrontend::HttpFrontend(ExamService& service, Seconds sweep_interval)
    : service_(service),
      sweep_interval_(sweep_interval),
      server_(std::make_unique<httplib::Server>()) {
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api{req.method, req.path, req.body, bearer_of(req)};
    ApiResponse out = service_.handle(api);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server_->Get(R"(/v1/.*)", dispatch);
  server_->Post(R"(/v1/.*)", dispatch);
  server_->Put(R"(/v1/.*)", dispatch);
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    Error e(res.status == 404 ? ErrorCode::kNotFound : ErrorCode::kMalformedRequest,
            "no such route");
    res.set_content(error_envelope(e).dump(), "application/json");
  });
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpFrontend::serve() {
  running_ = true;
  sweeper_ = std::thread([this] {
    auto next = std::chrono::steady_clock::now() + sweep_interval_;
    while (running_) {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      if (std::chrono::steady_clock::now() < next) continue;
      service_.sweep();
      next = std::chrono::steady_clock::now() + sweep_interval_;
    }
  });
  bool ok = server_->listen_after_bind();
  running_ = false;
  if (sweeper_.joinable()) sweeper_.join();
  return ok;
}

void HttpFrontend::stop() {
  running_ = false;
  if (server_) server_->stop();
}

}  // namespace securexam

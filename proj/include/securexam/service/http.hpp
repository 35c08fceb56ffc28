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

#ifndef SECUREXAM_SERVICE_HTTP_HPP_
#define SECUREXAM_SERVICE_HTTP_HPP_

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "securexam/service/service.hpp"

namespace httplib {
class Server;
}

namespace securexam {

// HTTP/1.1 + JSON binding of ExamService. Also runs the periodic expiry
// sweep while listening.
class HttpFrontend {
 public:
  explicit HttpFrontend(ExamService& service, Seconds sweep_interval = Seconds(1));
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool serve();
  void stop();

 private:
  ExamService& service_;
  Seconds sweep_interval_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> running_{false};
  std::thread sweeper_;
};

}  // namespace securexam

#endif  // SECUREXAM_SERVICE_HTTP_HPP_

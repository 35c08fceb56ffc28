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


#include <csignal>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "securexam/service/config.hpp"
#include "securexam/service/http.hpp"
#include "securexam/service/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"SecureExam service", "securexam-server"};
  std::string config_path;
  int port = -1;
  std::string bind;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--port", port, "Override the configured port (0 = ephemeral)");
  app.add_option("--bind", bind, "Override the bind address");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::optional<std::filesystem::path> path;
  if (!config_path.empty()) path = config_path;
  auto cfg = securexam::load_service_config(path);
  if (!cfg.ok()) {
    std::cerr << securexam::error_envelope(cfg.error()).dump() << "\n";
    return 1;
  }
  if (port >= 0) cfg->port = port;
  if (!bind.empty()) cfg->bind_address = bind;

  // Handle SIGINT/SIGTERM on a dedicated thread so stop() runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  securexam::ExamService service(*cfg, securexam::system_now);
  securexam::HttpFrontend frontend(service);
  int bound = frontend.bind(cfg->bind_address, cfg->port);
  if (bound < 0) {
    std::cerr << "cannot bind " << cfg->bind_address << ":" << cfg->port << "\n";
    return 1;
  }
  std::cout << "listening on " << cfg->bind_address << ":" << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    frontend.stop();
  });
  waiter.detach();
  return frontend.serve() ? 0 : 1;
}

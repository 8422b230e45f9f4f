// Copyright 2026 The HITL Control Plane Authors
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

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "hitl/http_frontend.hpp"
#include "hitl/service.hpp"

namespace {
std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HITL decision service"};
  std::string config_path;
  std::optional<int> port;
  std::optional<std::string> bind;
  app.add_option("-c,--config", config_path, "service config (JSON)")->check(CLI::ExistingFile);
  app.add_option("-p,--port", port, "override the configured port (0 = any)");
  app.add_option("--bind", bind, "override the configured bind address");
  CLI11_PARSE(app, argc, argv);

  using namespace hitl::service;
  try {
    ServiceConfig config = config_path.empty() ? ServiceConfig{} : load_service_config(config_path);
    if (port) config.port = *port;
    if (bind) config.bind_address = *bind;

    auto service = HitlService::open(config);
    HttpFrontend frontend(*service, config.bind_address, config.port);
    frontend.start();

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "hitl-server listening on " << frontend.base_url() << " ("
              << service->snapshot_all().size() << " requests replayed from "
              << config.storage_path.string() << ")" << std::endl;
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    frontend.stop();
  } catch (const std::exception& e) {
    std::cerr << "hitl-server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

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

#include <iostream>

#include <CLI11.hpp>

#include "hitl/sim/runner.hpp"

int main(int argc, char** argv) {
  using namespace hitl::sim;

  CLI::App app{"Agent-side simulator for the HITL decision service"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run a scenario against a service");

  std::string scenario_path;
  std::string service_url;
  std::string mode;
  std::string format = "text";
  RunOptions options;
  long timeout_ms = options.timeout.count();
  run->add_option("--scenario", scenario_path, "scenario file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--service", service_url, "service base URL, e.g. http://127.0.0.1:8080")
      ->required();
  run->add_option("--mode", mode, "force every request into one mode")
      ->check(CLI::IsMember({"poll", "callback"}));
  run->add_option("--parallel", options.parallel, "concurrent requests")
      ->check(CLI::PositiveNumber);
  run->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  run->add_option("--timeout-ms", timeout_ms, "scenario deadline")->check(CLI::PositiveNumber);
  run->add_flag("!--no-receiver", options.receiver_enabled,
                "do not open a callback listener (poll-only runs)");
  run->add_option("--inject-callback-failures", options.inject_callback_failures,
                  "answer the first N callbacks per request with HTTP 500");
  CLI11_PARSE(app, argc, argv);

  if (!mode.empty()) options.mode_override = parse_mode(mode);
  options.timeout = std::chrono::milliseconds{timeout_ms};
  const auto fmt = format == "json" ? ReportFormat::Json : ReportFormat::Text;

  try {
    const auto spec = load_scenario(scenario_path);
    const auto report = run_scenario(spec, service_url, options);
    std::cout << emit_report(report, fmt);
    return report.all_terminal() ? 0 : 1;
  } catch (const ScenarioTimeout& e) {
    std::cout << emit_report(e.report, fmt);
    std::cerr << "hitl-sim: " << e.what() << "\n";
  } catch (const ServiceUnreachable& e) {
    std::cerr << "hitl-sim: service unreachable: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "hitl-sim: " << e.what() << "\n";
  }
  return 1;
}

// Copyright 2026 The flowrej Authors
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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "flowrej/commands.h"
#include "flowrej/error.h"
#include "flowrej/report.h"

namespace {

using flowrej::Rational;

struct Flags {
  std::string out;
  std::optional<std::string> epsilon;
  std::optional<std::uint64_t> seed;
  std::size_t oracle_limit = flowrej::kDefaultOracleLimit;
  bool oracle = false;
  std::string events;
  std::string certificate;
  std::size_t n = 10;
  int m = 2;
  std::pair<std::int64_t, std::int64_t> p_range{1, 10};
  std::pair<std::int64_t, std::int64_t> w_range{1, 10};
  std::int64_t mean_interarrival = 2;
  std::size_t count = 1;
  std::vector<std::string> epsilons{"1/2"};
  std::size_t threads = 0;
  bool monotonicity = false;
  std::string instance;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online weighted flow-time scheduling with rejection: simulator and verifier"};
  app.set_version_flag("--version", flowrej::kToolVersion);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--out", f.out, "Output path (default: stdout)");
  app.add_option("--epsilon", f.epsilon, "Rejection parameter as a rational, e.g. 1/2");
  app.add_option("--seed", f.seed, "Generator seed");
  app.add_option("--oracle-limit", f.oracle_limit, "Largest job count for the exhaustive oracle")
      ->capture_default_str();
  app.add_flag("--oracle", f.oracle, "run/sweep: attach the oracle comparison");
  app.add_option("--events", f.events, "run: write the event log here");
  app.add_option("--certificate", f.certificate, "run: write the dual certificate here");
  app.add_option("--n", f.n, "Jobs per generated instance")->capture_default_str();
  app.add_option("--m", f.m, "Machines per generated instance")->capture_default_str();
  app.add_option("--p-range", f.p_range, "Processing time range: LO HI");
  app.add_option("--w-range", f.w_range, "Weight range: LO HI");
  app.add_option("--mean-interarrival", f.mean_interarrival, "Mean release gap")
      ->capture_default_str();
  app.add_option("--count", f.count, "sweep: instances per epsilon")->capture_default_str();
  app.add_option("--epsilons", f.epsilons, "sweep: comma separated epsilon list")->delimiter(',');
  app.add_option("--threads", f.threads, "sweep: worker threads (0: all cores)");
  app.add_flag("--monotonicity", f.monotonicity, "sweep: include the prefix-replay check");

  auto* run = app.add_subcommand("run", "Simulate, certify and check one instance");
  run->add_option("instance", f.instance, "Instance file (JSON Lines)")->required();
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  auto* verify = app.add_subcommand("verify", "Run every check, including monotonicity");
  verify->add_option("instance", f.instance, "Instance file (JSON Lines)")->required();
  auto* sweep = app.add_subcommand("sweep", "Generate and check many instances");
  auto* oracle = app.add_subcommand("oracle", "Compare against the exhaustive optimum");
  oracle->add_option("instance", f.instance, "Instance file (JSON Lines)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return flowrej::kExitUsage;
  }

  flowrej::CommandOptions options;
  flowrej::WorkloadSpec workload;
  std::vector<Rational> epsilons;
  try {
    options.out = f.out;
    if (f.epsilon) options.epsilon = Rational::parse(*f.epsilon);
    options.seed = f.seed;
    options.oracle_limit = f.oracle_limit;
    options.oracle = f.oracle;
    options.events_out = f.events;
    options.certificate_out = f.certificate;
    workload.n = f.n;
    workload.m = f.m;
    workload.p_min = f.p_range.first;
    workload.p_max = f.p_range.second;
    workload.w_min = f.w_range.first;
    workload.w_max = f.w_range.second;
    workload.mean_interarrival = f.mean_interarrival;
    if (f.seed) workload.seed = *f.seed;
    if (options.epsilon) workload.epsilon = *options.epsilon;
    for (const auto& e : f.epsilons) epsilons.push_back(Rational::parse(e));
  } catch (const flowrej::Error& e) {
    std::cerr << "flowrej: " << e.what() << "\n";
    return flowrej::kExitUsage;
  }

  if (*run) return flowrej::cmd_run(f.instance, options, std::cout, std::cerr);
  if (*verify) return flowrej::cmd_verify(f.instance, options, std::cout, std::cerr);
  if (*oracle) return flowrej::cmd_oracle(f.instance, options, std::cout, std::cerr);
  if (*gen) return flowrej::cmd_gen(workload, options, std::cout, std::cerr);
  if (*sweep) {
    flowrej::SweepOptions s;
    s.workload = workload;
    s.count = f.count;
    s.epsilons = std::move(epsilons);
    s.threads = f.threads;
    s.monotonicity = f.monotonicity;
    return flowrej::cmd_sweep(s, options, std::cout, std::cerr);
  }
  return flowrej::kExitUsage;
}

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

#ifndef FLOWREJ_COMMANDS_H_
#define FLOWREJ_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flowrej/instance.h"
#include "flowrej/oracle.h"
#include "flowrej/rational.h"

namespace flowrej {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandOptions {
  std::string out;  // empty: write to the output stream
  std::optional<Rational> epsilon;
  std::optional<std::uint64_t> seed;
  std::size_t oracle_limit = kDefaultOracleLimit;
  bool oracle = false;       // cmd_run: attach an oracle section
  std::string events_out;    // cmd_run: event log path
  std::string certificate_out;  // cmd_run: certificate path
};

int cmd_run(const std::string& path, const CommandOptions& options, std::ostream& out,
            std::ostream& err);
int cmd_verify(const std::string& path, const CommandOptions& options, std::ostream& out,
               std::ostream& err);
int cmd_gen(WorkloadSpec spec, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& path, const CommandOptions& options, std::ostream& out,
               std::ostream& err);

struct SweepOptions {
  WorkloadSpec workload;  // instance k uses seed workload.seed + k
  std::size_t count = 1;
  std::vector<Rational> epsilons;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool monotonicity = false;
};

int cmd_sweep(const SweepOptions& sweep, const CommandOptions& options, std::ostream& out,
              std::ostream& err);

}  // namespace flowrej

#endif  // FLOWREJ_COMMANDS_H_

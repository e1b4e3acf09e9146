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

#ifndef FLOWREJ_REPORT_H_
#define FLOWREJ_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flowrej/analysis.h"
#include "flowrej/engine.h"
#include "flowrej/instance.h"
#include "flowrej/oracle.h"
#include "flowrej/rational.h"

namespace flowrej {

inline constexpr char kToolVersion[] = "0.1.0";
inline constexpr int kReportVersion = 1;

using Json = nlohmann::ordered_json;

// {"exact": "num/den", "approx": <double>}
Json rational_json(const Rational& r);
Json check_json(const CheckReport& report);
Json certificate_json(const DualCertificate& cert);
Json schedule_json(const OracleSchedule& schedule);

// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

// FNV-1a 64 over the serialized instance, as 16 hex digits.
std::string instance_digest(const Instance& instance);

struct AnalysisOptions {
  bool monotonicity = false;
  bool oracle = false;
  std::size_t oracle_limit = kDefaultOracleLimit;
};

struct OracleSection {
  OracleSchedule schedule;
  Rational lp_cost;  // zero when the instance is off-grid
  bool grid = false;
  Rational hdf_no_reject;
  Rational fcfs;
  Rational lower_bound;
  std::optional<Rational> empirical_ratio;
  Rational theorem_bound;
};

struct Analysis {
  SimOutcome outcome;
  DualCertificate certificate;
  Objectives objectives;
  std::vector<CheckReport> checks;
  std::optional<OracleSection> oracle;

  bool all_pass() const;
};

// 22(1+eps)(1+eps^2)/eps^3.
Rational theorem_bound(const Rational& epsilon);

// Simulate, certify and check. With the oracle on, adds the competitive
// ratio and weak duality checks. Throws TooLarge past the oracle limit.
Analysis analyze(const Instance& instance, const AnalysisOptions& options);

Json run_report_json(const Analysis& analysis, std::optional<std::uint64_t> seed);

}  // namespace flowrej

#endif  // FLOWREJ_REPORT_H_

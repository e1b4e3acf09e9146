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

#ifndef FLOWREJ_ORACLE_H_
#define FLOWREJ_ORACLE_H_

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "flowrej/engine.h"
#include "flowrej/instance.h"
#include "flowrej/rational.h"

namespace flowrej {

inline constexpr std::size_t kDefaultOracleLimit = 7;

struct OracleSchedule {
  std::vector<std::vector<JobId>> sequences;  // per machine, in execution order
  std::map<JobId, Rational> start;            // ASAP given the sequence
  Rational cost;                              // total weighted flow
};

// Exhaustive optimum over machine assignments and per-machine orders.
// Ties: lowest cost, then smallest assignment vector (by job order), then
// lexicographically smallest per-machine sequence. Throws Error(kTooLarge)
// when the instance has more than `limit` jobs.
OracleSchedule brute_force_opt(const Instance& instance,
                               std::size_t limit = kDefaultOracleLimit);

// LP cost of a schedule under unit-slot accounting. Throws GridRequired.
Rational schedule_lp_cost(const Instance& instance, const OracleSchedule& schedule);

enum class BaselinePolicy { kHdfNoReject, kFcfs };

std::string_view baseline_label(BaselinePolicy policy);

// The engine with rejection off and the given queue order.
SimOutcome baseline(const Instance& instance, BaselinePolicy policy);

// sum_j w_j min_i p_ij.
Rational lower_bound_trivial(const Instance& instance);

}  // namespace flowrej

#endif  // FLOWREJ_ORACLE_H_

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

#include "flowrej/oracle.h"

#include <algorithm>
#include <optional>
#include <string>

#include "flowrej/analysis.h"
#include "flowrej/error.h"

namespace flowrej {
namespace {

struct Sequence {
  Rational cost;
  std::vector<std::size_t> order;  // job indices
};

Rational asap_cost(const Instance& in, std::size_t machine, const std::vector<std::size_t>& order) {
  Rational now;
  Rational cost;
  for (std::size_t k : order) {
    const JobSpec& job = in.jobs[k];
    now = max(now, job.release) + job.proc[machine];
    cost += job.weight * (now - job.release);
  }
  return cost;
}

Sequence best_sequence(const Instance& in, std::size_t machine, unsigned mask) {
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < in.jobs.size(); ++k) {
    if (mask & (1u << k)) order.push_back(k);
  }
  std::optional<Sequence> best;
  do {
    Rational cost = asap_cost(in, machine, order);
    if (!best || cost < best->cost) best = Sequence{std::move(cost), order};
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

}  // namespace

OracleSchedule brute_force_opt(const Instance& instance, std::size_t limit) {
  validate(instance);
  const std::size_t n = instance.jobs.size();
  if (n > limit) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(n) + " jobs exceed the oracle limit of " + std::to_string(limit));
  }
  const auto m = static_cast<std::size_t>(instance.machines);
  std::vector<std::vector<Sequence>> memo(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      memo[i].push_back(best_sequence(instance, i, mask));
    }
  }

  std::vector<std::size_t> assign(n, 0);
  std::optional<Rational> best_cost;
  std::vector<std::size_t> best_assign;
  while (true) {
    std::vector<unsigned> masks(m, 0);
    for (std::size_t k = 0; k < n; ++k) masks[assign[k]] |= 1u << k;
    Rational cost;
    for (std::size_t i = 0; i < m; ++i) cost += memo[i][masks[i]].cost;
    if (!best_cost || cost < *best_cost) {
      best_cost = cost;
      best_assign = assign;
    }
    std::size_t pos = n;
    while (pos > 0 && assign[pos - 1] + 1 == m) assign[--pos] = 0;
    if (pos == 0) break;
    ++assign[pos - 1];
  }

  OracleSchedule s;
  s.sequences.resize(m);
  s.cost = *best_cost;
  std::vector<unsigned> masks(m, 0);
  for (std::size_t k = 0; k < n; ++k) masks[best_assign[k]] |= 1u << k;
  for (std::size_t i = 0; i < m; ++i) {
    Rational now;
    for (std::size_t k : memo[i][masks[i]].order) {
      const JobSpec& job = instance.jobs[k];
      const Rational start = max(now, job.release);
      s.sequences[i].push_back(job.id);
      s.start[job.id] = start;
      now = start + job.proc[i];
    }
  }
  return s;
}

Rational schedule_lp_cost(const Instance& instance, const OracleSchedule& schedule) {
  Rational sum;
  for (std::size_t i = 0; i < schedule.sequences.size(); ++i) {
    for (JobId id : schedule.sequences[i]) {
      sum += slot_lp_cost(instance.jobs[instance.index_of(id)], static_cast<MachineId>(i),
                          schedule.start.at(id));
    }
  }
  return sum;
}

std::string_view baseline_label(BaselinePolicy policy) {
  return policy == BaselinePolicy::kHdfNoReject ? "hdf-no-reject" : "fcfs";
}

SimOutcome baseline(const Instance& instance, BaselinePolicy policy) {
  EngineOptions options;
  options.rejection = false;
  options.dispatch = DispatchRule::kGreedyFlow;
  options.order = policy == BaselinePolicy::kHdfNoReject ? QueueOrder::kHighestDensity
                                                         : QueueOrder::kFirstComeFirstServed;
  return simulate(instance, options);
}

Rational lower_bound_trivial(const Instance& instance) {
  Rational sum;
  for (const auto& job : instance.jobs) {
    sum += job.weight * *std::min_element(job.proc.begin(), job.proc.end());
  }
  return sum;
}

}  // namespace flowrej

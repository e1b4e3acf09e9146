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

#ifndef FLOWREJ_MACHINE_STATE_H_
#define FLOWREJ_MACHINE_STATE_H_

#include <map>
#include <optional>
#include <vector>

#include "flowrej/instance.h"
#include "flowrej/rational.h"

namespace flowrej {

// A job as seen by one machine: processing time and density are the values
// on that machine.
struct QueuedJob {
  JobId id = 0;
  Rational release;
  Rational weight;
  Rational proc;
  Rational density;

  friend bool operator==(const QueuedJob&, const QueuedJob&) = default;
};

QueuedJob queued_on(const JobSpec& job, MachineId machine);

// Queue order: density descending, then release ascending, then id ascending.
bool queue_precedes(const QueuedJob& a, const QueuedJob& b);

struct RunningJob {
  JobId id = 0;
  Rational release;
  Rational weight;
  Rational proc;
  Rational start;
  // count1: total weight dispatched to the machine while this job runs.
  Rational count1;

  Rational completion() const { return start + proc; }
  Rational remaining(const Rational& now) const { return start + proc - now; }

  friend bool operator==(const RunningJob&, const RunningJob&) = default;
};

struct MachineState {
  MachineId id = 0;
  std::optional<RunningJob> running;
  // V_i: dispatched, not started, not rejected; kept in queue order.
  std::vector<QueuedJob> pending;
  // W_i: weight-gap budget.
  Rational budget;
  // count2 per pending job; absent means zero.
  std::map<JobId, Rational> count2;

  void insert_pending(const QueuedJob& job);
  // Removes `id` from pending if present; returns whether it was there.
  bool erase_pending(JobId id);
  bool idle() const { return !running.has_value(); }

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

// Highest density pending job (ties: earlier release, then lower id).
// Does not rely on `pending` being sorted and does not mutate the state.
std::optional<JobId> next_job_hdf(const MachineState& state);

}  // namespace flowrej

#endif  // FLOWREJ_MACHINE_STATE_H_

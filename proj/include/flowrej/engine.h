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

#ifndef FLOWREJ_ENGINE_H_
#define FLOWREJ_ENGINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flowrej/instance.h"
#include "flowrej/machine_state.h"
#include "flowrej/policy.h"
#include "flowrej/rational.h"

namespace flowrej {

struct ArrivalEvent {
  JobId job = 0;
  MachineId machine = 0;
  Rational alpha_j;
  std::vector<Rational> alphas;
};
struct StartEvent {
  JobId job = 0;
  MachineId machine = 0;
};
struct CompleteEvent {
  JobId job = 0;
  MachineId machine = 0;
};
struct RejectPreemptEvent {
  JobId job = 0;
  MachineId machine = 0;
  Rational remaining;
  JobId trigger = 0;
};
struct RejectWeightGapEvent {
  std::vector<JobId> jobs;
  MachineId machine = 0;
  JobId trigger = 0;
  WeightGapBranch branch = WeightGapBranch::kNoSNotSmallest;
};

using EventKind = std::variant<ArrivalEvent, StartEvent, CompleteEvent, RejectPreemptEvent,
                               RejectWeightGapEvent>;

// Log entries are ordered by (time, seq).
struct EventRecord {
  std::size_t seq = 0;
  Rational time;
  EventKind kind;
};

enum class JobFate { kCompleted, kRejectedPreempt, kRejectedWeightGap };

std::string_view fate_label(JobFate fate);

struct JobRecord {
  JobId id = 0;
  MachineId machine = 0;
  JobFate fate = JobFate::kCompleted;
  std::optional<Rational> start;       // S_j; empty means never started
  std::optional<Rational> completion;  // C_j; empty means rejected
  Rational last_in_system;             // L_j
  std::optional<JobId> rejected_by;    // rej(j)
  Rational remaining_at_rejection;     // q_j(r_rej(j)) for preempt rejections
  Rational ctilde;                     // definitive completion time
  Rational alpha;                      // alpha_j
  std::size_t arrival_index = 0;       // into SimOutcome::arrivals
};

// Everything the dispatcher and the rules saw and did at one arrival.
struct ArrivalRecord {
  JobId job = 0;
  MachineId machine = 0;
  Rational time;
  std::vector<QueuedJob> pending_before;  // V_i(r_j^-)
  Rational budget_before;                 // W_i(r_j^-)
  std::optional<RunningJob> running_before;  // kappa_i(r_j^-)
  std::optional<JobId> preempted;         // R1_i by this arrival
  Rational preempted_remaining;
  WeightGapDecision decision;             // R2_i(r_j)
  Rational budget_after;                  // W_i(r_j)
  std::optional<RunningJob> running_after;
  std::vector<QueuedJob> pending_after;   // V_i(r_j)
  Rational alpha_j;
  std::vector<Rational> alphas;
  Rational delta;                         // diagnostic Delta_ij on the chosen machine

  bool arrival_rejected() const { return decision.rejects(job); }
  std::optional<JobId> lowest_before() const;
  std::optional<JobId> lowest_after() const;
};

// Machine state in force from `time` until the next snapshot.
struct MachineSnapshot {
  Rational time;
  std::optional<RunningJob> running;
  std::vector<QueuedJob> pending;
  Rational budget;
};

struct SimTotals {
  Rational total_weight;
  Rational weighted_flow;  // completed jobs only
  Rational rejected_weight_preempt;
  Rational rejected_weight_weight_gap;
  std::size_t completed = 0;
  std::size_t rejected_preempt = 0;
  std::size_t rejected_weight_gap = 0;
};

struct SimOutcome {
  Instance instance;
  std::vector<EventRecord> events;
  std::vector<JobRecord> jobs;          // same order as instance.jobs
  std::vector<ArrivalRecord> arrivals;  // same order as instance.jobs
  std::vector<std::vector<MachineSnapshot>> timeline;  // per machine
  SimTotals totals;

  const JobRecord& job(JobId id) const;
  // State of machine i in force at time t.
  const MachineSnapshot& state_at(MachineId machine, const Rational& t) const;
};

enum class QueueOrder { kHighestDensity, kFirstComeFirstServed };
enum class DispatchRule { kAlpha, kGreedyFlow };

struct EngineOptions {
  bool rejection = true;
  QueueOrder order = QueueOrder::kHighestDensity;
  DispatchRule dispatch = DispatchRule::kAlpha;
};

// Runs the online algorithm. Throws Error(kInvariantViolation) if an
// internal invariant breaks; the message carries the tail of the event log.
SimOutcome simulate(const Instance& instance, const EngineOptions& options = {});

// Simulates only the first k jobs in (release, id) order. Throws BadPrefix.
SimOutcome replay_prefix(const Instance& instance, std::size_t k);

// One JSON object per line, ordered by (time, seq).
std::string serialize_event_log(const SimOutcome& outcome);

}  // namespace flowrej

#endif  // FLOWREJ_ENGINE_H_

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

#ifndef FLOWREJ_POLICY_H_
#define FLOWREJ_POLICY_H_

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "flowrej/instance.h"
#include "flowrej/machine_state.h"
#include "flowrej/rational.h"

namespace flowrej {

// The line of the weight-gap rejection rule that decided an arrival.
enum class WeightGapBranch {
  kNoSNotSmallest,          // no s; j is not the smallest density job
  kNoSPLarge,               // no s; j smallest; p_ij >= eps * p_(nu-1)
  kNoSCounterReject,        // no s; count2_(nu-1) reached w_(nu-1): reject j, nu-1
  kNoSNoReject,             // no s; count2_(nu-1) below w_(nu-1)
  kNoSEmptyQueue,           // no s; V(r_j^-) empty, so there is no nu-1
  kSWeightLarge,            // w_j >= w_(s-1)/eps: reject s-1..nu
  kSArrivalOutside,         // j not in s..nu: reject s..nu
  kSArrivalInsideCounterReject,  // count2_(s-1) reached w_(s-1): reject s-1..nu
  kSArrivalInsideOnlySuffix,     // reject s..nu
};

std::string_view branch_label(WeightGapBranch branch);

struct WeightGapDecision {
  // Rejected jobs in queue order (a suffix of V(r_j^-) + {j}).
  std::vector<JobId> rejected;
  Rational new_budget;
  // New count2 values for the jobs whose counter moved.
  std::map<JobId, Rational> counter_updates;
  WeightGapBranch branch = WeightGapBranch::kNoSNotSmallest;
  // 1-based position of s in V(r_j^-) + {j}, when it exists.
  std::optional<std::size_t> s;

  bool rejects(JobId id) const;
};

// Weight-gap rule for `arriving` dispatched to a machine whose pending queue
// (queue order) and budget just before the arrival are given. Pure.
WeightGapDecision weight_gap_reject(std::span<const QueuedJob> pending_before,
                                    const Rational& budget_before,
                                    const std::map<JobId, Rational>& count2,
                                    const QueuedJob& arriving, const Rational& epsilon);

struct PreemptDecision {
  // Counter of the running job after the increment; empty when idle.
  std::optional<Rational> count1_after;
  // The running job, when its counter reached w/eps.
  std::optional<JobId> rejected;
};

// Preempt rule for a job of weight `arrival_weight` dispatched to `state`.
PreemptDecision apply_preempt_rule(const MachineState& state, const Rational& arrival_weight,
                                   const Rational& epsilon);

// 1-based rho with  sum_{h>=rho} w_h <= budget < sum_{h>=rho-1} w_h  over the
// given queue weights (rho = size+1 is the empty suffix). Throws RhoUndefined
// unless the queue is nonempty and 0 <= budget < total weight.
std::size_t compute_rho(std::span<const Rational> weights, const Rational& budget);

// Work of the lowest-density part of `pending` that a budget of `budget`
// weight covers:  sum_{h>=rho} p_h + (budget - sum_{h>=rho} w_h) p_(rho-1)/w_(rho-1).
// A budget at least the total queue weight covers the whole queue.
Rational budget_covered_work(std::span<const QueuedJob> pending, const Rational& budget);

enum class AlphaCase {
  kOnlyArrivalRejected,      // R2' = {j}
  kArrivalAndLowestRejected, // R2' = {j, nu(r_j^-)}
  kOther,
};

struct AlphaEvaluation {
  Rational value;
  Rational n_term;
  AlphaCase n_case = AlphaCase::kOther;
  // The weight-gap rule as it would act if j were dispatched here.
  WeightGapDecision hypothetical;
};

// alpha_ij on a snapshot frozen just before r_j. Never mutates the snapshot.
AlphaEvaluation compute_alpha_ij(const MachineState& snapshot, const JobSpec& job,
                                 const Rational& epsilon);

// Diagnostic estimate of the flow-time increase from dispatching `job` to a
// machine, evaluated on the post-rules state at r_j. `post.pending` may
// contain `job` itself; it is skipped. `preempted_remaining` is the remaining
// time of the job the preempt rule just rejected, if any.
Rational compute_delta_ij(const MachineState& post, const JobSpec& job, const Rational& now,
                          const std::optional<Rational>& preempted_remaining);

struct DispatchResult {
  MachineId machine = 0;
  Rational alpha_j;
  std::vector<Rational> alphas;
};

// argmin over alpha values (ties: lowest machine id); alpha_j = eps/(1+eps) * min.
DispatchResult select_machine(std::vector<Rational> alphas, const Rational& epsilon);

DispatchResult dispatch(std::span<const MachineState> machines, const JobSpec& job,
                        const Rational& epsilon);

}  // namespace flowrej

#endif  // FLOWREJ_POLICY_H_

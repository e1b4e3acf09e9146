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

#include "flowrej/policy.h"

#include <algorithm>
#include <iterator>

#include "flowrej/error.h"

namespace flowrej {

std::string_view branch_label(WeightGapBranch branch) {
  switch (branch) {
    case WeightGapBranch::kNoSNotSmallest: return "no-s/not-smallest";
    case WeightGapBranch::kNoSPLarge: return "no-s/p-large";
    case WeightGapBranch::kNoSCounterReject: return "no-s/counter-reject";
    case WeightGapBranch::kNoSNoReject: return "no-s/no-reject";
    case WeightGapBranch::kNoSEmptyQueue: return "no-s/empty-queue";
    case WeightGapBranch::kSWeightLarge: return "s/w-large";
    case WeightGapBranch::kSArrivalOutside: return "s/j-outside";
    case WeightGapBranch::kSArrivalInsideCounterReject: return "s/j-inside-counter-reject";
    case WeightGapBranch::kSArrivalInsideOnlySuffix: return "s/j-inside-only-suffix";
  }
  return "?";
}

bool WeightGapDecision::rejects(JobId id) const {
  return std::find(rejected.begin(), rejected.end(), id) != rejected.end();
}

WeightGapDecision weight_gap_reject(std::span<const QueuedJob> pending_before,
                                    const Rational& budget_before,
                                    const std::map<JobId, Rational>& count2,
                                    const QueuedJob& arriving, const Rational& epsilon) {
  // V = V(r_j^-) + {j} in queue order; positions below are 0-based, so the
  // job the pseudocode calls "index k" sits at v[k-1].
  std::vector<QueuedJob> v(pending_before.begin(), pending_before.end());
  v.insert(std::upper_bound(v.begin(), v.end(), arriving, queue_precedes), arriving);
  const std::size_t nu = v.size();
  const std::size_t j_pos =
      static_cast<std::size_t>(std::find(v.begin(), v.end(), arriving) - v.begin());

  const Rational threshold = epsilon * (budget_before + arriving.weight);
  // suffix[k] = sum of weights at positions k..nu-1.
  std::vector<Rational> suffix(nu + 1);
  for (std::size_t k = nu; k-- > 0;) suffix[k] = suffix[k + 1] + v[k].weight;

  WeightGapDecision d;
  auto counter_after = [&](const QueuedJob& job) {
    auto it = count2.find(job.id);
    Rational c = it == count2.end() ? Rational(0) : it->second;
    c += arriving.weight;
    d.counter_updates[job.id] = c;
    return c;
  };
  auto reject_from = [&](std::size_t first) {
    for (std::size_t k = first; k < nu; ++k) d.rejected.push_back(v[k].id);
  };

  if (v.back().weight > threshold) {
    // No index s exists.
    if (j_pos != nu - 1) {
      d.branch = WeightGapBranch::kNoSNotSmallest;
    } else if (pending_before.empty()) {
      d.branch = WeightGapBranch::kNoSEmptyQueue;
    } else {
      const QueuedJob& prev = v[nu - 2];  // nu(r_j^-)
      if (arriving.proc >= epsilon * prev.proc) {
        d.branch = WeightGapBranch::kNoSPLarge;
      } else if (counter_after(prev) >= prev.weight) {
        d.branch = WeightGapBranch::kNoSCounterReject;
        reject_from(nu - 2);
      } else {
        d.branch = WeightGapBranch::kNoSNoReject;
      }
    }
  } else {
    // Smallest s with suffix(s) <= threshold; the suffix sums decrease in s.
    std::size_t s = nu - 1;
    while (s > 0 && suffix[s - 1] <= threshold) --s;
    d.s = s + 1;
    // Position s-1 (1-based) does not exist when s is the first position;
    // it then behaves as a job of infinite weight.
    const bool has_prev = s > 0;
    if (has_prev && arriving.weight >= v[s - 1].weight / epsilon) {
      d.branch = WeightGapBranch::kSWeightLarge;
      reject_from(s - 1);
    } else if (j_pos < s) {
      d.branch = WeightGapBranch::kSArrivalOutside;
      reject_from(s);
    } else if (has_prev && counter_after(v[s - 1]) >= v[s - 1].weight) {
      d.branch = WeightGapBranch::kSArrivalInsideCounterReject;
      reject_from(s - 1);
    } else {
      d.branch = WeightGapBranch::kSArrivalInsideOnlySuffix;
      reject_from(s);
    }
  }

  Rational rejected_weight;
  for (const auto& job : v) {
    if (d.rejects(job.id)) rejected_weight += job.weight;
  }
  d.new_budget = max(Rational(0), budget_before + arriving.weight - rejected_weight / epsilon);
  return d;
}

PreemptDecision apply_preempt_rule(const MachineState& state, const Rational& arrival_weight,
                                   const Rational& epsilon) {
  PreemptDecision d;
  if (!state.running) return d;
  d.count1_after = state.running->count1 + arrival_weight;
  if (*d.count1_after >= state.running->weight / epsilon) d.rejected = state.running->id;
  return d;
}

std::size_t compute_rho(std::span<const Rational> weights, const Rational& budget) {
  Rational total;
  for (const auto& w : weights) total += w;
  if (weights.empty() || budget < Rational(0) || budget >= total) {
    throw Error(ErrorCode::kRhoUndefined,
                "budget " + budget.str() + " outside [0, " + total.str() + ") over " +
                    std::to_string(weights.size()) + " queued jobs");
  }
  // Walk the suffix from the back; stop at the first position whose
  // inclusion would exceed the budget.
  std::size_t rho = weights.size() + 1;
  Rational suffix;
  while (rho > 1 && suffix + weights[rho - 2] <= budget) {
    suffix += weights[rho - 2];
    --rho;
  }
  return rho;
}

Rational budget_covered_work(std::span<const QueuedJob> pending, const Rational& budget) {
  Rational total_w;
  Rational total_p;
  for (const auto& q : pending) {
    total_w += q.weight;
    total_p += q.proc;
  }
  if (budget >= total_w) return total_p;
  std::vector<Rational> weights;
  weights.reserve(pending.size());
  for (const auto& q : pending) weights.push_back(q.weight);
  const std::size_t rho = compute_rho(weights, budget);
  Rational suffix_w;
  Rational suffix_p;
  for (std::size_t k = rho - 1; k < pending.size(); ++k) {
    suffix_w += pending[k].weight;
    suffix_p += pending[k].proc;
  }
  const QueuedJob& boundary = pending[rho - 2];
  return suffix_p + (budget - suffix_w) * boundary.proc / boundary.weight;
}

AlphaEvaluation compute_alpha_ij(const MachineState& snapshot, const JobSpec& job,
                                 const Rational& epsilon) {
  const QueuedJob j = queued_on(job, snapshot.id);
  AlphaEvaluation e;
  e.hypothetical =
      weight_gap_reject(snapshot.pending, snapshot.budget, snapshot.count2, j, epsilon);
  const auto& rejected = e.hypothetical.rejected;

  Rational ahead_work;   // sum p_h over V(r_j^-) with delta_h >= delta_j
  Rational behind_weight;  // sum w_h over V(r_j^-) with delta_h < delta_j
  for (const auto& h : snapshot.pending) {
    if (h.density >= j.density) {
      ahead_work += h.proc;
    } else {
      behind_weight += h.weight;
    }
  }

  const Rational& w_prime = e.hypothetical.new_budget;
  if (rejected.size() == 1 && rejected.front() == j.id) {
    e.n_case = AlphaCase::kOnlyArrivalRejected;
    e.n_term = j.weight * budget_covered_work(snapshot.pending, w_prime);
  } else if (rejected.size() == 2 && !snapshot.pending.empty() && e.hypothetical.rejects(j.id) &&
             e.hypothetical.rejects(snapshot.pending.back().id)) {
    e.n_case = AlphaCase::kArrivalAndLowestRejected;
    Rational work = j.proc + snapshot.pending.back().proc;
    e.n_term = j.weight * work;
  } else {
    e.n_case = AlphaCase::kOther;
    Rational rejected_weight;
    for (const auto& h : snapshot.pending) {
      if (e.hypothetical.rejects(h.id)) rejected_weight += h.weight;
    }
    if (e.hypothetical.rejects(j.id)) rejected_weight += j.weight;
    e.n_term = j.proc * rejected_weight + epsilon * epsilon * w_prime * j.proc;
  }

  e.value = Rational(20) * j.weight * j.proc / epsilon + j.weight * ahead_work +
            j.weight * j.proc + j.proc * behind_weight - e.n_term;
  return e;
}

Rational compute_delta_ij(const MachineState& post, const JobSpec& job, const Rational& now,
                          const std::optional<Rational>& preempted_remaining) {
  const QueuedJob j = queued_on(job, post.id);
  Rational delta;
  Rational others_weight;  // U(r_j) \ {j}
  for (const auto& h : post.pending) {
    if (h.id == j.id) continue;
    others_weight += h.weight;
    if (h.density >= j.density) {
      delta += j.weight * h.proc;
    } else {
      delta += j.proc * h.weight;
    }
  }
  if (post.running && post.running->id != j.id) {
    others_weight += post.running->weight;
    if (!preempted_remaining) delta += j.weight * post.running->remaining(now);
  }
  if (preempted_remaining) delta -= *preempted_remaining * others_weight;
  return delta;
}

DispatchResult select_machine(std::vector<Rational> alphas, const Rational& epsilon) {
  if (alphas.empty()) throw Error(ErrorCode::kInvariantViolation, "no machines to dispatch to");
  DispatchResult r;
  const auto best = std::min_element(alphas.begin(), alphas.end());
  r.machine = static_cast<MachineId>(std::distance(alphas.begin(), best));
  r.alpha_j = epsilon / (Rational(1) + epsilon) * *best;
  r.alphas = std::move(alphas);
  return r;
}

DispatchResult dispatch(std::span<const MachineState> machines, const JobSpec& job,
                        const Rational& epsilon) {
  std::vector<Rational> alphas;
  alphas.reserve(machines.size());
  for (const auto& m : machines) alphas.push_back(compute_alpha_ij(m, job, epsilon).value);
  return select_machine(std::move(alphas), epsilon);
}

}  // namespace flowrej

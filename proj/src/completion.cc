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

#include <variant>

#include "flowrej/analysis.h"
#include "flowrej/error.h"
#include "flowrej/policy.h"

namespace flowrej {
namespace {

// Sum of q_h(r_rej(h)) over preempt rejections on `machine` triggered by an
// arrival processed after arrival `after` and no later than time `to`.
Rational preempted_work(const SimOutcome& outcome, MachineId machine, std::size_t after,
                        const Rational& to) {
  Rational sum;
  for (const auto& e : outcome.events) {
    const auto* p = std::get_if<RejectPreemptEvent>(&e.kind);
    if (p != nullptr && p->machine == machine && e.time <= to &&
        outcome.instance.index_of(p->trigger) > after) {
      sum += p->remaining;
    }
  }
  return sum;
}

Rational remaining_work(const ArrivalRecord& a) {
  Rational sum;
  if (a.running_after) sum += a.running_after->remaining(a.time);
  for (const auto& h : a.pending_after) sum += h.proc;
  return sum;
}

}  // namespace

Rational definitive_completion(const SimOutcome& outcome, JobId id) {
  const std::size_t k = outcome.instance.index_of(id);
  const JobSpec& spec = outcome.instance.jobs[k];
  const JobRecord& rec = outcome.jobs[k];
  const ArrivalRecord& own = outcome.arrivals[k];
  const MachineId i = rec.machine;
  const Rational p = spec.proc[static_cast<std::size_t>(i)];
  const Rational& L = rec.last_in_system;

  if (rec.fate != JobFate::kRejectedWeightGap) {
    return L + preempted_work(outcome, i, k, L);
  }

  if (*rec.rejected_by != id) {
    const ArrivalRecord& rej = outcome.arrivals[outcome.instance.index_of(*rec.rejected_by)];
    const Rational delta_j = density(spec, i);
    Rational c = L + preempted_work(outcome, i, k, L);
    if (rej.running_after) c += rej.running_after->remaining(rej.time);
    for (const auto& h : rej.pending_after) {
      if (h.density >= delta_j) c += h.proc;
    }
    for (JobId h : rej.decision.rejected) {
      const JobSpec& hs = outcome.instance.jobs[outcome.instance.index_of(h)];
      if (density(hs, i) >= delta_j) c += hs.proc[static_cast<std::size_t>(i)];
    }
    return c;
  }

  if (own.decision.rejected.size() > 1) {
    return L + p + remaining_work(own);
  }

  Rational total;
  for (const auto& h : own.pending_before) total += h.proc;
  Rational c = L + p + total - budget_covered_work(own.pending_before, own.budget_after);
  // A job the preempt rule removed at this arrival is already gone from running_after.
  if (own.running_after) c += own.running_after->remaining(L);
  return c;
}

Rational fractional_weight(const Rational& release, const Rational& t, const Rational& ctilde,
                           const Rational& proc, const Rational& weight) {
  if (t < release || t >= ctilde) {
    throw Error(ErrorCode::kOutOfSupport,
                "t=" + t.str() + " outside [" + release.str() + ", " + ctilde.str() + ")");
  }
  if (t <= ctilde - proc) return weight;
  return weight * (ctilde - t) / proc;
}

}  // namespace flowrej

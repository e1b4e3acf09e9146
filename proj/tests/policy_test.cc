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

#include <algorithm>
#include <map>
#include <vector>

#include "doctest.h"
#include "flowrej/error.h"
#include "flowrej/instance.h"
#include "flowrej/machine_state.h"
#include "flowrej/policy.h"
#include "test_util.h"

namespace flowrej {
namespace {

using testing::job;
using testing::q;

QueuedJob queued(JobId id, std::int64_t r, std::int64_t w, std::int64_t p) {
  return queued_on(job(id, r, w, {p}), 0);
}

std::vector<QueuedJob> sorted(std::vector<QueuedJob> v) {
  std::sort(v.begin(), v.end(), queue_precedes);
  return v;
}

TEST_SUITE("policy") {
  TEST_CASE("next_job_hdf") {
    MachineState s;
    CHECK_FALSE(next_job_hdf(s).has_value());
    s.pending = {queued(1, 0, 1, 1), queued(2, 1, 2, 1)};
    CHECK(next_job_hdf(s) == 2);
    s.pending = {queued(4, 1, 2, 1), queued(2, 1, 2, 1)};
    const MachineState before = s;
    CHECK(next_job_hdf(s) == 2);
    CHECK(s == before);
  }

  TEST_CASE("preempt rule") {
    MachineState s;
    CHECK_FALSE(apply_preempt_rule(s, 1, q("1/2")).count1_after.has_value());
    s.running = RunningJob{5, 0, 2, 10, 0, 3};
    PreemptDecision d = apply_preempt_rule(s, 1, q("1/2"));
    CHECK(d.count1_after == Rational(4));
    CHECK(d.rejected == 5);
    s.running->count1 = 0;
    d = apply_preempt_rule(s, 1, q("1/2"));
    CHECK(d.count1_after == Rational(1));
    CHECK_FALSE(d.rejected.has_value());
  }

  TEST_CASE("weight gap: heavy arrival rejects s-1..nu") {
    // weights by density: j=10 first, then 5, 1, 1
    const auto v = sorted({queued(1, 0, 5, 1), queued(2, 0, 1, 1), queued(3, 1, 1, 1)});
    const QueuedJob j = queued(9, 2, 10, 1);
    const WeightGapDecision d = weight_gap_reject(v, 0, {}, j, q("1/2"));
    CHECK(d.branch == WeightGapBranch::kSWeightLarge);
    CHECK(d.s == 3u);
    CHECK(d.rejected == std::vector<JobId>{1, 2, 3});
    CHECK(d.new_budget == Rational(0));
    CHECK(branch_label(d.branch) == "s/w-large");
  }

  TEST_CASE("weight gap: empty queue grows the budget") {
    const WeightGapDecision d = weight_gap_reject({}, 0, {}, queued(1, 0, 2, 1), q("1/2"));
    CHECK(d.rejected.empty());
    CHECK(d.new_budget == Rational(2));
    CHECK(d.branch == WeightGapBranch::kNoSEmptyQueue);
  }

  TEST_CASE("weight gap: small arrival bumps the counter") {
    const std::vector<QueuedJob> v = {queued(1, 0, 8, 8)};
    const WeightGapDecision d = weight_gap_reject(v, 0, {}, queued(2, 0, 1, 2), q("1/2"));
    CHECK(d.branch == WeightGapBranch::kNoSNoReject);
    CHECK(d.rejected.empty());
    CHECK(d.new_budget == Rational(1));
    CHECK(d.counter_updates.at(1) == Rational(1));
  }

  TEST_CASE("weight gap: counter at threshold rejects the pair") {
    const std::vector<QueuedJob> v = {queued(1, 0, 8, 8)};
    const std::map<JobId, Rational> count2 = {{1, Rational(7)}};
    const WeightGapDecision d = weight_gap_reject(v, 0, count2, queued(2, 0, 1, 2), q("1/2"));
    CHECK(d.branch == WeightGapBranch::kNoSCounterReject);
    CHECK(d.rejected == std::vector<JobId>{1, 2});
    CHECK(d.new_budget == Rational(0));
  }

  TEST_CASE("compute_rho") {
    const std::vector<Rational> w = {3, 2, 1};
    CHECK(compute_rho(w, 2) == 3u);
    CHECK(compute_rho(w, 0) == 4u);
    CHECK(compute_rho(w, 5) == 2u);
    CHECK_THROWS_AS(compute_rho(w, 6), Error);
    CHECK_THROWS_AS(compute_rho({}, 0), Error);
    CHECK_THROWS_AS(compute_rho(w, -1), Error);
  }

  TEST_CASE("budget_covered_work interpolates and saturates") {
    const auto v = sorted({queued(1, 0, 3, 1), queued(2, 0, 2, 2), queued(3, 0, 1, 4)});
    // rho = 3: p_3 + (2 - 1) * p_2 / w_2
    CHECK(budget_covered_work(v, 2) == Rational(4) + Rational(1) * Rational(2) / Rational(2));
    CHECK(budget_covered_work(v, 0) == Rational(0));
    CHECK(budget_covered_work(v, 6) == Rational(7));
    CHECK(budget_covered_work(v, 100) == Rational(7));
  }

  TEST_CASE("alpha on an empty machine") {
    MachineState s;
    const AlphaEvaluation a = compute_alpha_ij(s, job(1, 0, 1, {2}), q("1/2"));
    CHECK(a.n_case == AlphaCase::kOther);
    CHECK(a.n_term == q("1/2"));
    CHECK(a.value == q("163/2"));
  }

  TEST_CASE("alpha when the arrival and the lowest job are rejected") {
    MachineState s;
    s.pending = {queued(1, 0, 8, 8)};
    s.count2[1] = 7;
    const MachineState before = s;
    const AlphaEvaluation a = compute_alpha_ij(s, job(2, 0, 1, {2}), q("1/2"));
    CHECK(a.n_case == AlphaCase::kArrivalAndLowestRejected);
    CHECK(a.n_term == Rational(1 * (2 + 8)));
    // 20*1*2/(1/2) + 1*8 + 1*2 - 10
    CHECK(a.value == Rational(80));
    CHECK(s == before);
  }

  TEST_CASE("alpha is a function of the snapshot only") {
    MachineState a;
    a.id = 0;
    a.pending = {queued(1, 0, 3, 2)};
    a.budget = 1;
    MachineState b = a;
    b.id = 1;
    const JobSpec j = job(7, 1, 2, {3, 3});
    CHECK(compute_alpha_ij(a, j, q("1/2")).value == compute_alpha_ij(b, j, q("1/2")).value);
  }

  TEST_CASE("delta diagnostic") {
    MachineState s;
    const JobSpec j = job(5, 0, 2, {1});
    CHECK(compute_delta_ij(s, j, 0, std::nullopt) == Rational(0));
    s.pending = {queued(1, 0, 9, 3), queued_on(j, 0)};
    CHECK(compute_delta_ij(s, j, 0, std::nullopt) == Rational(6));
    s.pending = {queued_on(j, 0), queued(1, 0, 5, 5)};
    // p_j * w_h - q * w(U \ {j})
    CHECK(compute_delta_ij(s, j, 0, Rational(4)) == Rational(1 * 5 - 4 * 5));
  }

  TEST_CASE("dispatch") {
    DispatchResult d = select_machine({10, 7, 9}, q("1/2"));
    CHECK(d.machine == 1);
    CHECK(d.alpha_j == q("1/3") * Rational(7));
    d = select_machine({7, 7}, q("1/2"));
    CHECK(d.machine == 0);
    std::vector<MachineState> one(1);
    const JobSpec j = job(1, 0, 1, {2});
    d = dispatch(one, j, q("1/2"));
    CHECK(d.machine == 0);
    CHECK(d.alpha_j == q("1/3") * compute_alpha_ij(one[0], j, q("1/2")).value);
  }

  // Smallest 1-based s with suffix(s) <= threshold < suffix(s-1), where
  // suffix(0) is infinite.
  std::optional<std::size_t> oracle_s(const std::vector<Rational>& w, const Rational& threshold) {
    for (std::size_t s = 1; s <= w.size(); ++s) {
      Rational suffix;
      for (std::size_t k = s - 1; k < w.size(); ++k) suffix += w[k];
      if (suffix > threshold) continue;
      if (s == 1 || suffix + w[s - 2] > threshold) return s;
    }
    return std::nullopt;
  }

  TEST_CASE("weight gap properties on random queues") {
    SplitMix64 rng(11);
    for (int round = 0; round < 3000; ++round) {
      const Rational eps = round % 2 == 0 ? q("1/2") : q("1/4");
      std::vector<QueuedJob> v;
      std::map<JobId, Rational> count2;
      const auto n = rng.uniform(0, 6);
      for (JobId id = 1; id <= n; ++id) {
        v.push_back(queued(id, rng.uniform(0, 3), rng.uniform(1, 10), rng.uniform(1, 10)));
        if (rng.uniform(0, 1) == 1) count2[id] = rng.uniform(0, 10);
      }
      v = sorted(std::move(v));
      // Budgets that respect eps W < w_nu, as the engine guarantees.
      Rational budget;
      if (!v.empty()) {
        const Rational cap = v.back().weight / eps;
        budget = cap * Rational(rng.uniform(0, 99), 100);
      } else {
        budget = rng.uniform(0, 5);
      }
      const QueuedJob j = queued(100, 4, rng.uniform(1, 10), rng.uniform(1, 10));
      const std::vector<QueuedJob> v_copy = v;
      const auto count_copy = count2;
      const WeightGapDecision d = weight_gap_reject(v, budget, count2, j, eps);
      CHECK(v == v_copy);
      CHECK(count2 == count_copy);

      std::vector<QueuedJob> all = v;
      all.insert(std::upper_bound(all.begin(), all.end(), j, queue_precedes), j);
      std::vector<Rational> weights;
      for (const auto& h : all) weights.push_back(h.weight);
      CHECK(d.s == oracle_s(weights, eps * (budget + j.weight)));

      // Contiguous suffix.
      REQUIRE(d.rejected.size() <= all.size());
      for (std::size_t k = 0; k < d.rejected.size(); ++k) {
        CHECK(all[all.size() - d.rejected.size() + k].id == d.rejected[k]);
      }
      // Budget update.
      Rational rejected_w;
      for (JobId id : d.rejected) {
        for (const auto& h : all) {
          if (h.id == id) rejected_w += h.weight;
        }
      }
      CHECK(d.new_budget == max(Rational(0), budget + j.weight - rejected_w / eps));
      // Rejecting branches empty the budget.
      if (d.branch == WeightGapBranch::kNoSCounterReject ||
          d.branch == WeightGapBranch::kSWeightLarge ||
          d.branch == WeightGapBranch::kSArrivalInsideCounterReject) {
        CHECK(d.new_budget == Rational(0));
      }
      // Budget stays below the lowest remaining weight.
      std::vector<QueuedJob> left;
      for (const auto& h : all) {
        if (!d.rejects(h.id)) left.push_back(h);
      }
      if (!left.empty()) CHECK(eps * d.new_budget < left.back().weight);
      // An arrival is rejected alone or with the lowest pending job.
      if (d.rejects(j.id)) {
        const bool pair = d.rejected.size() == 2 && !v.empty() && d.rejects(v.back().id);
        CHECK((d.rejected.size() == 1 || pair));
      } else if (!d.rejected.empty()) {
        // Bystander rejections are bounded by the arrival weight.
        Rational last;
        for (const auto& h : all) {
          if (h.id == d.rejected.back()) last = h.weight;
        }
        CHECK(rejected_w - last <= Rational(2) * eps * j.weight);
      }
    }
  }
}

}  // namespace
}  // namespace flowrej

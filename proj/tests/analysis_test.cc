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
#include <optional>
#include <variant>
#include <vector>

#include "doctest.h"
#include "flowrej/analysis.h"
#include "flowrej/engine.h"
#include "flowrej/error.h"
#include "flowrej/report.h"
#include "test_util.h"

namespace flowrej {
namespace {

using testing::e1;
using testing::job;
using testing::make;
using testing::q;

// Definitive completion times rebuilt from the instance and the event log
// alone. The budget is tracked with its own update rule.
class CtildeOracle {
 public:
  explicit CtildeOracle(const SimOutcome& o) : in_(o.instance) {
    machines_.resize(static_cast<std::size_t>(in_.machines));
    for (const auto& e : o.events) {
      const auto* pre = std::get_if<RejectPreemptEvent>(&e.kind);
      const auto* gap = std::get_if<RejectWeightGapEvent>(&e.kind);
      const JobId trigger = pre ? pre->trigger : gap ? gap->trigger : -1;
      if (open_ && trigger != *open_) close();
      if (const auto* a = std::get_if<ArrivalEvent>(&e.kind)) {
        Machine& m = machines_[a->machine];
        Snap& s = snaps_[a->job];
        s.machine = a->machine;
        s.time = e.time;
        s.order = order_++;
        s.before = m.pending;
        s.budget_before = m.budget;
        m.pending.push_back(a->job);
        open_ = a->job;
      } else if (const auto* st = std::get_if<StartEvent>(&e.kind)) {
        Machine& m = machines_[st->machine];
        std::erase(m.pending, st->job);
        m.running = st->job;
        m.started = e.time;
      } else if (const auto* c = std::get_if<CompleteEvent>(&e.kind)) {
        machines_[c->machine].running.reset();
        leave_[c->job] = e.time;
      } else if (pre != nullptr) {
        machines_[pre->machine].running.reset();
        leave_[pre->job] = e.time;
        preempts_.push_back({e.time, pre->machine, pre->remaining, pre->trigger});
        gap_rejected_by_.erase(pre->job);
      } else if (gap != nullptr) {
        for (JobId h : gap->jobs) {
          std::erase(machines_[gap->machine].pending, h);
          leave_[h] = e.time;
          gap_rejected_by_[h] = gap->trigger;
        }
        snaps_[gap->trigger].r2 = gap->jobs;
      }
    }
    if (open_) close();
  }

  Rational ctilde(JobId id) const {
    const Snap& own = snaps_.at(id);
    const MachineId i = own.machine;
    const Rational L = leave_.at(id);
    const Rational p = proc(id, i);
    Rational r1;
    for (const auto& x : preempts_) {
      if (x.machine == i && x.time <= L && snaps_.at(x.trigger).order > own.order) {
        r1 += x.remaining;
      }
    }
    const auto by = gap_rejected_by_.find(id);
    if (by == gap_rejected_by_.end()) return L + r1;
    if (by->second != id) {
      const Snap& k = snaps_.at(by->second);
      const Rational d = dens(id, i);
      Rational c = L + r1 + running_left(k);
      for (JobId h : k.after) {
        if (dens(h, i) >= d) c += proc(h, i);
      }
      for (JobId h : k.r2) {
        if (dens(h, i) >= d) c += proc(h, i);
      }
      return c;
    }
    Rational c = L + p + running_left(own);
    if (own.r2.size() > 1) {
      for (JobId h : own.after) c += proc(h, i);
      return c;
    }
    std::vector<JobId> before = own.before;
    std::sort(before.begin(), before.end(), [&](JobId a, JobId b) {
      const JobSpec& x = spec(a);
      const JobSpec& y = spec(b);
      if (dens(a, i) != dens(b, i)) return dens(a, i) > dens(b, i);
      if (x.release != y.release) return x.release < y.release;
      return a < b;
    });
    // Work of the lowest-density jobs that the remaining budget pays for.
    Rational budget = own.budget_after;
    Rational covered;
    for (auto it = before.rbegin(); it != before.rend(); ++it) {
      const Rational w = spec(*it).weight;
      if (w <= budget) {
        covered += proc(*it, i);
        budget -= w;
      } else {
        covered += budget * proc(*it, i) / w;
        break;
      }
    }
    for (JobId h : before) c += proc(h, i);
    return c - covered;
  }

 private:
  struct Machine {
    std::vector<JobId> pending;
    std::optional<JobId> running;
    Rational started;
    Rational budget;
  };
  struct Snap {
    MachineId machine = 0;
    Rational time;
    std::size_t order = 0;
    std::vector<JobId> before, after, r2;
    Rational budget_before, budget_after;
    std::optional<JobId> running;
    Rational running_start;
  };
  struct Preempt {
    Rational time;
    MachineId machine;
    Rational remaining;
    JobId trigger;
  };

  const JobSpec& spec(JobId id) const { return in_.jobs[in_.index_of(id)]; }
  Rational proc(JobId id, MachineId i) const { return spec(id).proc[static_cast<std::size_t>(i)]; }
  Rational dens(JobId id, MachineId i) const { return spec(id).weight / proc(id, i); }
  Rational running_left(const Snap& s) const {
    if (!s.running) return 0;
    return s.running_start + proc(*s.running, s.machine) - s.time;
  }

  void close() {
    Snap& s = snaps_[*open_];
    Machine& m = machines_[s.machine];
    s.after = m.pending;
    s.running = m.running;
    s.running_start = m.started;
    Rational rejected;
    for (JobId h : s.r2) rejected += spec(h).weight;
    s.budget_after = max(Rational(0), s.budget_before + spec(*open_).weight - rejected / in_.epsilon);
    m.budget = s.budget_after;
    open_.reset();
  }

  const Instance& in_;
  std::vector<Machine> machines_;
  std::map<JobId, Snap> snaps_;
  std::map<JobId, Rational> leave_;
  std::map<JobId, JobId> gap_rejected_by_;
  std::vector<Preempt> preempts_;
  std::optional<JobId> open_;
  std::size_t order_ = 0;
};

const CheckReport& find(const std::vector<CheckReport>& v, const std::string& name) {
  for (const auto& c : v) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  return v.front();
}

TEST_SUITE("analysis") {
  TEST_CASE("ctilde of an undisturbed job is its completion") {
    const SimOutcome o = simulate(make(1, "1/2", {job(1, 3, 2, {5})}));
    CHECK(o.job(1).ctilde == Rational(8));
    CHECK(definitive_completion(o, 1) == Rational(8));
    CHECK_THROWS_AS(definitive_completion(o, 9), Error);
  }

  TEST_CASE("ctilde adds the work of a later preemption") {
    // Job 3 pushes count1 of job 1 to 4 = w/eps at t=8 (remaining 2) and is
    // itself rejected; job 2 then runs [8, 9].
    const SimOutcome o = simulate(
        make(1, "1/2", {job(1, 0, 2, {10}), job(2, 1, 3, {1}), job(3, 8, 1, {1})}));
    REQUIRE(o.job(1).fate == JobFate::kRejectedPreempt);
    CHECK(o.job(1).remaining_at_rejection == Rational(2));
    CHECK(o.job(2).completion == Rational(9));
    CHECK(o.job(2).ctilde == Rational(9 + 2));
  }

  TEST_CASE("ctilde of a job rejected together with the lowest pending job") {
    // At t=2 job 3 and job 2 are rejected as a pair while job 0 still has 3
    // units left.
    const SimOutcome o = simulate(make(1, "1/2",
                                       {job(0, 1, 4, {4}), job(1, 1, 3, {4}), job(2, 2, 3, {1}),
                                        job(3, 2, 3, {1})}));
    const JobRecord& r = o.job(3);
    REQUIRE(r.fate == JobFate::kRejectedWeightGap);
    REQUIRE(r.rejected_by == 3);
    REQUIRE(o.arrivals[3].decision.rejected.size() == 2u);
    CHECK(r.ctilde == Rational(2 + 1 + 3));
  }

  TEST_CASE("E1 definitive completions") {
    const SimOutcome o = simulate(e1());
    CHECK(o.job(1).ctilde == Rational(4));
    CHECK(o.job(2).ctilde == Rational(5));
    CHECK(o.job(3).ctilde == Rational(3));
  }

  TEST_CASE("ctilde matches a replay of the event log") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      WorkloadSpec spec;
      spec.n = 20 + seed % 15;
      spec.m = 1 + static_cast<int>(seed % 4);
      spec.seed = 5000 + seed;
      spec.mean_interarrival = 1 + static_cast<std::int64_t>(seed % 3);
      spec.epsilon = seed % 3 == 0 ? q("1/4") : q("1/2");
      const SimOutcome o = simulate(generate(spec));
      const CtildeOracle oracle(o);
      for (const auto& j : o.jobs) {
        CAPTURE(seed);
        CAPTURE(j.id);
        CHECK(j.ctilde == oracle.ctilde(j.id));
      }
    }
  }

  TEST_CASE("fractional weight") {
    CHECK(fractional_weight(0, 5, 10, 2, 4) == Rational(4));
    CHECK(fractional_weight(0, 9, 10, 2, 4) == Rational(2));
    CHECK(fractional_weight(0, q("9999/1000"), 10, 2, 4) == q("1/500"));
    CHECK_THROWS_AS(fractional_weight(0, 10, 10, 2, 4), Error);
    CHECK_THROWS_AS(fractional_weight(1, 0, 10, 2, 4), Error);
  }

  TEST_CASE("piecewise linear sums") {
    PiecewiseLinear f;
    f.add_ramp(0, 5, 6, 2);
    f.add_ramp(0, 5, 8, 3);
    f.scale(q("1/2") / (q("3/2") * q("5/4")));
    CHECK(f.at(1) == q("4/3"));
    CHECK(f.at(-1) == Rational(0));
    CHECK(f.at(8) == Rational(0));
    CHECK(f.left_limit(0) == Rational(0));
    // (2 * 5.5 + 3 * 6.5) * 4/15
    CHECK(f.integral() == (Rational(11) + q("39/2")) * q("4/15"));
    CHECK(f.breakpoints() == std::vector<Rational>{0, 5, 6, 8});
  }

  TEST_CASE("idle machine has zero beta") {
    const SimOutcome o = simulate(make(2, "1/2", {job(1, 0, 1, {1, 100})}));
    const DualCertificate cert = build_certificate(o);
    REQUIRE(cert.beta.size() == 2u);
    CHECK(cert.beta[1].integral() == Rational(0));
    CHECK(cert.beta[1].knots().empty());
    CHECK(cert.beta[1].at(0) == Rational(0));
  }

  TEST_CASE("E1 certificate") {
    const SimOutcome o = simulate(e1());
    const DualCertificate cert = build_certificate(o);
    CHECK(cert.alpha_scale == q("1/3"));
    CHECK(cert.beta_scale == q("4/15"));
    CHECK(cert.alpha.at(1) == q("326/3"));
    CHECK(cert.alpha.at(2) == q("82/3"));
    CHECK(cert.alpha.at(3) == q("163/6"));
    // Ramps of areas 4, 7 and 1, scaled by 4/15.
    CHECK(cert.beta[0].integral() == q("16/5"));
    CHECK(dump(certificate_json(cert)) ==
          testing::read_file(testing::fixture_path("e1.certificate.json")));

    const Objectives obj = objectives(cert, o);
    CHECK(obj.dual_obj == q("4799/30"));
    CHECK(obj.primal_lp_cost == Rational(42));
    CHECK(obj.alg_weighted_flow == Rational(2));
    CHECK(obj.sum_w_ctilde == Rational(18));

    for (const auto& c : run_all_checks(cert, o, true)) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
  }

  TEST_CASE("E1 prefixes only raise beta") {
    const Instance in = e1();
    const DualCertificate two = build_certificate(replay_prefix(in, 2));
    const DualCertificate three = build_certificate(replay_prefix(in, 3));
    std::vector<Rational> ts = two.beta[0].breakpoints();
    for (const auto& t : three.beta[0].breakpoints()) ts.push_back(t);
    for (const auto& t : ts) {
      CHECK(two.beta[0].at(t) <= three.beta[0].at(t));
      CHECK(two.beta[0].left_limit(t) <= three.beta[0].left_limit(t));
    }
    CHECK(check_monotonicity(in).pass);
    CHECK(check_monotonicity(make(1, "1/2", {job(1, 0, 1, {1})})).pass);
  }

  TEST_CASE("slot LP cost") {
    const JobSpec j = job(1, 0, 1, {2});
    CHECK(slot_lp_cost(j, 0, 0) == q("85/2"));
    // Independent slot loop for a later start.
    const JobSpec k = job(2, 3, 5, {4});
    Rational expected;
    for (int t = 6; t < 10; ++t) expected += Rational(5) * (Rational(t - 3) / Rational(4) + 21);
    CHECK(slot_lp_cost(k, 0, 6) == expected);
    CHECK_THROWS_AS(slot_lp_cost(j, 0, q("1/2")), Error);
  }

  TEST_CASE("objectives of an empty instance") {
    const SimOutcome o = simulate(make(2, "1/2", {}));
    const Objectives obj = objectives(build_certificate(o), o);
    CHECK(obj.dual_obj == Rational(0));
    CHECK(obj.primal_lp_cost == Rational(0));
    CHECK(obj.alg_weighted_flow == Rational(0));
    CHECK(obj.sum_w_ctilde == Rational(0));
    for (const auto& c : run_all_checks(build_certificate(o), o, true)) CHECK(c.pass);
  }

  TEST_CASE("single job checks") {
    const SimOutcome o = simulate(make(1, "1/2", {job(1, 0, 1, {2})}));
    const DualCertificate cert = build_certificate(o);
    const CheckReport dual = check_dual_feasibility(cert, o);
    CHECK(dual.pass);
    CHECK(dual.margin < Rational(0));
    CHECK(check_alpha_lower_bound(cert, o).pass);
    for (const auto& c : check_weight_balance(o)) CHECK(c.pass);
    CHECK(check_main_inequality(cert, o).pass);
    CHECK(check_completion_order(o).pass);
  }

  TEST_CASE("doubled alpha breaks dual feasibility") {
    const SimOutcome o = simulate(make(1, "1/2", {job(1, 0, 1, {2})}));
    DualCertificate cert = build_certificate(o);
    cert.alpha[1] *= Rational(2);
    const CheckReport r = check_dual_feasibility(cert, o);
    CHECK_FALSE(r.pass);
    CHECK(r.margin > Rational(0));
    CHECK(r.witness.job == 1);
    CHECK(r.witness.machine == 0);
    CHECK(r.witness.time.has_value());
  }

  TEST_CASE("zeroed budgets break the main inequality") {
    bool caught = false;
    for (std::uint64_t seed = 0; seed < 40 && !caught; ++seed) {
      WorkloadSpec spec;
      spec.n = 20;
      spec.m = 1;
      spec.seed = seed;
      SimOutcome o = simulate(generate(spec));
      const DualCertificate cert = build_certificate(o);
      REQUIRE(check_main_inequality(cert, o).pass);
      for (auto& line : o.timeline) {
        for (auto& snap : line) snap.budget = 0;
      }
      const CheckReport r = check_main_inequality(cert, o);
      if (!r.pass) {
        caught = true;
        CHECK(r.margin > Rational(0));
        CHECK(r.witness.time.has_value());
        CHECK(r.witness.machine == 0);
      }
    }
    CHECK(caught);
  }

  TEST_CASE("theorem chain") {
    Objectives obj;
    obj.sum_w_ctilde = 100;
    obj.dual_obj = Rational(100) * q("1/15") - Rational(1);
    obj.primal_lp_cost = 2200;
    const auto chain = check_theorem_chain(obj, q("1/2"));
    REQUIRE(chain.size() == 2u);
    CHECK_FALSE(chain[0].pass);
    CHECK(chain[1].pass);
    obj.dual_obj += 1;
    CHECK(check_theorem_chain(obj, q("1/2"))[0].pass);
  }

  TEST_CASE("all checks pass on random instances") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      WorkloadSpec spec;
      spec.n = 15;
      spec.m = 1 + static_cast<int>(seed % 3);
      spec.seed = 900 + seed;
      const SimOutcome o = simulate(generate(spec));
      for (const auto& c : run_all_checks(build_certificate(o), o, seed % 4 == 0)) {
        CAPTURE(seed);
        CAPTURE(c.name);
        CHECK(c.pass);
      }
    }
  }

  TEST_CASE("rejected weight bounds on E1") {
    const SimOutcome o = simulate(e1());
    const auto r = check_rejected_weight(o);
    CHECK(find(r, "rejected-weight-preempt").pass);
    CHECK(find(r, "rejected-weight-weight-gap").pass);
  }

  TEST_CASE("minimize failing instance") {
    WorkloadSpec spec;
    spec.n = 10;
    spec.seed = 3;
    const Instance in = generate(spec);
    const Instance small = minimize_failing_instance(in, [](const Instance& x) {
      for (const auto& j : x.jobs) {
        if (j.id == 4) return true;
      }
      return false;
    });
    REQUIRE(small.jobs.size() == 1u);
    CHECK(small.jobs[0].id == 4);
  }
}

}  // namespace
}  // namespace flowrej

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
#include <set>
#include <string>
#include <utility>

#include "flowrej/analysis.h"
#include "flowrej/error.h"

namespace flowrej {
namespace {

class Tracker {
 public:
  explicit Tracker(std::string name, bool strict = false) {
    report_.name = std::move(name);
    report_.strict = strict;
  }

  void observe(const Rational& margin, Witness witness) {
    if (report_.evaluations++ == 0 || margin > report_.margin) {
      report_.margin = margin;
      report_.witness = std::move(witness);
    }
  }

  CheckReport finish() && {
    if (report_.evaluations > 0) {
      report_.pass = report_.strict ? report_.margin < Rational(0) : report_.margin <= Rational(0);
    }
    return std::move(report_);
  }

 private:
  CheckReport report_;
};

Witness at_arrival(const ArrivalRecord& a, std::string note = "") {
  return Witness{a.machine, a.time, a.job, std::move(note)};
}

const JobSpec& spec_of(const SimOutcome& o, JobId id) {
  return o.instance.jobs[o.instance.index_of(id)];
}

Rational proc_on(const JobSpec& job, MachineId i) {
  return job.proc[static_cast<std::size_t>(i)];
}

// w^f_h(t), zero outside the support.
Rational fw(const JobSpec& job, MachineId i, const Rational& ctilde, const Rational& t) {
  if (t < job.release || t >= ctilde) return Rational(0);
  return fractional_weight(job.release, t, ctilde, proc_on(job, i), job.weight);
}

std::vector<Rational> sorted_unique(std::vector<Rational> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / Rational(2); }

}  // namespace

std::vector<CheckReport> check_weight_gap_properties(const SimOutcome& o) {
  const Rational eps = o.instance.epsilon;
  Tracker p1("wg-property-1");
  Tracker p2("wg-property-2", /*strict=*/true);
  Tracker p3("wg-property-3");
  Tracker p4("wg-property-4");
  Tracker suffix("wg-suffix");
  for (const auto& a : o.arrivals) {
    const auto& rej = a.decision.rejected;
    switch (a.decision.branch) {
      case WeightGapBranch::kNoSCounterReject:
      case WeightGapBranch::kSWeightLarge:
      case WeightGapBranch::kSArrivalInsideCounterReject:
        p1.observe(a.budget_after, at_arrival(a, std::string(branch_label(a.decision.branch))));
        break;
      default:
        break;
    }
    if (!a.pending_after.empty()) {
      p2.observe(eps * a.budget_after - a.pending_after.back().weight, at_arrival(a, "arrival"));
    }
    const JobSpec& j = spec_of(o, a.job);
    if (!a.arrival_rejected() && !rej.empty()) {
      Rational sum;
      for (JobId h : rej) sum += spec_of(o, h).weight;
      p3.observe(sum - spec_of(o, rej.back()).weight - Rational(2) * eps * j.weight,
                 at_arrival(a));
    }
    if (a.arrival_rejected()) {
      const bool ok = rej.size() == 1 ||
                      (rej.size() == 2 && a.lowest_before() &&
                       std::find(rej.begin(), rej.end(), *a.lowest_before()) != rej.end());
      p4.observe(ok ? Rational(0) : Rational(1), at_arrival(a));
    }
    std::vector<QueuedJob> v = a.pending_before;
    const QueuedJob qj = queued_on(j, a.machine);
    v.insert(std::upper_bound(v.begin(), v.end(), qj, queue_precedes), qj);
    bool contiguous = rej.size() <= v.size();
    for (std::size_t k = 0; contiguous && k < rej.size(); ++k) {
      contiguous = v[v.size() - rej.size() + k].id == rej[k];
    }
    suffix.observe(contiguous ? Rational(0) : Rational(1), at_arrival(a));
  }
  for (std::size_t i = 0; i < o.timeline.size(); ++i) {
    for (const auto& s : o.timeline[i]) {
      if (s.pending.empty()) continue;
      p2.observe(eps * s.budget - s.pending.back().weight,
                 Witness{static_cast<MachineId>(i), s.time, s.pending.back().id, "timeline"});
    }
  }
  std::vector<CheckReport> out;
  out.push_back(std::move(p1).finish());
  out.push_back(std::move(p2).finish());
  out.push_back(std::move(p3).finish());
  out.push_back(std::move(p4).finish());
  out.push_back(std::move(suffix).finish());
  return out;
}

std::vector<CheckReport> check_rejected_weight(const SimOutcome& o) {
  const Rational eps = o.instance.epsilon;
  const SimTotals& t = o.totals;
  Tracker pre("rejected-weight-preempt");
  pre.observe(t.rejected_weight_preempt - eps * t.total_weight, Witness{});
  Tracker wg("rejected-weight-weight-gap");
  wg.observe(t.rejected_weight_weight_gap - Rational(4) * eps * t.total_weight, Witness{});
  std::vector<CheckReport> out;
  out.push_back(std::move(pre).finish());
  out.push_back(std::move(wg).finish());
  return out;
}

CheckReport check_completion_order(const SimOutcome& o) {
  Tracker t("completion-order");
  for (std::size_t k = 0; k < o.jobs.size(); ++k) {
    const JobRecord& r = o.jobs[k];
    const Rational& rel = o.instance.jobs[k].release;
    t.observe(rel - r.last_in_system, Witness{r.machine, r.last_in_system, r.id, "r <= L"});
    t.observe(r.last_in_system - r.ctilde, Witness{r.machine, r.ctilde, r.id, "L <= C~"});
    if (r.completion) {
      t.observe(*r.completion - r.ctilde, Witness{r.machine, r.ctilde, r.id, "C <= C~"});
    }
  }
  return std::move(t).finish();
}

CheckReport check_dual_feasibility(const DualCertificate& cert, const SimOutcome& o) {
  Tracker t("dual-feasibility");
  struct Sample {
    Rational time;
    Rational beta;
    const char* note;
  };
  std::vector<std::vector<Sample>> samples(cert.beta.size());
  for (std::size_t i = 0; i < cert.beta.size(); ++i) {
    const auto& ks = cert.beta[i].knots();
    for (std::size_t k = 0; k < ks.size(); ++k) {
      samples[i].push_back({ks[k].x, ks[k].left, "left"});
      samples[i].push_back({ks[k].x, ks[k].right, "right"});
      if (k + 1 < ks.size()) {
        const Rational mid = midpoint(ks[k].x, ks[k + 1].x);
        samples[i].push_back({mid, cert.beta[i].at(mid), "mid"});
      }
    }
  }
  const Rational c21(21);
  for (const auto& job : o.instance.jobs) {
    const Rational& alpha = cert.alpha.at(job.id);
    for (std::size_t i = 0; i < cert.beta.size(); ++i) {
      const auto m = static_cast<MachineId>(i);
      const Rational p = job.proc[i];
      const Rational base = alpha / p - job.weight * c21;
      const auto margin = [&](const Rational& time, const Rational& beta) {
        return base - beta - job.weight * (time - job.release) / p;
      };
      t.observe(margin(job.release, cert.beta[i].at(job.release)),
                Witness{m, job.release, job.id, "release"});
      for (const auto& s : samples[i]) {
        if (s.time <= job.release) continue;
        t.observe(margin(s.time, s.beta), Witness{m, s.time, job.id, s.note});
      }
    }
  }
  return std::move(t).finish();
}

CheckReport check_main_inequality(const DualCertificate& cert, const SimOutcome& o) {
  Tracker t("main-inequality");
  const Rational inv_eps = Rational(1) / cert.epsilon;
  for (std::size_t i = 0; i < o.timeline.size(); ++i) {
    const auto m = static_cast<MachineId>(i);
    std::vector<std::size_t> rejected;  // weight-gap rejected jobs on i
    for (std::size_t k = 0; k < o.jobs.size(); ++k) {
      if (o.jobs[k].machine == m && o.jobs[k].fate == JobFate::kRejectedWeightGap) {
        rejected.push_back(k);
      }
    }
    const auto eval = [&](const MachineSnapshot& s, const Rational& time) {
      Rational lhs = -s.budget;
      if (s.running) lhs += s.running->weight / s.running->proc * s.running->remaining(time);
      for (const auto& h : s.pending) {
        lhs += fw(spec_of(o, h.id), m, cert.ctilde.at(h.id), time);
      }
      Rational rhs;
      for (std::size_t k : rejected) {
        if (o.jobs[k].last_in_system <= time) {
          rhs += fw(o.instance.jobs[k], m, o.jobs[k].ctilde, time);
        }
      }
      return lhs - inv_eps * rhs;
    };
    std::vector<Rational> pts = cert.beta[i].breakpoints();
    for (const auto& s : o.timeline[i]) pts.push_back(s.time);
    pts = sorted_unique(std::move(pts));
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const MachineSnapshot& s = o.state_at(m, pts[k]);
      const Rational fa = eval(s, pts[k]);
      t.observe(fa, Witness{m, pts[k], std::nullopt, "at"});
      if (k + 1 == pts.size()) continue;
      const Rational mid = midpoint(pts[k], pts[k + 1]);
      const Rational fm = eval(s, mid);
      t.observe(fm, Witness{m, mid, std::nullopt, "mid"});
      t.observe(Rational(2) * fm - fa, Witness{m, pts[k + 1], std::nullopt, "left"});
    }
  }
  return std::move(t).finish();
}

std::vector<CheckReport> check_weight_balance(const SimOutcome& o) {
  const Rational eps = o.instance.epsilon;
  Tracker balance("weight-balance");
  Tracker corollary("weight-balance-corollary");
  for (std::size_t i = 0; i < o.timeline.size(); ++i) {
    const auto m = static_cast<MachineId>(i);
    std::vector<std::size_t> on_machine;
    for (std::size_t k = 0; k < o.jobs.size(); ++k) {
      if (o.jobs[k].machine == m) on_machine.push_back(k);
    }
    for (const auto& s : o.timeline[i]) {
      std::set<JobId> unfinished;
      if (s.running) unfinished.insert(s.running->id);
      for (const auto& h : s.pending) unfinished.insert(h.id);
      Rational d1, d2, b1, b2, b3;
      for (std::size_t k : on_machine) {
        const JobSpec& job = o.instance.jobs[k];
        if (job.release > s.time) continue;
        const JobRecord& r = o.jobs[k];
        const ArrivalRecord& a = o.arrivals[k];
        const Rational p = proc_on(job, m);
        const Rational wp = job.weight * p;
        if (!a.arrival_rejected()) {
          d1 += eps * eps * a.budget_after * p;
          if (!a.pending_before.empty() && a.lowest_after() == job.id &&
              p < eps * a.pending_before.back().proc) {
            d1 -= job.weight * a.pending_before.back().proc;
          }
        } else if (a.decision.rejected.size() == 1) {
          if (!a.pending_after.empty()) d2 += job.weight * a.pending_after.back().proc;
        } else if (!a.pending_before.empty()) {
          d2 += a.pending_before.back().weight * a.pending_before.back().proc;
        }
        const bool wg_rejected =
            r.fate == JobFate::kRejectedWeightGap && r.last_in_system <= s.time;
        if (wg_rejected) {
          b1 += wp;
        } else if (!unfinished.contains(r.id)) {
          b2 += wp;
        }
        b3 += wp / eps;
      }
      if (!s.pending.empty()) b2 += eps * s.budget * s.pending.back().proc;
      balance.observe(d1 - d2 - b1 - b2 - b3, Witness{m, s.time, std::nullopt, ""});
    }
    Rational lhs, rhs;
    for (std::size_t k : on_machine) {
      const JobSpec& job = o.instance.jobs[k];
      const ArrivalRecord& a = o.arrivals[k];
      const Rational p = proc_on(job, m);
      if (!a.arrival_rejected()) lhs += eps * eps * a.budget_after * p;
      rhs += job.weight * p;
    }
    corollary.observe(lhs - Rational(5) / eps * rhs, Witness{m, std::nullopt, std::nullopt, ""});
  }
  std::vector<CheckReport> out;
  out.push_back(std::move(balance).finish());
  out.push_back(std::move(corollary).finish());
  return out;
}

CheckReport check_alpha_lower_bound(const DualCertificate& cert, const SimOutcome& o) {
  Tracker t("alpha-lower-bound");
  Rational alpha_sum, flow;
  for (std::size_t k = 0; k < o.jobs.size(); ++k) {
    const JobSpec& job = o.instance.jobs[k];
    alpha_sum += cert.alpha.at(job.id);
    flow += job.weight * (cert.ctilde.at(job.id) - job.release);
  }
  t.observe(flow - (Rational(1) + cert.epsilon) / cert.epsilon * alpha_sum, Witness{});
  return std::move(t).finish();
}

CheckReport check_monotonicity(const Instance& instance) {
  Tracker t("monotonicity");
  std::optional<DualCertificate> before = build_certificate(replay_prefix(instance, 0));
  for (std::size_t k = 0; k < instance.jobs.size(); ++k) {
    DualCertificate after = build_certificate(replay_prefix(instance, k + 1));
    for (std::size_t i = 0; i < after.beta.size(); ++i) {
      const auto m = static_cast<MachineId>(i);
      const PiecewiseLinear& lo = before->beta[i];
      const PiecewiseLinear& hi = after.beta[i];
      std::vector<Rational> pts = lo.breakpoints();
      for (auto& x : hi.breakpoints()) pts.push_back(std::move(x));
      pts = sorted_unique(std::move(pts));
      const std::string note = "prefix " + std::to_string(k);
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const Rational& x = pts[q];
        t.observe(lo.at(x) - hi.at(x), Witness{m, x, instance.jobs[k].id, note});
        t.observe(lo.left_limit(x) - hi.left_limit(x), Witness{m, x, instance.jobs[k].id, note});
        if (q + 1 < pts.size()) {
          const Rational mid = midpoint(x, pts[q + 1]);
          t.observe(lo.at(mid) - hi.at(mid), Witness{m, mid, instance.jobs[k].id, note});
        }
      }
    }
    before = std::move(after);
  }
  return std::move(t).finish();
}

Rational slot_lp_cost(const JobSpec& job, MachineId machine, const Rational& start) {
  const Rational p = proc_on(job, machine);
  if (!start.is_integer() || !job.release.is_integer() || !p.is_integer()) {
    throw Error(ErrorCode::kGridRequired, "job " + std::to_string(job.id) + " is off-grid");
  }
  // sum_{t=S}^{S+p-1} ((t - r)/p + 21)
  return job.weight * ((start - job.release) + (p - Rational(1)) / Rational(2) + Rational(21) * p);
}

Rational primal_lp_cost(const SimOutcome& o) {
  if (!o.instance.integer_grid()) {
    throw Error(ErrorCode::kGridRequired, "primal LP cost needs integer release and processing times");
  }
  Rational sum;
  for (std::size_t k = 0; k < o.jobs.size(); ++k) {
    const JobRecord& r = o.jobs[k];
    if (r.fate == JobFate::kCompleted) sum += slot_lp_cost(o.instance.jobs[k], r.machine, *r.start);
  }
  return sum;
}

Objectives objectives(const DualCertificate& cert, const SimOutcome& o) {
  Objectives obj;
  for (const auto& [id, a] : cert.alpha) obj.dual_obj += a;
  for (const auto& b : cert.beta) obj.dual_obj -= b.integral();
  if (o.instance.integer_grid()) obj.primal_lp_cost = primal_lp_cost(o);
  obj.alg_weighted_flow = o.totals.weighted_flow;
  for (const auto& job : o.instance.jobs) {
    obj.sum_w_ctilde += job.weight * (cert.ctilde.at(job.id) - job.release);
  }
  return obj;
}

std::vector<CheckReport> check_theorem_chain(const Objectives& obj, const Rational& eps) {
  std::vector<CheckReport> out;
  const Rational one(1);
  const Rational c = eps * eps * eps / ((one + eps) * (one + eps * eps));
  Tracker dual("dual-objective-bound");
  dual.observe(c * obj.sum_w_ctilde - obj.dual_obj, Witness{});
  out.push_back(std::move(dual).finish());
  if (obj.primal_lp_cost) {
    Tracker primal("primal-cost-bound");
    primal.observe(*obj.primal_lp_cost - Rational(22) * obj.sum_w_ctilde, Witness{});
    out.push_back(std::move(primal).finish());
  }
  return out;
}

std::vector<CheckReport> run_all_checks(const DualCertificate& cert, const SimOutcome& o,
                                        bool with_monotonicity) {
  std::vector<CheckReport> out = check_weight_gap_properties(o);
  for (auto& r : check_rejected_weight(o)) out.push_back(std::move(r));
  out.push_back(check_completion_order(o));
  out.push_back(check_main_inequality(cert, o));
  for (auto& r : check_weight_balance(o)) out.push_back(std::move(r));
  out.push_back(check_dual_feasibility(cert, o));
  out.push_back(check_alpha_lower_bound(cert, o));
  for (auto& r : check_theorem_chain(objectives(cert, o), o.instance.epsilon)) {
    out.push_back(std::move(r));
  }
  if (with_monotonicity) out.push_back(check_monotonicity(o.instance));
  return out;
}

Instance minimize_failing_instance(const Instance& instance,
                                   const std::function<bool(const Instance&)>& still_fails) {
  Instance current = instance;
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (std::size_t k = 0; k < current.jobs.size(); ++k) {
      Instance candidate = current;
      candidate.jobs.erase(candidate.jobs.begin() + static_cast<std::ptrdiff_t>(k));
      if (still_fails(candidate)) {
        current = std::move(candidate);
        shrunk = true;
        break;
      }
    }
  }
  return current;
}

}  // namespace flowrej

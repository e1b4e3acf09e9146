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

#include "flowrej/engine.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "flowrej/analysis.h"
#include "flowrej/error.h"

namespace flowrej {
namespace {

class Simulator {
 public:
  Simulator(const Instance& instance, const EngineOptions& options)
      : options_(options), eps_(instance.epsilon) {
    out_.instance = instance;
    const auto m = static_cast<std::size_t>(instance.machines);
    machines_.resize(m);
    for (std::size_t i = 0; i < m; ++i) machines_[i].id = static_cast<MachineId>(i);
    out_.timeline.resize(m);
    for (auto& line : out_.timeline) line.push_back(MachineSnapshot{});
    out_.jobs.resize(instance.jobs.size());
    out_.arrivals.resize(instance.jobs.size());
    for (std::size_t k = 0; k < instance.jobs.size(); ++k) {
      out_.jobs[k].id = instance.jobs[k].id;
      out_.jobs[k].arrival_index = k;
      index_[instance.jobs[k].id] = k;
    }
  }

  SimOutcome run() && {
    const auto& jobs = out_.instance.jobs;
    std::size_t next = 0;
    while (true) {
      std::optional<Rational> now;
      if (next < jobs.size()) now = jobs[next].release;
      for (const auto& m : machines_) {
        if (m.running && (!now || m.running->completion() < *now)) now = m.running->completion();
      }
      if (!now) break;
      complete_jobs(*now);
      while (next < jobs.size() && jobs[next].release == *now) arrive(next++, *now);
      start_jobs(*now);
      snapshot(*now);
    }
    finish();
    return std::move(out_);
  }

 private:
  template <typename E>
  void log(const Rational& t, E event) {
    out_.events.push_back(EventRecord{out_.events.size(), t, std::move(event)});
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << what << "\nlast events:\n";
    const std::string log_text = serialize_event_log(out_);
    // Keep the tail only.
    std::size_t cut = log_text.size();
    for (int lines = 0; lines < 12 && cut > 0; ++lines) {
      cut = log_text.rfind('\n', cut - 1);
      if (cut == std::string::npos) {
        cut = 0;
        break;
      }
    }
    msg << log_text.substr(cut);
    throw Error(ErrorCode::kInvariantViolation, msg.str());
  }

  void expect(bool ok, const std::string& what) const {
    if (!ok) fail(what);
  }

  JobRecord& record(JobId id) { return out_.jobs[index_.at(id)]; }

  void complete_jobs(const Rational& now) {
    for (auto& m : machines_) {
      if (!m.running || m.running->completion() != now) continue;
      JobRecord& r = record(m.running->id);
      r.fate = JobFate::kCompleted;
      r.completion = now;
      r.last_in_system = now;
      log(now, CompleteEvent{m.running->id, m.id});
      m.running.reset();
    }
  }

  Rational greedy_cost(const MachineState& m, const JobSpec& job, const Rational& now) const {
    const QueuedJob j = queued_on(job, m.id);
    Rational cost = j.weight * j.proc;
    if (m.running) cost += j.weight * m.running->remaining(now);
    for (const auto& h : m.pending) {
      const bool ahead = options_.order == QueueOrder::kFirstComeFirstServed ||
                         queue_precedes(h, j);
      cost += ahead ? j.weight * h.proc : j.proc * h.weight;
    }
    return cost;
  }

  void arrive(std::size_t k, const Rational& now) {
    const JobSpec& job = out_.instance.jobs[k];
    DispatchResult choice;
    if (options_.dispatch == DispatchRule::kAlpha) {
      choice = dispatch(machines_, job, eps_);
    } else {
      std::vector<Rational> costs;
      for (const auto& m : machines_) costs.push_back(greedy_cost(m, job, now));
      choice = select_machine(std::move(costs), eps_);
    }
    MachineState& m = machines_[static_cast<std::size_t>(choice.machine)];
    ArrivalRecord& a = out_.arrivals[k];
    a.job = job.id;
    a.machine = m.id;
    a.time = now;
    a.pending_before = m.pending;
    a.budget_before = m.budget;
    a.running_before = m.running;
    a.alpha_j = choice.alpha_j;
    a.alphas = choice.alphas;
    JobRecord& rec = out_.jobs[k];
    rec.machine = m.id;
    rec.alpha = choice.alpha_j;
    log(now, ArrivalEvent{job.id, m.id, choice.alpha_j, choice.alphas});

    std::set<JobId> u_before;
    if (m.running) u_before.insert(m.running->id);
    for (const auto& h : m.pending) u_before.insert(h.id);

    const QueuedJob j = queued_on(job, m.id);
    std::optional<Rational> preempted_remaining;
    if (options_.rejection) {
      const PreemptDecision pre = apply_preempt_rule(m, job.weight, eps_);
      if (pre.count1_after) m.running->count1 = *pre.count1_after;
      if (pre.rejected) {
        JobRecord& victim = record(*pre.rejected);
        victim.fate = JobFate::kRejectedPreempt;
        victim.last_in_system = now;
        victim.rejected_by = job.id;
        victim.remaining_at_rejection = m.running->remaining(now);
        preempted_remaining = victim.remaining_at_rejection;
        a.preempted = *pre.rejected;
        a.preempted_remaining = victim.remaining_at_rejection;
        log(now, RejectPreemptEvent{*pre.rejected, m.id, victim.remaining_at_rejection, job.id});
        m.running.reset();
      }

      a.decision = weight_gap_reject(m.pending, m.budget, m.count2, j, eps_);
      for (const auto& [id, c] : a.decision.counter_updates) m.count2[id] = c;
      m.insert_pending(j);
      for (JobId id : a.decision.rejected) {
        expect(m.erase_pending(id), "weight-gap rule rejected a job not in V");
        m.count2.erase(id);
        JobRecord& victim = record(id);
        victim.fate = JobFate::kRejectedWeightGap;
        victim.last_in_system = now;
        victim.rejected_by = job.id;
      }
      m.budget = a.decision.new_budget;
      if (!a.decision.rejected.empty()) {
        log(now, RejectWeightGapEvent{a.decision.rejected, m.id, job.id, a.decision.branch});
      }
    } else {
      a.decision.new_budget = m.budget;
      m.insert_pending(j);
    }
    a.budget_after = m.budget;
    a.running_after = m.running;
    a.pending_after = m.pending;
    a.delta = compute_delta_ij(m, job, now, preempted_remaining);

    // U(r_j) = (U(r_j^-) + {j}) \ (R1 + R2).
    std::set<JobId> expected = u_before;
    expected.insert(job.id);
    if (a.preempted) expected.erase(*a.preempted);
    for (JobId id : a.decision.rejected) expected.erase(id);
    std::set<JobId> u_after;
    if (m.running) u_after.insert(m.running->id);
    for (const auto& h : m.pending) u_after.insert(h.id);
    expect(u_after == expected, "queue identity broken at arrival of job " + std::to_string(job.id));
    check_budget_invariant(m, "after arrival of job " + std::to_string(job.id));
  }

  void start_jobs(const Rational& now) {
    for (auto& m : machines_) {
      if (m.running || m.pending.empty()) continue;
      std::optional<JobId> pick;
      if (options_.order == QueueOrder::kHighestDensity) {
        pick = next_job_hdf(m);
      } else {
        pick = std::min_element(m.pending.begin(), m.pending.end(),
                                [](const QueuedJob& a, const QueuedJob& b) {
                                  return std::tie(a.release, a.id) < std::tie(b.release, b.id);
                                })
                   ->id;
      }
      auto it = std::find_if(m.pending.begin(), m.pending.end(),
                             [&](const QueuedJob& q) { return q.id == *pick; });
      m.running = RunningJob{it->id, it->release, it->weight, it->proc, now, Rational(0)};
      m.count2.erase(it->id);
      m.pending.erase(it);
      record(*pick).start = now;
      log(now, StartEvent{*pick, m.id});
    }
  }

  void check_budget_invariant(const MachineState& m, const std::string& where) const {
    expect(m.budget >= Rational(0), "negative budget on machine " + std::to_string(m.id));
    if (!options_.rejection || m.pending.empty()) return;
    // eps * W_i(t) < w_{nu_i(t)}
    expect(eps_ * m.budget < m.pending.back().weight,
           "eps*W >= w_nu on machine " + std::to_string(m.id) + " " + where);
  }

  void snapshot(const Rational& now) {
    for (std::size_t i = 0; i < machines_.size(); ++i) {
      const MachineState& m = machines_[i];
      expect(!m.idle() || m.pending.empty(),
             "machine " + std::to_string(i) + " idle with pending jobs");
      if (m.running) {
        for (const auto& h : m.pending) {
          expect(h.id != m.running->id, "running job also pending");
        }
      }
      check_budget_invariant(m, "at t=" + now.str());
      auto& line = out_.timeline[i];
      MachineSnapshot s{now, m.running, m.pending, m.budget};
      if (line.back().time == now) {
        line.back() = std::move(s);
      } else {
        line.push_back(std::move(s));
      }
    }
  }

  void finish() {
    SimTotals& t = out_.totals;
    for (std::size_t k = 0; k < out_.jobs.size(); ++k) {
      const JobSpec& spec = out_.instance.jobs[k];
      const JobRecord& r = out_.jobs[k];
      t.total_weight += spec.weight;
      switch (r.fate) {
        case JobFate::kCompleted:
          expect(r.completion.has_value(), "job without completion");
          t.weighted_flow += spec.weight * (*r.completion - spec.release);
          ++t.completed;
          break;
        case JobFate::kRejectedPreempt:
          t.rejected_weight_preempt += spec.weight;
          ++t.rejected_preempt;
          break;
        case JobFate::kRejectedWeightGap:
          t.rejected_weight_weight_gap += spec.weight;
          ++t.rejected_weight_gap;
          break;
      }
    }
    for (auto& r : out_.jobs) r.ctilde = definitive_completion(out_, r.id);
  }

  EngineOptions options_;
  Rational eps_;
  std::vector<MachineState> machines_;
  std::map<JobId, std::size_t> index_;
  SimOutcome out_;
};

}  // namespace

std::string_view fate_label(JobFate fate) {
  switch (fate) {
    case JobFate::kCompleted: return "completed";
    case JobFate::kRejectedPreempt: return "rejected-preempt";
    case JobFate::kRejectedWeightGap: return "rejected-weight-gap";
  }
  return "?";
}

std::optional<JobId> ArrivalRecord::lowest_before() const {
  if (pending_before.empty()) return std::nullopt;
  return pending_before.back().id;
}

std::optional<JobId> ArrivalRecord::lowest_after() const {
  if (pending_after.empty()) return std::nullopt;
  return pending_after.back().id;
}

const JobRecord& SimOutcome::job(JobId id) const {
  for (const auto& r : jobs) {
    if (r.id == id) return r;
  }
  throw Error(ErrorCode::kUnknownJob, "job " + std::to_string(id));
}

const MachineSnapshot& SimOutcome::state_at(MachineId machine, const Rational& t) const {
  const auto& line = timeline.at(static_cast<std::size_t>(machine));
  auto it = std::upper_bound(line.begin(), line.end(), t,
                             [](const Rational& x, const MachineSnapshot& s) { return x < s.time; });
  if (it == line.begin()) return line.front();
  return *std::prev(it);
}

SimOutcome simulate(const Instance& instance, const EngineOptions& options) {
  validate(instance);
  return Simulator(instance, options).run();
}

SimOutcome replay_prefix(const Instance& instance, std::size_t k) {
  return simulate(prefix(instance, k));
}

}  // namespace flowrej

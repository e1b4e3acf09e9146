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

#include "flowrej/report.h"

#include <cstdio>

namespace flowrej {

Json rational_json(const Rational& r) {
  Json j;
  j["exact"] = r.fraction_str();
  j["approx"] = r.to_double();
  return j;
}

Json check_json(const CheckReport& report) {
  Json j;
  j["name"] = report.name;
  j["pass"] = report.pass;
  j["strict"] = report.strict;
  j["margin"] = rational_json(report.margin);
  j["evaluations"] = report.evaluations;
  Json w = Json::object();
  if (report.witness.machine) w["machine"] = *report.witness.machine;
  if (report.witness.time) w["time"] = rational_json(*report.witness.time);
  if (report.witness.job) w["job"] = *report.witness.job;
  if (!report.witness.note.empty()) w["note"] = report.witness.note;
  j["witness"] = std::move(w);
  return j;
}

Json certificate_json(const DualCertificate& cert) {
  Json j;
  j["epsilon"] = cert.epsilon.fraction_str();
  j["alpha_scale"] = cert.alpha_scale.fraction_str();
  j["beta_scale"] = cert.beta_scale.fraction_str();
  Json jobs = Json::array();
  for (const auto& [id, alpha] : cert.alpha) {
    jobs.push_back(Json{{"job", id},
                        {"alpha", alpha.fraction_str()},
                        {"ctilde", cert.ctilde.at(id).fraction_str()}});
  }
  j["jobs"] = std::move(jobs);
  Json beta = Json::array();
  for (std::size_t i = 0; i < cert.beta.size(); ++i) {
    Json knots = Json::array();
    for (const auto& k : cert.beta[i].knots()) {
      knots.push_back(Json{{"t", k.x.fraction_str()},
                           {"left", k.left.fraction_str()},
                           {"right", k.right.fraction_str()}});
    }
    beta.push_back(Json{{"machine", i},
                        {"integral", cert.beta[i].integral().fraction_str()},
                        {"knots", std::move(knots)}});
  }
  j["beta"] = std::move(beta);
  return j;
}

Json schedule_json(const OracleSchedule& schedule) {
  Json j;
  Json machines = Json::array();
  for (std::size_t i = 0; i < schedule.sequences.size(); ++i) {
    Json seq = Json::array();
    for (JobId id : schedule.sequences[i]) {
      seq.push_back(Json{{"job", id}, {"start", schedule.start.at(id).fraction_str()}});
    }
    machines.push_back(Json{{"machine", i}, {"sequence", std::move(seq)}});
  }
  j["machines"] = std::move(machines);
  j["cost"] = rational_json(schedule.cost);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string instance_digest(const Instance& instance) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_instance(instance)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool Analysis::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Rational theorem_bound(const Rational& eps) {
  const Rational one(1);
  return Rational(22) * (one + eps) * (one + eps * eps) / (eps * eps * eps);
}

Analysis analyze(const Instance& instance, const AnalysisOptions& options) {
  Analysis a;
  a.outcome = simulate(instance);
  a.certificate = build_certificate(a.outcome);
  a.objectives = objectives(a.certificate, a.outcome);
  a.checks = run_all_checks(a.certificate, a.outcome, options.monotonicity);
  if (!options.oracle) return a;

  OracleSection o;
  o.schedule = brute_force_opt(instance, options.oracle_limit);
  o.grid = instance.integer_grid();
  if (o.grid) o.lp_cost = schedule_lp_cost(instance, o.schedule);
  o.hdf_no_reject = baseline(instance, BaselinePolicy::kHdfNoReject).totals.weighted_flow;
  o.fcfs = baseline(instance, BaselinePolicy::kFcfs).totals.weighted_flow;
  o.lower_bound = lower_bound_trivial(instance);
  o.theorem_bound = theorem_bound(instance.epsilon);
  const Rational& alg = a.objectives.alg_weighted_flow;
  if (!o.schedule.cost.is_zero()) {
    o.empirical_ratio = alg / o.schedule.cost;
  } else if (alg.is_zero()) {
    o.empirical_ratio = Rational(1);
  }

  CheckReport ratio{"oracle-competitive", true, alg - o.theorem_bound * o.schedule.cost,
                    Witness{}, false, 1};
  ratio.pass = ratio.margin <= Rational(0);
  a.checks.push_back(std::move(ratio));
  if (o.grid) {
    CheckReport dual{"weak-duality", true, a.objectives.dual_obj - o.lp_cost, Witness{}, false, 1};
    dual.pass = dual.margin <= Rational(0);
    a.checks.push_back(std::move(dual));
  }
  a.oracle = std::move(o);
  return a;
}

Json run_report_json(const Analysis& a, std::optional<std::uint64_t> seed) {
  const SimTotals& t = a.outcome.totals;
  const auto fraction = [&](const Rational& part) {
    return rational_json(t.total_weight.is_zero() ? Rational(0) : part / t.total_weight);
  };
  Json j;
  j["report_version"] = kReportVersion;
  j["tool_version"] = kToolVersion;
  j["instance_digest"] = instance_digest(a.outcome.instance);
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["epsilon"] = rational_json(a.outcome.instance.epsilon);
  j["machines"] = a.outcome.instance.machines;
  j["jobs"] = a.outcome.instance.jobs.size();

  Json totals;
  totals["total_weight"] = rational_json(t.total_weight);
  totals["alg_weighted_flow"] = rational_json(t.weighted_flow);
  totals["completed"] = t.completed;
  totals["rejected_preempt"] = t.rejected_preempt;
  totals["rejected_weight_gap"] = t.rejected_weight_gap;
  totals["rejected_weight_preempt"] = rational_json(t.rejected_weight_preempt);
  totals["rejected_weight_weight_gap"] = rational_json(t.rejected_weight_weight_gap);
  totals["rejected_fraction_preempt"] = fraction(t.rejected_weight_preempt);
  totals["rejected_fraction_weight_gap"] = fraction(t.rejected_weight_weight_gap);
  j["totals"] = std::move(totals);

  Json obj;
  obj["dual_obj"] = rational_json(a.objectives.dual_obj);
  obj["primal_lp_cost"] =
      a.objectives.primal_lp_cost ? rational_json(*a.objectives.primal_lp_cost) : Json(nullptr);
  obj["alg_weighted_flow"] = rational_json(a.objectives.alg_weighted_flow);
  obj["sum_w_ctilde"] = rational_json(a.objectives.sum_w_ctilde);
  j["objectives"] = std::move(obj);

  Json checks = Json::array();
  for (const auto& c : a.checks) checks.push_back(check_json(c));
  j["checks"] = std::move(checks);
  j["all_pass"] = a.all_pass();

  if (a.oracle) {
    const OracleSection& o = *a.oracle;
    Json os;
    os["opt_cost"] = rational_json(o.schedule.cost);
    os["opt_lp_cost"] = o.grid ? rational_json(o.lp_cost) : Json(nullptr);
    os["empirical_ratio"] = o.empirical_ratio ? rational_json(*o.empirical_ratio) : Json(nullptr);
    os["theorem_bound"] = rational_json(o.theorem_bound);
    os["lower_bound"] = rational_json(o.lower_bound);
    os["baselines"] = Json{{"hdf-no-reject", rational_json(o.hdf_no_reject)},
                           {"fcfs", rational_json(o.fcfs)}};
    os["schedule"] = schedule_json(o.schedule);
    j["oracle"] = std::move(os);
  }
  return j;
}

}  // namespace flowrej

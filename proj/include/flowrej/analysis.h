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

#ifndef FLOWREJ_ANALYSIS_H_
#define FLOWREJ_ANALYSIS_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowrej/engine.h"
#include "flowrej/instance.h"
#include "flowrej/rational.h"

namespace flowrej {

// Definitive completion time of job `id` from a finished outcome.
// Throws Error(kUnknownJob).
Rational definitive_completion(const SimOutcome& outcome, JobId id);

// Artificial fractional weight: w on [r, ctilde - p], then a linear ramp to 0
// at ctilde. Throws Error(kOutOfSupport) unless release <= t < ctilde.
Rational fractional_weight(const Rational& release, const Rational& t, const Rational& ctilde,
                           const Rational& proc, const Rational& weight);

// Sum of plateau-then-ramp pieces. Right-continuous; every piece is zero
// outside [start, end).
class PiecewiseLinear {
 public:
  struct Knot {
    Rational x;
    Rational left;   // limit from the left
    Rational right;  // value at x
  };

  PiecewiseLinear() = default;

  // weight on [start, plateau_end], linear to 0 on [plateau_end, end].
  void add_ramp(const Rational& start, const Rational& plateau_end, const Rational& end,
                const Rational& weight);
  // Multiplies every value by `factor` (factor >= 0).
  void scale(const Rational& factor);

  Rational at(const Rational& t) const;
  Rational left_limit(const Rational& t) const;
  Rational integral() const;
  std::vector<Rational> breakpoints() const;
  const std::vector<Knot>& knots() const;

 private:
  struct Ramp {
    Rational start, plateau_end, end, weight;
  };
  void rebuild() const;

  std::vector<Ramp> ramps_;
  Rational factor_{1};
  mutable bool dirty_ = false;
  mutable std::vector<Knot> knots_;
};

struct DualCertificate {
  Rational epsilon;
  Rational alpha_scale;  // eps/(1+eps)
  Rational beta_scale;   // eps/((1+eps)(1+eps^2))
  std::map<JobId, Rational> alpha;
  std::map<JobId, Rational> ctilde;
  std::vector<PiecewiseLinear> beta;  // per machine
};

DualCertificate build_certificate(const SimOutcome& outcome);

struct Witness {
  std::optional<MachineId> machine;
  std::optional<Rational> time;
  std::optional<JobId> job;
  std::string note;
};

// Margin is the worst LHS - RHS seen. A non-strict check passes iff
// margin <= 0, a strict one iff margin < 0.
struct CheckReport {
  std::string name;
  bool pass = true;
  Rational margin;
  Witness witness;
  bool strict = false;
  std::size_t evaluations = 0;
};

std::vector<CheckReport> check_weight_gap_properties(const SimOutcome& outcome);
std::vector<CheckReport> check_rejected_weight(const SimOutcome& outcome);
CheckReport check_completion_order(const SimOutcome& outcome);
CheckReport check_dual_feasibility(const DualCertificate& cert, const SimOutcome& outcome);
CheckReport check_main_inequality(const DualCertificate& cert, const SimOutcome& outcome);
// Two reports: the per-timestamp balance and its end-of-run corollary.
std::vector<CheckReport> check_weight_balance(const SimOutcome& outcome);
CheckReport check_alpha_lower_bound(const DualCertificate& cert, const SimOutcome& outcome);
CheckReport check_monotonicity(const Instance& instance);

struct Objectives {
  Rational dual_obj;
  std::optional<Rational> primal_lp_cost;  // integer-grid instances only
  Rational alg_weighted_flow;
  Rational sum_w_ctilde;
};

// Sum over the unit slots [t, t+1) a job occupies of w((t - r)/p + 21).
// Throws Error(kGridRequired) on non-integer data.
Rational slot_lp_cost(const JobSpec& job, MachineId machine, const Rational& start);
Rational primal_lp_cost(const SimOutcome& outcome);
Objectives objectives(const DualCertificate& cert, const SimOutcome& outcome);
// dual_obj >= eps^3/((1+eps)(1+eps^2)) sum_w_ctilde, and on grid instances
// primal_lp_cost <= 22 sum_w_ctilde.
std::vector<CheckReport> check_theorem_chain(const Objectives& obj, const Rational& epsilon);

// Every check above. Monotonicity replays prefixes and is opt-in.
std::vector<CheckReport> run_all_checks(const DualCertificate& cert, const SimOutcome& outcome,
                                        bool with_monotonicity);

// Greedily drops jobs while `still_fails` keeps returning true.
Instance minimize_failing_instance(const Instance& instance,
                                   const std::function<bool(const Instance&)>& still_fails);

}  // namespace flowrej

#endif  // FLOWREJ_ANALYSIS_H_

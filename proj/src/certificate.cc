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

#include "flowrej/analysis.h"

namespace flowrej {

void PiecewiseLinear::add_ramp(const Rational& start, const Rational& plateau_end,
                               const Rational& end, const Rational& weight) {
  ramps_.push_back(Ramp{start, plateau_end, end, weight});
  dirty_ = true;
}

void PiecewiseLinear::scale(const Rational& factor) {
  factor_ *= factor;
  dirty_ = true;
}

void PiecewiseLinear::rebuild() const {
  std::vector<Rational> xs;
  for (const auto& r : ramps_) {
    xs.push_back(r.start);
    xs.push_back(r.plateau_end);
    xs.push_back(r.end);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  knots_.clear();
  knots_.reserve(xs.size());
  for (const auto& x : xs) {
    Knot k{x, Rational(0), Rational(0)};
    for (const auto& r : ramps_) {
      const auto ramp = [&](const Rational& t) {
        return t <= r.plateau_end ? r.weight : r.weight * (r.end - t) / (r.end - r.plateau_end);
      };
      if (r.start <= x && x < r.end) k.right += ramp(x);
      if (r.start < x && x <= r.end) k.left += ramp(x);
    }
    k.left *= factor_;
    k.right *= factor_;
    knots_.push_back(std::move(k));
  }
  dirty_ = false;
}

const std::vector<PiecewiseLinear::Knot>& PiecewiseLinear::knots() const {
  if (dirty_) rebuild();
  return knots_;
}

Rational PiecewiseLinear::at(const Rational& t) const {
  const auto& ks = knots();
  auto it = std::upper_bound(ks.begin(), ks.end(), t,
                             [](const Rational& x, const Knot& k) { return x < k.x; });
  if (it == ks.begin()) return Rational(0);
  const Knot& a = *std::prev(it);
  if (a.x == t || it == ks.end()) return a.right;
  const Knot& b = *it;
  return a.right + (b.left - a.right) * (t - a.x) / (b.x - a.x);
}

Rational PiecewiseLinear::left_limit(const Rational& t) const {
  const auto& ks = knots();
  auto it = std::lower_bound(ks.begin(), ks.end(), t,
                             [](const Knot& k, const Rational& x) { return k.x < x; });
  if (it != ks.end() && it->x == t) return it->left;
  return at(t);
}

Rational PiecewiseLinear::integral() const {
  Rational sum;
  for (const auto& r : ramps_) {
    sum += r.weight * (r.plateau_end - r.start) + r.weight * (r.end - r.plateau_end) / Rational(2);
  }
  return sum * factor_;
}

std::vector<Rational> PiecewiseLinear::breakpoints() const {
  std::vector<Rational> xs;
  for (const auto& k : knots()) xs.push_back(k.x);
  return xs;
}

DualCertificate build_certificate(const SimOutcome& outcome) {
  const Rational eps = outcome.instance.epsilon;
  DualCertificate cert;
  cert.epsilon = eps;
  cert.alpha_scale = eps / (Rational(1) + eps);
  cert.beta_scale = eps / ((Rational(1) + eps) * (Rational(1) + eps * eps));
  cert.beta.resize(static_cast<std::size_t>(outcome.instance.machines));
  for (std::size_t k = 0; k < outcome.jobs.size(); ++k) {
    const JobSpec& spec = outcome.instance.jobs[k];
    const JobRecord& rec = outcome.jobs[k];
    const auto i = static_cast<std::size_t>(rec.machine);
    cert.alpha[rec.id] = rec.alpha;
    cert.ctilde[rec.id] = rec.ctilde;
    cert.beta[i].add_ramp(spec.release, rec.ctilde - spec.proc[i], rec.ctilde, spec.weight);
  }
  for (auto& b : cert.beta) b.scale(cert.beta_scale);
  return cert;
}

}  // namespace flowrej

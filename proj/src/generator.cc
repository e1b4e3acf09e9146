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

#include "flowrej/error.h"
#include "flowrej/instance.h"

namespace flowrej {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

void validate(const WorkloadSpec& spec) {
  if (spec.m < 1) throw Error(ErrorCode::kBadWorkloadSpec, "m must be >= 1");
  if (spec.p_min < 1 || spec.p_min > spec.p_max) {
    throw Error(ErrorCode::kBadWorkloadSpec, "need 1 <= p_min <= p_max");
  }
  if (spec.w_min < 1 || spec.w_min > spec.w_max) {
    throw Error(ErrorCode::kBadWorkloadSpec, "need 1 <= w_min <= w_max");
  }
  if (spec.mean_interarrival < 1) {
    throw Error(ErrorCode::kBadWorkloadSpec, "mean_interarrival must be positive");
  }
  if (spec.epsilon <= Rational(0) || spec.epsilon >= Rational(1)) {
    throw Error(ErrorCode::kBadEpsilon, "epsilon must lie in (0,1)");
  }
}

Instance generate(const WorkloadSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  Instance instance;
  instance.machines = spec.m;
  instance.epsilon = spec.epsilon;
  std::int64_t release = 0;
  for (std::size_t j = 0; j < spec.n; ++j) {
    JobSpec job;
    job.id = static_cast<JobId>(j);
    release += rng.uniform(0, 2 * spec.mean_interarrival);
    job.release = Rational(release);
    job.weight = Rational(rng.uniform(spec.w_min, spec.w_max));
    for (int i = 0; i < spec.m; ++i) {
      job.proc.emplace_back(rng.uniform(spec.p_min, spec.p_max));
    }
    instance.jobs.push_back(std::move(job));
  }
  return instance;
}

}  // namespace flowrej

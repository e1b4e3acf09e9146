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

#ifndef FLOWREJ_INSTANCE_H_
#define FLOWREJ_INSTANCE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flowrej/rational.h"

namespace flowrej {

using JobId = std::int64_t;
using MachineId = int;

struct JobSpec {
  JobId id = 0;
  Rational release;
  Rational weight;
  // proc[i] is the processing time on machine i; one entry per machine.
  std::vector<Rational> proc;
};

// w_j / p_ij. Throws MissingProcessingTime for an unknown machine.
Rational density(const JobSpec& job, MachineId machine);

struct Instance {
  int machines = 1;
  Rational epsilon{1, 2};
  // Sorted by (release, id).
  std::vector<JobSpec> jobs;

  // True iff every release and processing time is an integer.
  bool integer_grid() const;
  Rational total_weight() const;
  // Index of `id` in `jobs`; throws UnknownJob.
  std::size_t index_of(JobId id) const;
};

// Throws Error with the first violated invariant.
void validate(const Instance& instance);

// Sorts jobs by (release, id) in place.
void sort_jobs(Instance& instance);

// JSON Lines: a header object followed by one object per job.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& instance);

Instance read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const Instance& instance);

// Sub-instance with the first k jobs in (release, id) order. Throws BadPrefix.
Instance prefix(const Instance& instance, std::size_t k);

struct WorkloadSpec {
  std::size_t n = 10;
  int m = 2;
  std::int64_t p_min = 1;
  std::int64_t p_max = 10;
  std::int64_t w_min = 1;
  std::int64_t w_max = 10;
  std::int64_t mean_interarrival = 2;
  std::uint64_t seed = 0;
  Rational epsilon{1, 2};
};

void validate(const WorkloadSpec& spec);

// SplitMix64 (Steele, Lea, Flood 2014):
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // lo + next() % (hi - lo + 1); requires lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

// Deterministic in `spec`. For each job id j = 0..n-1, in order, draws:
//   gap   = uniform(0, 2 * mean_interarrival), release = previous release + gap
//           (the previous release of job 0 is 0),
//   w_j   = uniform(w_min, w_max),
//   p_ij  = uniform(p_min, p_max) for i = 0..m-1.
Instance generate(const WorkloadSpec& spec);

}  // namespace flowrej

#endif  // FLOWREJ_INSTANCE_H_

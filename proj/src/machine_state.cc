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

#include "flowrej/machine_state.h"

#include <algorithm>
#include <tuple>

namespace flowrej {

QueuedJob queued_on(const JobSpec& job, MachineId machine) {
  return QueuedJob{job.id, job.release, job.weight,
                   job.proc.at(static_cast<std::size_t>(machine)), density(job, machine)};
}

bool queue_precedes(const QueuedJob& a, const QueuedJob& b) {
  if (a.density != b.density) return a.density > b.density;
  return std::tie(a.release, a.id) < std::tie(b.release, b.id);
}

void MachineState::insert_pending(const QueuedJob& job) {
  auto pos = std::upper_bound(pending.begin(), pending.end(), job, queue_precedes);
  pending.insert(pos, job);
}

bool MachineState::erase_pending(JobId job_id) {
  auto it = std::find_if(pending.begin(), pending.end(),
                         [&](const QueuedJob& q) { return q.id == job_id; });
  if (it == pending.end()) return false;
  pending.erase(it);
  return true;
}

std::optional<JobId> next_job_hdf(const MachineState& state) {
  if (state.pending.empty()) return std::nullopt;
  auto best = std::min_element(state.pending.begin(), state.pending.end(), queue_precedes);
  return best->id;
}

}  // namespace flowrej

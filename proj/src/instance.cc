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

#include "flowrej/instance.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "flowrej/error.h"
#include "json.hpp"

namespace flowrej {
namespace {

using ordered_json = nlohmann::ordered_json;

Rational rational_from_json(const ordered_json& v, const std::string& what) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        return Rational::parse(std::to_string(u));
      }
      return Rational(static_cast<std::int64_t>(u));
    }
    return Rational(v.get<std::int64_t>());
  }
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  throw Error(ErrorCode::kBadFormat, what + " must be an integer or a \"num/den\" string");
}

ordered_json rational_to_json(const Rational& r) {
  if (r.is_integer()) {
    try {
      return r.to_int64();
    } catch (const Error&) {
      return r.str();
    }
  }
  return r.fraction_str();
}

const ordered_json& require(const ordered_json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kBadFormat,
                "line " + std::to_string(line) + ": missing key \"" + key + "\"");
  }
  return *it;
}

std::optional<int> machine_index(const std::string& key) {
  if (key.size() < 2 || key[0] != 'm') return std::nullopt;
  int value = 0;
  for (std::size_t k = 1; k < key.size(); ++k) {
    if (key[k] < '0' || key[k] > '9') return std::nullopt;
    if (value > 1'000'000) return std::nullopt;
    value = value * 10 + (key[k] - '0');
  }
  if (key.size() > 2 && key[1] == '0') return std::nullopt;
  return value;
}

}  // namespace

Rational density(const JobSpec& job, MachineId machine) {
  if (machine < 0 || static_cast<std::size_t>(machine) >= job.proc.size()) {
    throw Error(ErrorCode::kMissingProcessingTime,
                "job " + std::to_string(job.id) + " has no processing time on m" +
                    std::to_string(machine));
  }
  return job.weight / job.proc[static_cast<std::size_t>(machine)];
}

bool Instance::integer_grid() const {
  for (const auto& job : jobs) {
    if (!job.release.is_integer()) return false;
    for (const auto& p : job.proc) {
      if (!p.is_integer()) return false;
    }
  }
  return true;
}

Rational Instance::total_weight() const {
  Rational total;
  for (const auto& job : jobs) total += job.weight;
  return total;
}

std::size_t Instance::index_of(JobId id) const {
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (jobs[k].id == id) return k;
  }
  throw Error(ErrorCode::kUnknownJob, "job " + std::to_string(id));
}

void validate(const Instance& instance) {
  if (instance.machines < 1) {
    throw Error(ErrorCode::kNonPositiveValue, "machine count must be positive");
  }
  if (instance.epsilon <= Rational(0) || instance.epsilon >= Rational(1)) {
    throw Error(ErrorCode::kBadEpsilon,
                "epsilon must lie in (0,1), got " + instance.epsilon.str());
  }
  std::set<JobId> seen;
  for (const auto& job : instance.jobs) {
    const std::string who = "job " + std::to_string(job.id);
    if (job.id < 0) throw Error(ErrorCode::kBadFormat, who + ": negative id");
    if (!seen.insert(job.id).second) throw Error(ErrorCode::kDuplicateJobId, who);
    if (job.proc.size() < static_cast<std::size_t>(instance.machines)) {
      throw Error(ErrorCode::kMissingProcessingTime,
                  who + ": no processing time on m" + std::to_string(job.proc.size()));
    }
    if (job.proc.size() > static_cast<std::size_t>(instance.machines)) {
      throw Error(ErrorCode::kBadFormat, who + ": more processing times than machines");
    }
    if (job.release < Rational(0)) {
      throw Error(ErrorCode::kNonPositiveValue, who + ": negative release time");
    }
    if (job.weight <= Rational(0)) {
      throw Error(ErrorCode::kNonPositiveValue, who + ": weight must be positive");
    }
    for (std::size_t i = 0; i < job.proc.size(); ++i) {
      if (job.proc[i] <= Rational(0)) {
        throw Error(ErrorCode::kNonPositiveValue,
                    who + ": processing time on m" + std::to_string(i) + " must be positive");
      }
    }
  }
  for (std::size_t k = 1; k < instance.jobs.size(); ++k) {
    const auto& a = instance.jobs[k - 1];
    const auto& b = instance.jobs[k];
    if (std::tie(b.release, b.id) < std::tie(a.release, a.id)) {
      throw Error(ErrorCode::kBadFormat, "jobs not sorted by (release, id)");
    }
  }
}

void sort_jobs(Instance& instance) {
  std::sort(instance.jobs.begin(), instance.jobs.end(), [](const JobSpec& a, const JobSpec& b) {
    return std::tie(a.release, a.id) < std::tie(b.release, b.id);
  });
}

Instance parse_instance(std::string_view text) {
  Instance instance;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kBadFormat, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(ErrorCode::kBadFormat, "line " + std::to_string(line_no) + ": not an object");
    }
    if (!have_header) {
      const auto& machines = require(obj, "machines", line_no);
      if (!machines.is_number_integer() || machines.get<std::int64_t>() < 1 ||
          machines.get<std::int64_t>() > 1'000'000) {
        throw Error(ErrorCode::kNonPositiveValue, "machines must be a positive integer");
      }
      instance.machines = static_cast<int>(machines.get<std::int64_t>());
      instance.epsilon = rational_from_json(require(obj, "epsilon", line_no), "epsilon");
      have_header = true;
      continue;
    }
    JobSpec job;
    const auto& id = require(obj, "id", line_no);
    if (!id.is_number_integer()) throw Error(ErrorCode::kBadFormat, "id must be an integer");
    job.id = id.get<JobId>();
    job.release = rational_from_json(require(obj, "r", line_no), "r");
    job.weight = rational_from_json(require(obj, "w", line_no), "w");
    const auto& p = require(obj, "p", line_no);
    if (!p.is_object()) throw Error(ErrorCode::kBadFormat, "p must be an object");
    std::vector<std::optional<Rational>> proc(static_cast<std::size_t>(instance.machines));
    for (const auto& [key, value] : p.items()) {
      const auto idx = machine_index(key);
      if (!idx || *idx >= instance.machines) {
        throw Error(ErrorCode::kBadFormat, "job " + std::to_string(job.id) +
                                               ": unknown machine key \"" + key + "\"");
      }
      proc[static_cast<std::size_t>(*idx)] = rational_from_json(value, "p." + key);
    }
    for (std::size_t i = 0; i < proc.size(); ++i) {
      if (!proc[i]) {
        throw Error(ErrorCode::kMissingProcessingTime,
                    "job " + std::to_string(job.id) + ": no entry \"m" + std::to_string(i) + "\"");
      }
      job.proc.push_back(*proc[i]);
    }
    instance.jobs.push_back(std::move(job));
  }
  if (!have_header) throw Error(ErrorCode::kBadFormat, "missing header line");
  sort_jobs(instance);
  validate(instance);
  return instance;
}

std::string serialize_instance(const Instance& instance) {
  std::string out;
  ordered_json header;
  header["machines"] = instance.machines;
  header["epsilon"] = instance.epsilon.fraction_str();
  out += header.dump() + "\n";
  for (const auto& job : instance.jobs) {
    ordered_json obj;
    obj["id"] = job.id;
    obj["r"] = rational_to_json(job.release);
    obj["w"] = rational_to_json(job.weight);
    ordered_json p = ordered_json::object();
    for (std::size_t i = 0; i < job.proc.size(); ++i) {
      p["m" + std::to_string(i)] = rational_to_json(job.proc[i]);
    }
    obj["p"] = std::move(p);
    out += obj.dump() + "\n";
  }
  return out;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kBadFormat, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_instance_file(const std::string& path, const Instance& instance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kBadFormat, "cannot write " + path);
  out << serialize_instance(instance);
}

Instance prefix(const Instance& instance, std::size_t k) {
  if (k > instance.jobs.size()) {
    throw Error(ErrorCode::kBadPrefix, "prefix " + std::to_string(k) + " of " +
                                           std::to_string(instance.jobs.size()) + " jobs");
  }
  Instance sub = instance;
  sub.jobs.resize(k);
  return sub;
}

}  // namespace flowrej

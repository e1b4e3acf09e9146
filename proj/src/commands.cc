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

#include "flowrej/commands.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <thread>

#include "flowrej/error.h"
#include "flowrej/report.h"

namespace flowrej {
namespace {

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kBadFormat, "cannot write " + path);
  file << text;
}

Instance load(const std::string& path, const CommandOptions& options) {
  Instance instance = read_instance_file(path);
  if (options.epsilon) {
    instance.epsilon = *options.epsilon;
    validate(instance);
  }
  return instance;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "flowrej: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvariantViolation ? kExitCheckFailure : kExitUsage;
  } catch (const std::exception& e) {
    err << "flowrej: " << e.what() << "\n";
    return kExitUsage;
  }
}

void warn_limit(const CommandOptions& options, std::ostream& err) {
  if (options.oracle_limit > kDefaultOracleLimit) {
    err << "flowrej: warning: oracle limit " << options.oracle_limit
        << " exceeds the default " << kDefaultOracleLimit << "; enumeration may be slow\n";
  }
}

int report(const Analysis& a, const CommandOptions& options, std::ostream& out) {
  write_text(options.out, dump(run_report_json(a, options.seed)), out);
  return a.all_pass() ? kExitOk : kExitCheckFailure;
}

}  // namespace

int cmd_run(const std::string& path, const CommandOptions& options, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const Instance instance = load(path, options);
    if (options.oracle) warn_limit(options, err);
    AnalysisOptions ao;
    ao.oracle = options.oracle;
    ao.oracle_limit = options.oracle_limit;
    const Analysis a = analyze(instance, ao);
    if (!options.events_out.empty()) {
      write_text(options.events_out, serialize_event_log(a.outcome), out);
    }
    if (!options.certificate_out.empty()) {
      write_text(options.certificate_out, dump(certificate_json(a.certificate)), out);
    }
    return report(a, options, out);
  });
}

int cmd_verify(const std::string& path, const CommandOptions& options, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    AnalysisOptions ao;
    ao.monotonicity = true;
    return report(analyze(load(path, options), ao), options, out);
  });
}

int cmd_gen(WorkloadSpec spec, const CommandOptions& options, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    if (options.epsilon) spec.epsilon = *options.epsilon;
    if (options.seed) spec.seed = *options.seed;
    write_text(options.out, serialize_instance(generate(spec)), out);
    return kExitOk;
  });
}

int cmd_oracle(const std::string& path, const CommandOptions& options, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    warn_limit(options, err);
    AnalysisOptions ao;
    ao.oracle = true;
    ao.oracle_limit = options.oracle_limit;
    return report(analyze(load(path, options), ao), options, out);
  });
}

int cmd_sweep(const SweepOptions& sweep, const CommandOptions& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    validate(sweep.workload);
    if (sweep.epsilons.empty()) throw Error(ErrorCode::kBadEpsilon, "empty epsilon list");
    if (options.oracle) warn_limit(options, err);

    struct Task {
      std::size_t row;
      WorkloadSpec spec;
    };
    struct Result {
      std::optional<Analysis> analysis;
      std::string error;
    };
    std::vector<Task> tasks;
    for (std::size_t r = 0; r < sweep.epsilons.size(); ++r) {
      for (std::size_t k = 0; k < sweep.count; ++k) {
        WorkloadSpec spec = sweep.workload;
        spec.epsilon = sweep.epsilons[r];
        spec.seed = sweep.workload.seed + k;
        validate(spec);
        tasks.push_back({r, spec});
      }
    }
    std::vector<Result> results(tasks.size());
    AnalysisOptions ao;
    ao.monotonicity = sweep.monotonicity;
    ao.oracle = options.oracle;
    ao.oracle_limit = options.oracle_limit;

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
        try {
          results[t].analysis = analyze(generate(tasks[t].spec), ao);
        } catch (const std::exception& e) {
          results[t].error = e.what();
        }
      }
    };
    std::size_t threads = sweep.threads != 0 ? sweep.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool all_pass = true;
    Json rows = Json::array();
    for (std::size_t r = 0; r < sweep.epsilons.size(); ++r) {
      Rational max_pre, max_wg;
      std::optional<Rational> max_ratio;
      std::map<std::string, std::size_t> passes;
      std::vector<std::string> check_order;
      Json failures = Json::array();
      std::size_t ok_runs = 0;
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (tasks[t].row != r) continue;
        const std::uint64_t seed = tasks[t].spec.seed;
        if (!results[t].analysis) {
          failures.push_back(Json{{"seed", seed}, {"error", results[t].error}});
          continue;
        }
        const Analysis& a = *results[t].analysis;
        const SimTotals& tot = a.outcome.totals;
        if (!tot.total_weight.is_zero()) {
          max_pre = max(max_pre, tot.rejected_weight_preempt / tot.total_weight);
          max_wg = max(max_wg, tot.rejected_weight_weight_gap / tot.total_weight);
        }
        if (a.oracle && a.oracle->empirical_ratio) {
          max_ratio = max_ratio ? max(*max_ratio, *a.oracle->empirical_ratio)
                                : *a.oracle->empirical_ratio;
        }
        Json failed = Json::array();
        for (const auto& c : a.checks) {
          if (!passes.contains(c.name)) {
            passes[c.name] = 0;
            check_order.push_back(c.name);
          }
          if (c.pass) {
            ++passes[c.name];
          } else {
            failed.push_back(c.name);
          }
        }
        if (failed.empty()) {
          ++ok_runs;
        } else {
          failures.push_back(Json{{"seed", seed}, {"failed_checks", std::move(failed)}});
        }
      }
      if (!failures.empty()) all_pass = false;
      Json row;
      row["epsilon"] = rational_json(sweep.epsilons[r]);
      row["count"] = sweep.count;
      row["passing_runs"] = ok_runs;
      row["max_rejected_fraction_preempt"] = rational_json(max_pre);
      row["max_rejected_fraction_weight_gap"] = rational_json(max_wg);
      row["max_empirical_ratio"] = max_ratio ? rational_json(*max_ratio) : Json(nullptr);
      Json counts = Json::object();
      for (const auto& name : check_order) counts[name] = passes[name];
      row["check_pass_counts"] = std::move(counts);
      row["failures"] = std::move(failures);
      rows.push_back(std::move(row));
    }
    Json j;
    j["report_version"] = kReportVersion;
    j["tool_version"] = kToolVersion;
    j["seed"] = sweep.workload.seed;
    const WorkloadSpec& w = sweep.workload;
    j["workload"] = Json{{"n", w.n},
                         {"m", w.m},
                         {"p_range", Json::array({w.p_min, w.p_max})},
                         {"w_range", Json::array({w.w_min, w.w_max})},
                         {"mean_interarrival", w.mean_interarrival}};
    j["rows"] = std::move(rows);
    j["all_pass"] = all_pass;
    write_text(options.out, dump(j), out);
    return all_pass ? kExitOk : kExitCheckFailure;
  });
}

}  // namespace flowrej

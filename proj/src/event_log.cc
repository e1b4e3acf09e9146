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

#include <string>
#include <variant>

#include "json.hpp"

#include "flowrej/engine.h"

namespace flowrej {
namespace {

using Json = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json event_json(const EventRecord& e) {
  Json j;
  j["seq"] = e.seq;
  j["t"] = e.time.fraction_str();
  std::visit(Overloaded{
                 [&](const ArrivalEvent& a) {
                   j["event"] = "arrival";
                   j["job"] = a.job;
                   j["machine"] = a.machine;
                   j["alpha_j"] = a.alpha_j.fraction_str();
                   Json alphas = Json::array();
                   for (const auto& x : a.alphas) alphas.push_back(x.fraction_str());
                   j["alpha_ij"] = std::move(alphas);
                 },
                 [&](const StartEvent& s) {
                   j["event"] = "start";
                   j["job"] = s.job;
                   j["machine"] = s.machine;
                 },
                 [&](const CompleteEvent& c) {
                   j["event"] = "complete";
                   j["job"] = c.job;
                   j["machine"] = c.machine;
                 },
                 [&](const RejectPreemptEvent& r) {
                   j["event"] = "reject-preempt";
                   j["job"] = r.job;
                   j["machine"] = r.machine;
                   j["remaining"] = r.remaining.fraction_str();
                   j["trigger"] = r.trigger;
                 },
                 [&](const RejectWeightGapEvent& r) {
                   j["event"] = "reject-weight-gap";
                   j["jobs"] = r.jobs;
                   j["machine"] = r.machine;
                   j["trigger"] = r.trigger;
                   j["branch"] = std::string(branch_label(r.branch));
                 },
             },
             e.kind);
  return j;
}

}  // namespace

std::string serialize_event_log(const SimOutcome& outcome) {
  std::string out;
  for (const auto& e : outcome.events) {
    out += event_json(e).dump();
    out += '\n';
  }
  return out;
}

}  // namespace flowrej

#ifndef FAIRFLUID_JSON_IO_HPP
#define FAIRFLUID_JSON_IO_HPP

#include <string>

#include "core/dynamics.hpp"
#include "core/fairness.hpp"
#include "core/model.hpp"
#include "core/policy_lab.hpp"

namespace fairfluid {

// Instance document: {"lambdas": [..], "rewards": [..],
//   "departures": [[..]], "revenue": {"kind": ..., ...}}
Instance instance_from_json(const std::string& text);
Instance instance_from_file(const std::string& path);
std::string instance_to_json(const Instance& inst);

// Policy document: {"kind": "static"|"cyclic"|"cohort"|"reward-slashing", ...}
Policy policy_from_json(const std::string& text, const Instance& inst);
Policy policy_from_file(const std::string& path, const Instance& inst);

std::string cycle_profile_to_json(const CycleProfile& profile);
std::string fluid_opt_result_to_json(const FluidOptResult& result);
std::string audit_report_to_json(const AuditReport& report);

}  // namespace fairfluid

#endif

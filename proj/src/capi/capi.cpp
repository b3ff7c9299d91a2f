#include "fairfluid.h"

#include <cstring>
#include <string>

#include "json.hpp"

#include "core/dynamics.hpp"
#include "core/fairness.hpp"
#include "core/json_io.hpp"
#include "core/model.hpp"
#include "core/policy_lab.hpp"
#include "core/repro.hpp"

using nlohmann::json;

struct ff_instance {
  fairfluid::Instance inner;
};

struct ff_policy {
  fairfluid::Policy inner;
};

namespace {

thread_local std::string g_last_error;

ff_status status_of(fairfluid::ErrorCode code) {
  using fairfluid::ErrorCode;
  switch (code) {
    case ErrorCode::NegativeArrival: return FF_ERR_NEGATIVE_ARRIVAL;
    case ErrorCode::DepartureOutOfRange: return FF_ERR_DEPARTURE_OUT_OF_RANGE;
    case ErrorCode::DuplicateReward: return FF_ERR_DUPLICATE_REWARD;
    case ErrorCode::DimensionMismatch: return FF_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NonConcaveRevenue: return FF_ERR_NON_CONCAVE_REVENUE;
    case ErrorCode::NegativeMass: return FF_ERR_NEGATIVE_MASS;
    case ErrorCode::InvalidDistribution: return FF_ERR_INVALID_DISTRIBUTION;
    case ErrorCode::Unstable: return FF_ERR_UNSTABLE;
    case ErrorCode::UnstableStatic: return FF_ERR_UNSTABLE_STATIC;
    case ErrorCode::EmptyPresence: return FF_ERR_EMPTY_PRESENCE;
    case ErrorCode::NoFeasiblePoint: return FF_ERR_NO_FEASIBLE_POINT;
    case ErrorCode::WrongRewardCount: return FF_ERR_WRONG_REWARD_COUNT;
    case ErrorCode::UnknownRepro: return FF_ERR_UNKNOWN_REPRO;
    case ErrorCode::ParseError: return FF_ERR_PARSE;
    case ErrorCode::IoError: return FF_ERR_IO;
    case ErrorCode::InvalidArgument: return FF_ERR_INVALID_ARGUMENT;
  }
  return FF_ERR_INTERNAL;
}

template <typename Fn>
ff_status guarded(Fn&& fn) {
  try {
    fn();
    return FF_OK;
  } catch (const fairfluid::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FF_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ff_status require(bool ok, const char* message) {
  if (!ok) {
    g_last_error = message;
    return FF_ERR_INVALID_ARGUMENT;
  }
  return FF_OK;
}

}  // namespace

extern "C" {

const char* ff_last_error(void) { return g_last_error.c_str(); }

void ff_string_free(char* s) { delete[] s; }

ff_status ff_instance_from_json(const char* json_text, ff_instance** out) {
  if (auto rc = require(json_text && out, "null argument")) return rc;
  return guarded([&] {
    *out = new ff_instance{fairfluid::instance_from_json(json_text)};
  });
}

ff_status ff_instance_from_file(const char* path, ff_instance** out) {
  if (auto rc = require(path && out, "null argument")) return rc;
  return guarded([&] {
    *out = new ff_instance{fairfluid::instance_from_file(path)};
  });
}

void ff_instance_free(ff_instance* inst) { delete inst; }

int ff_instance_num_types(const ff_instance* inst) {
  return inst ? inst->inner.num_types() : 0;
}

int ff_instance_num_rewards(const ff_instance* inst) {
  return inst ? inst->inner.num_rewards() : 0;
}

ff_status ff_instance_shift_revenue(const ff_instance* inst, double offset,
                                    ff_instance** out) {
  if (auto rc = require(inst && out, "null argument")) return rc;
  return guarded([&] {
    auto shifted = fairfluid::make_instance(
        inst->inner.lambdas, inst->inner.rewards, inst->inner.departures,
        fairfluid::shift_revenue(inst->inner.revenue, offset));
    *out = new ff_instance{std::move(shifted)};
  });
}

ff_status ff_eval_revenue(const ff_instance* inst, double mass, double* out) {
  if (auto rc = require(inst && out, "null argument")) return rc;
  return guarded([&] {
    *out = fairfluid::eval_revenue(inst->inner.revenue, mass);
  });
}

ff_status ff_policy_from_json(const char* json_text, const ff_instance* inst,
                              ff_policy** out) {
  if (auto rc = require(json_text && inst && out, "null argument")) return rc;
  return guarded([&] {
    *out = new ff_policy{fairfluid::policy_from_json(json_text, inst->inner)};
  });
}

ff_status ff_policy_from_file(const char* path, const ff_instance* inst,
                              ff_policy** out) {
  if (auto rc = require(path && inst && out, "null argument")) return rc;
  return guarded([&] {
    *out = new ff_policy{fairfluid::policy_from_file(path, inst->inner)};
  });
}

ff_status ff_policy_reward_slashing(const ff_instance* inst, ff_policy** out) {
  if (auto rc = require(inst && out, "null argument")) return rc;
  return guarded([&] {
    *out = new ff_policy{fairfluid::make_reward_slashing(inst->inner)};
  });
}

ff_status ff_policy_belief_based(const ff_instance* inst,
                                 const char* params_json, ff_policy** out) {
  if (auto rc = require(inst && params_json && out, "null argument")) return rc;
  return guarded([&] {
    json doc = json::parse(params_json, nullptr, false);
    if (doc.is_discarded()) {
      throw fairfluid::Error(fairfluid::ErrorCode::ParseError,
                             "malformed belief-policy params");
    }
    fairfluid::BeliefPolicyParams params;
    params.buildup_periods = doc.value("buildup", 0);
    params.pool_target = doc.value("pool", 0.0);
    params.retained_payout = fairfluid::make_distribution(
        doc.at("retained").get<std::vector<double>>());
    params.new_payout =
        fairfluid::make_distribution(doc.at("new").get<std::vector<double>>());
    *out = new ff_policy{fairfluid::make_belief_based(inst->inner, params)};
  });
}

void ff_policy_free(ff_policy* policy) { delete policy; }

ff_status ff_steady_cycle(const ff_instance* inst, const ff_policy* policy,
                          char** json_out) {
  if (auto rc = require(inst && policy && json_out, "null argument")) return rc;
  return guarded([&] {
    auto profile = fairfluid::steady_cycle(inst->inner, policy->inner);
    *json_out = dup_string(fairfluid::cycle_profile_to_json(profile));
  });
}

ff_status ff_long_run_profit(const ff_instance* inst, const ff_policy* policy,
                             double* out) {
  if (auto rc = require(inst && policy && out, "null argument")) return rc;
  return guarded([&] {
    *out = fairfluid::long_run_profit(inst->inner, policy->inner);
  });
}

ff_status ff_simulate_csv(const ff_instance* inst, const ff_policy* policy,
                          int horizon, char** csv_out) {
  if (auto rc = require(inst && policy && csv_out, "null argument")) return rc;
  return guarded([&] {
    int cohorts = fairfluid::is_cohort_policy(policy->inner) ? 2 : 1;
    auto init = fairfluid::PopulationState::zero(inst->inner.num_types(),
                                                 cohorts);
    auto traj = fairfluid::simulate(inst->inner, policy->inner, horizon, init);
    *csv_out = dup_string(fairfluid::trajectory_csv(traj, policy->inner));
  });
}

ff_status ff_solve_fluid_opt(const ff_instance* inst, double grid_resolution,
                             double refine_tolerance, char** json_out) {
  if (auto rc = require(inst && json_out, "null argument")) return rc;
  return guarded([&] {
    auto result = fairfluid::solve_fluid_opt(inst->inner, grid_resolution,
                                             refine_tolerance);
    *json_out = dup_string(fairfluid::fluid_opt_result_to_json(result));
  });
}

ff_status ff_grid_oracle(const ff_instance* inst, double grid_resolution,
                         char** json_out) {
  if (auto rc = require(inst && json_out, "null argument")) return rc;
  return guarded([&] {
    auto [x, value] = fairfluid::grid_oracle(inst->inner, grid_resolution);
    json doc;
    doc["x"] = x.probs;
    doc["value"] = value;
    *json_out = dup_string(doc.dump(2));
  });
}

ff_status ff_audit(const ff_instance* inst, const ff_policy* policy,
                   double delta, char** json_out) {
  if (auto rc = require(inst && policy && json_out, "null argument")) return rc;
  return guarded([&] {
    auto report = fairfluid::audit(inst->inner, policy->inner, delta);
    *json_out = dup_string(fairfluid::audit_report_to_json(report));
  });
}

ff_status ff_participation(const ff_instance* inst, const ff_policy* policy,
                           const double* reservations, int num_types,
                           char** json_out) {
  if (auto rc = require(inst && policy && reservations && json_out,
                        "null argument")) {
    return rc;
  }
  return guarded([&] {
    auto spec = fairfluid::make_participation_spec(
        std::vector<double>(reservations, reservations + num_types));
    auto joining =
        fairfluid::participation_filter(inst->inner, policy->inner, spec);
    json doc;
    doc["joining_types"] = joining;
    *json_out = dup_string(doc.dump(2));
  });
}

ff_status ff_repro(const char* name, const char* params_json,
                   const char* format, char** report_out, int* all_passed) {
  if (auto rc = require(name && format && report_out, "null argument")) {
    return rc;
  }
  return guarded([&] {
    fairfluid::ReproParams params;
    if (params_json != nullptr && params_json[0] != '\0') {
      json doc = json::parse(params_json, nullptr, false);
      if (doc.is_discarded()) {
        throw fairfluid::Error(fairfluid::ErrorCode::ParseError,
                               "malformed repro params");
      }
      params.v1 = doc.value("v1", params.v1);
      params.v2 = doc.value("v2", params.v2);
      params.alpha_capped = doc.value("alpha_capped", params.alpha_capped);
      if (doc.contains("caps")) {
        params.caps = doc.at("caps").get<std::vector<double>>();
      }
      params.lambda = doc.value("lambda", params.lambda);
      params.high_reward = doc.value("high_reward", params.high_reward);
      params.alpha_linear = doc.value("alpha_linear", params.alpha_linear);
      params.grid_resolution = doc.value("grid", params.grid_resolution);
      params.refine_tolerance = doc.value("tol", params.refine_tolerance);
    }
    auto report = fairfluid::run_repro(name, params);
    std::string fmt = format;
    if (fmt == "json") {
      *report_out = dup_string(fairfluid::report_to_json(report));
    } else if (fmt == "csv") {
      *report_out = dup_string(fairfluid::report_to_csv(report));
    } else {
      throw fairfluid::Error(fairfluid::ErrorCode::InvalidArgument,
                             "format must be csv or json");
    }
    if (all_passed != nullptr) {
      *all_passed = report.passed() ? 1 : 0;
    }
  });
}

}  // extern "C"

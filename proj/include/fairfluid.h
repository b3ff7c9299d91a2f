/* C interface to the fairfluid core: deterministic multi-type retention
 * dynamics, static-policy optimization, and group-fairness auditing.
 *
 * All objects are opaque handles released with the matching _free call.
 * Functions return FF_OK on success; on failure ff_last_error() holds a
 * thread-local description of the most recent error. Strings returned
 * through out-parameters are owned by the caller and released with
 * ff_string_free.
 */

#ifndef FAIRFLUID_H
#define FAIRFLUID_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ff_status {
  FF_OK = 0,
  FF_ERR_NEGATIVE_ARRIVAL = 1,
  FF_ERR_DEPARTURE_OUT_OF_RANGE = 2,
  FF_ERR_DUPLICATE_REWARD = 3,
  FF_ERR_DIMENSION_MISMATCH = 4,
  FF_ERR_NON_CONCAVE_REVENUE = 5,
  FF_ERR_NEGATIVE_MASS = 6,
  FF_ERR_INVALID_DISTRIBUTION = 7,
  FF_ERR_UNSTABLE = 8,
  FF_ERR_UNSTABLE_STATIC = 9,
  FF_ERR_EMPTY_PRESENCE = 10,
  FF_ERR_NO_FEASIBLE_POINT = 11,
  FF_ERR_WRONG_REWARD_COUNT = 12,
  FF_ERR_UNKNOWN_REPRO = 13,
  FF_ERR_PARSE = 14,
  FF_ERR_IO = 15,
  FF_ERR_INVALID_ARGUMENT = 16,
  FF_ERR_INTERNAL = 17
} ff_status;

typedef struct ff_instance ff_instance;
typedef struct ff_policy ff_policy;

/* Thread-local message for the most recent failing call. */
const char* ff_last_error(void);

void ff_string_free(char* s);

/* --- instances ------------------------------------------------------- */

/* JSON document: {"lambdas": [..], "rewards": [..], "departures": [[..]],
 * "revenue": {"kind": "linear"|"capped"|"pwl"|"shifted", ...}} */
ff_status ff_instance_from_json(const char* json_text, ff_instance** out);
ff_status ff_instance_from_file(const char* path, ff_instance** out);
void ff_instance_free(ff_instance* inst);

int ff_instance_num_types(const ff_instance* inst);
int ff_instance_num_rewards(const ff_instance* inst);

/* New instance with revenue R(n) - offset. */
ff_status ff_instance_shift_revenue(const ff_instance* inst, double offset,
                                    ff_instance** out);
ff_status ff_eval_revenue(const ff_instance* inst, double mass, double* out);

/* --- policies -------------------------------------------------------- */

/* JSON document: {"kind": "static", "x": [..]} |
 * {"kind": "cyclic", "schedule": [[..], ..]} |
 * {"kind": "cohort", "new": [[..]], "retained": [[..]],
 *  "seed": [..], "buildup": n} |
 * {"kind": "reward-slashing"} */
ff_status ff_policy_from_json(const char* json_text, const ff_instance* inst,
                              ff_policy** out);
ff_status ff_policy_from_file(const char* path, const ff_instance* inst,
                              ff_policy** out);
ff_status ff_policy_reward_slashing(const ff_instance* inst, ff_policy** out);
/* params JSON: {"buildup": n, "pool": mass, "retained": [..], "new": [..]} */
ff_status ff_policy_belief_based(const ff_instance* inst,
                                 const char* params_json, ff_policy** out);
void ff_policy_free(ff_policy* policy);

/* --- analysis -------------------------------------------------------- */

/* Exact steady cycle as JSON: period masses, average population and
 * profit, per-type exposure distributions and average rewards. */
ff_status ff_steady_cycle(const ff_instance* inst, const ff_policy* policy,
                          char** json_out);

ff_status ff_long_run_profit(const ff_instance* inst, const ff_policy* policy,
                             double* out);

/* Trajectory CSV with columns t,type,cohort,mass,payout_index. */
ff_status ff_simulate_csv(const ff_instance* inst, const ff_policy* policy,
                          int horizon, char** csv_out);

/* Optimal static policy via simplex grid search plus refinement.
 * Result JSON: {"x_star": [..], "n_star": [..], "value": v,
 * "grid_resolution": h, "refined": bool} */
ff_status ff_solve_fluid_opt(const ff_instance* inst, double grid_resolution,
                             double refine_tolerance, char** json_out);

/* Brute-force grid maximum, no refinement. */
ff_status ff_grid_oracle(const ff_instance* inst, double grid_resolution,
                         char** json_out);

/* Group-fairness audit as JSON: exposures, avg rewards, gap, delta,
 * within_period_fair, fair. */
ff_status ff_audit(const ff_instance* inst, const ff_policy* policy,
                   double delta, char** json_out);

/* reservations has one wage per type; the result JSON lists the indices
 * of types whose long-run average reward meets their wage. */
ff_status ff_participation(const ff_instance* inst, const ff_policy* policy,
                           const double* reservations, int num_types,
                           char** json_out);

/* --- reproduction harness ------------------------------------------- */

/* name: prop1 | prop2 | pof | theorem1. params_json may be NULL or "{}";
 * recognized keys: v1, v2, alpha_capped, caps (array), lambda,
 * high_reward, alpha_linear, grid, tol. format: "json" or "csv".
 * all_passed is set to 1 iff every quantity is within tolerance. */
ff_status ff_repro(const char* name, const char* params_json,
                   const char* format, char** report_out, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif

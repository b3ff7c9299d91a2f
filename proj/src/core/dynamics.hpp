#ifndef FAIRFLUID_DYNAMICS_HPP
#define FAIRFLUID_DYNAMICS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/model.hpp"

namespace fairfluid {

// Pays distribution x in every period.
struct StaticPolicy {
  Distribution x;
};

// Repeats a schedule of distributions with period tau >= 1.
struct CyclicPolicy {
  std::vector<Distribution> schedule;

  int period() const { return static_cast<int>(schedule.size()); }
};

// Pays new arrivals and retained agents from separate schedules of common
// period. retained_seed gives the retained-cohort mass per type used when the
// retained cohort neither drains nor refills (the belief-based pool);
// buildup_periods of pay-everyone-from-the-retained-schedule apply only to
// transient simulation.
struct CohortPolicy {
  std::vector<Distribution> schedule_new;
  std::vector<Distribution> schedule_retained;
  std::vector<double> retained_seed;  // empty means all zeros
  int buildup_periods = 0;

  int period() const { return static_cast<int>(schedule_new.size()); }
};

using Policy = std::variant<StaticPolicy, CyclicPolicy, CohortPolicy>;

int policy_period(const Policy& policy);
bool is_cohort_policy(const Policy& policy);

// K x C nonnegative masses; C = 1 (uniform) or 2 (new, retained).
struct PopulationState {
  int num_types = 0;
  int cohorts = 1;
  std::vector<double> masses;  // row-major, K rows, C columns

  static PopulationState zero(int num_types, int cohorts);

  double& at(int type, int cohort) { return masses[type * cohorts + cohort]; }
  double at(int type, int cohort) const {
    return masses[type * cohorts + cohort];
  }
  double type_total(int type) const;
  double total() const;
};

// One period: pay each cohort its distribution, remove departing mass,
// merge survivors into the retained cohort (C = 2) and add fresh arrivals.
PopulationState step(const PopulationState& state,
                     const std::vector<Distribution>& payouts,
                     const Instance& inst);

// Trajectory of length horizon + 1 starting at init.
std::vector<PopulationState> simulate(const Instance& inst,
                                      const Policy& policy, int horizon,
                                      const PopulationState& init);

std::string trajectory_csv(const std::vector<PopulationState>& traj,
                           const Policy& policy);

// Exact steady cycle of a periodic policy.
struct CycleProfile {
  int period = 1;
  int cohorts = 1;
  std::vector<PopulationState> period_masses;  // length = period
  double avg_population = 0.0;
  double avg_profit = 0.0;
  std::vector<double> presence;  // per-type mass summed over the cycle
  std::vector<Distribution> per_type_exposure;  // meaningful iff presence > 0
  std::vector<double> avg_reward_per_type;
};

CycleProfile steady_cycle(const Instance& inst, const Policy& policy);

double long_run_profit(const Instance& inst, const Policy& policy);

}  // namespace fairfluid

#endif

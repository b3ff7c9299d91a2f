#ifndef FAIRFLUID_POLICY_LAB_HPP
#define FAIRFLUID_POLICY_LAB_HPP

#include <utility>
#include <vector>

#include "core/dynamics.hpp"
#include "core/model.hpp"

namespace fairfluid {

struct FluidOptResult {
  Distribution x_star;
  std::vector<double> n_star;
  double value = 0.0;
  double grid_resolution = 0.0;
  bool refined = false;
};

struct BeliefPolicyParams {
  int buildup_periods = 0;
  double pool_target = 0.0;
  Distribution retained_payout;
  Distribution new_payout;
};

// Steady-state population per type under the static distribution x,
// from the balance lambda_i = n_i * (ell_i . x).
std::vector<double> stability_populations(const Instance& inst,
                                          const Distribution& x);

// Long-run per-period profit of the static policy x at its steady state.
double static_profit(const Instance& inst, const Distribution& x);

// Grid search over the simplex at step h followed by pairwise
// golden-section refinement until the sweep improvement drops below tol.
FluidOptResult solve_fluid_opt(const Instance& inst, double grid_resolution,
                               double refine_tolerance);

// Brute-force enumeration at step h, no refinement. Independent check
// for solve_fluid_opt.
std::pair<Distribution, double> grid_oracle(const Instance& inst,
                                            double grid_resolution);

// Long-run average distribution of a uniform-cohort policy, weighted by
// type-1 presence when K = 1 and by total population otherwise.
Distribution presence_weighted_static(const Instance& inst,
                                      const Policy& policy);

// Cohort-conditioned policy paying retained agents and new arrivals from
// separate distributions; the pool target seeds the retained cohort.
Policy make_belief_based(const Instance& inst, const BeliefPolicyParams& params);

// 2-cyclic policy alternating a point mass on rmax with one on rmin.
Policy make_reward_slashing(const Instance& inst);

}  // namespace fairfluid

#endif

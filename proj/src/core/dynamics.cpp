#include "core/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace fairfluid {

namespace {

// Payout distributions for period t, one per cohort. Buildup periods pay
// everyone from the retained schedule.
std::vector<Distribution> payouts_at(const Policy& policy, int t) {
  return std::visit(
      [t](const auto& p) -> std::vector<Distribution> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StaticPolicy>) {
          return {p.x};
        } else if constexpr (std::is_same_v<T, CyclicPolicy>) {
          return {p.schedule[t % p.period()]};
        } else {
          if (t < p.buildup_periods) {
            const Distribution& x = p.schedule_retained[t % p.period()];
            return {x, x};
          }
          int phase = (t - p.buildup_periods) % p.period();
          return {p.schedule_new[phase], p.schedule_retained[phase]};
        }
      },
      policy);
}

std::vector<Distribution> steady_payouts_at(const Policy& policy, int phase) {
  return std::visit(
      [phase](const auto& p) -> std::vector<Distribution> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StaticPolicy>) {
          return {p.x};
        } else if constexpr (std::is_same_v<T, CyclicPolicy>) {
          return {p.schedule[phase]};
        } else {
          return {p.schedule_new[phase], p.schedule_retained[phase]};
        }
      },
      policy);
}

int point_mass_index(const Distribution& x) {
  int idx = -1;
  for (int r = 0; r < x.size(); ++r) {
    if (x.probs[r] == 1.0) idx = r;
  }
  return idx;
}

void check_policy_shape(const Instance& inst, const Policy& policy) {
  int tau = policy_period(policy);
  if (tau < 1) {
    throw Error(ErrorCode::InvalidArgument, "policy period must be >= 1");
  }
  for (int t = 0; t < tau; ++t) {
    for (const auto& x : steady_payouts_at(policy, t)) {
      if (x.size() != inst.num_rewards()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "payout distribution length must equal |rewards|");
      }
    }
  }
  if (const auto* cp = std::get_if<CohortPolicy>(&policy)) {
    if (cp->schedule_new.size() != cp->schedule_retained.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "cohort schedules must share one period");
    }
    if (!cp->retained_seed.empty() &&
        static_cast<int>(cp->retained_seed.size()) != inst.num_types()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "retained seed length must equal the type count");
    }
  }
}

}  // namespace

int policy_period(const Policy& policy) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StaticPolicy>) {
          return 1;
        } else {
          return p.period();
        }
      },
      policy);
}

bool is_cohort_policy(const Policy& policy) {
  return std::holds_alternative<CohortPolicy>(policy);
}

PopulationState PopulationState::zero(int num_types, int cohorts) {
  PopulationState s;
  s.num_types = num_types;
  s.cohorts = cohorts;
  s.masses.assign(static_cast<std::size_t>(num_types) * cohorts, 0.0);
  return s;
}

double PopulationState::type_total(int type) const {
  double sum = 0.0;
  for (int c = 0; c < cohorts; ++c) sum += at(type, c);
  return sum;
}

double PopulationState::total() const {
  double sum = 0.0;
  for (double m : masses) sum += m;
  return sum;
}

PopulationState step(const PopulationState& state,
                     const std::vector<Distribution>& payouts,
                     const Instance& inst) {
  if (state.num_types != inst.num_types() ||
      static_cast<int>(payouts.size()) != state.cohorts) {
    throw Error(ErrorCode::DimensionMismatch,
                "state/payout shape does not match the instance");
  }
  PopulationState next = PopulationState::zero(state.num_types, state.cohorts);
  for (int i = 0; i < state.num_types; ++i) {
    if (state.cohorts == 1) {
      double s = 1.0 - departure_rate(inst, i, payouts[0]);
      next.at(i, 0) = inst.lambdas[i] + state.at(i, 0) * s;
    } else {
      double survivors = 0.0;
      for (int c = 0; c < state.cohorts; ++c) {
        survivors += state.at(i, c) * (1.0 - departure_rate(inst, i, payouts[c]));
      }
      next.at(i, 0) = inst.lambdas[i];  // new cohort
      next.at(i, 1) = survivors;        // retained cohort
    }
  }
  return next;
}

std::vector<PopulationState> simulate(const Instance& inst,
                                      const Policy& policy, int horizon,
                                      const PopulationState& init) {
  check_policy_shape(inst, policy);
  if (horizon < 1) {
    throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
  }
  int cohorts = is_cohort_policy(policy) ? 2 : 1;
  if (init.cohorts != cohorts || init.num_types != inst.num_types()) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial state shape does not match the policy");
  }
  std::vector<PopulationState> traj;
  traj.reserve(horizon + 1);
  traj.push_back(init);
  for (int t = 0; t < horizon; ++t) {
    traj.push_back(step(traj.back(), payouts_at(policy, t), inst));
  }
  return traj;
}

std::string trajectory_csv(const std::vector<PopulationState>& traj,
                           const Policy& policy) {
  std::ostringstream out;
  out.precision(17);
  out << "t,type,cohort,mass,payout_index\n";
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const auto& state = traj[t];
    auto payouts = payouts_at(policy, static_cast<int>(t));
    for (int i = 0; i < state.num_types; ++i) {
      for (int c = 0; c < state.cohorts; ++c) {
        out << t << ',' << i << ',' << c << ',' << state.at(i, c) << ','
            << point_mass_index(payouts[c]) << '\n';
      }
    }
  }
  return out.str();
}

CycleProfile steady_cycle(const Instance& inst, const Policy& policy) {
  check_policy_shape(inst, policy);
  const int tau = policy_period(policy);
  const int K = inst.num_types();
  const int cohorts = is_cohort_policy(policy) ? 2 : 1;

  std::vector<std::vector<Distribution>> payouts(tau);
  for (int t = 0; t < tau; ++t) payouts[t] = steady_payouts_at(policy, t);

  const CohortPolicy* cp = std::get_if<CohortPolicy>(&policy);

  CycleProfile profile;
  profile.period = tau;
  profile.cohorts = cohorts;
  profile.period_masses.assign(tau, PopulationState::zero(K, cohorts));

  for (int i = 0; i < K; ++i) {
    const double lambda = inst.lambdas[i];
    if (cohorts == 1) {
      // One cycle maps N to shift + contraction * N.
      double shift = 0.0, contraction = 1.0;
      for (int t = 0; t < tau; ++t) {
        double s = 1.0 - departure_rate(inst, i, payouts[t][0]);
        shift = lambda + s * shift;
        contraction *= s;
      }
      double start;
      if (contraction < 1.0) {
        start = shift / (1.0 - contraction);
      } else if (lambda > 0.0) {
        throw Error(ErrorCode::Unstable,
                    "type " + std::to_string(i) +
                        " never departs over the cycle; population diverges");
      } else {
        start = 0.0;  // empty-start convention
      }
      double mass = start;
      for (int t = 0; t < tau; ++t) {
        profile.period_masses[t].at(i, 0) = mass;
        double s = 1.0 - departure_rate(inst, i, payouts[t][0]);
        mass = lambda + s * mass;
      }
    } else {
      // New-cohort mass is lambda each period; the retained cohort follows
      // r' = lambda * s_new + s_ret * r, an affine map per period.
      double shift = 0.0, contraction = 1.0;
      for (int t = 0; t < tau; ++t) {
        double s_new = 1.0 - departure_rate(inst, i, payouts[t][0]);
        double s_ret = 1.0 - departure_rate(inst, i, payouts[t][1]);
        shift = lambda * s_new + s_ret * shift;
        contraction *= s_ret;
      }
      double start;
      if (contraction < 1.0) {
        start = shift / (1.0 - contraction);
      } else if (shift > 0.0) {
        throw Error(ErrorCode::Unstable,
                    "retained cohort of type " + std::to_string(i) +
                        " accumulates without bound");
      } else {
        start = (cp != nullptr && !cp->retained_seed.empty())
                    ? cp->retained_seed[i]
                    : 0.0;
      }
      double retained = start;
      for (int t = 0; t < tau; ++t) {
        profile.period_masses[t].at(i, 0) = lambda;
        profile.period_masses[t].at(i, 1) = retained;
        double s_new = 1.0 - departure_rate(inst, i, payouts[t][0]);
        double s_ret = 1.0 - departure_rate(inst, i, payouts[t][1]);
        retained = lambda * s_new + s_ret * retained;
      }
    }
  }

  double pop_sum = 0.0, profit_sum = 0.0;
  std::vector<double> pay_per_cohort(cohorts);
  for (int t = 0; t < tau; ++t) {
    const auto& state = profile.period_masses[t];
    for (int c = 0; c < cohorts; ++c) {
      pay_per_cohort[c] = expected_payment(payouts[t][c], inst.rewards);
    }
    double total = state.total();
    double cost = 0.0;
    for (int i = 0; i < K; ++i) {
      for (int c = 0; c < cohorts; ++c) {
        cost += state.at(i, c) * pay_per_cohort[c];
      }
    }
    pop_sum += total;
    profit_sum += eval_revenue(inst.revenue, total) - cost;
  }
  profile.avg_population = pop_sum / tau;
  profile.avg_profit = profit_sum / tau;

  profile.presence.assign(K, 0.0);
  profile.avg_reward_per_type.assign(K, 0.0);
  profile.per_type_exposure.assign(
      K, Distribution{std::vector<double>(inst.num_rewards(), 0.0)});
  for (int i = 0; i < K; ++i) {
    std::vector<double> weighted(inst.num_rewards(), 0.0);
    double presence = 0.0;
    for (int t = 0; t < tau; ++t) {
      const auto& state = profile.period_masses[t];
      for (int c = 0; c < cohorts; ++c) {
        double m = state.at(i, c);
        presence += m;
        for (int r = 0; r < inst.num_rewards(); ++r) {
          weighted[r] += m * payouts[t][c].probs[r];
        }
      }
    }
    profile.presence[i] = presence;
    if (presence > 0.0) {
      for (double& w : weighted) w /= presence;
      profile.per_type_exposure[i] = Distribution{weighted};
      profile.avg_reward_per_type[i] =
          expected_payment(profile.per_type_exposure[i], inst.rewards);
    }
  }
  return profile;
}

double long_run_profit(const Instance& inst, const Policy& policy) {
  return steady_cycle(inst, policy).avg_profit;
}

}  // namespace fairfluid

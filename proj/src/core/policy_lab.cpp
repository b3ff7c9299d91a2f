#include "core/policy_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

namespace fairfluid {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// All compositions of m into parts, in lexicographic order.
std::vector<std::vector<int>> simplex_compositions(int m, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(parts, 0);
  // counts are chosen left to right; the last part takes the remainder
  auto recurse = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == parts - 1) {
      current[pos] = remaining;
      out.push_back(current);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      current[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, m);
  return out;
}

Distribution composition_to_distribution(const std::vector<int>& counts,
                                         int m) {
  std::vector<double> probs(counts.size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    probs[r] = static_cast<double>(counts[r]) / m;
  }
  return Distribution{std::move(probs)};
}

// Profit of a static distribution, -inf when some present type never departs.
double profit_or_neginf(const Instance& inst, const Distribution& x) {
  double total = 0.0;
  for (int i = 0; i < inst.num_types(); ++i) {
    double rate = departure_rate(inst, i, x);
    if (rate <= 0.0) {
      if (inst.lambdas[i] > 0.0) return kNegInf;
      continue;
    }
    total += inst.lambdas[i] / rate;
  }
  return eval_revenue(inst.revenue, total) -
         expected_payment(x, inst.rewards) * total;
}

int worker_count(std::size_t num_points) {
  if (num_points < 4096) return 1;
  unsigned n = 0;
  if (const char* env = std::getenv("FAIRFLUID_THREADS")) {
    n = static_cast<unsigned>(std::atoi(env));
  }
  if (n == 0) n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  return static_cast<int>(std::min<unsigned>(n, 16));
}

struct GridBest {
  double value = kNegInf;
  std::size_t index = 0;
  bool found = false;
};

// Best grid point; ties go to the lexicographically smallest composition.
GridBest best_grid_point(const Instance& inst,
                         const std::vector<std::vector<int>>& grid, int m) {
  const int workers = worker_count(grid.size());
  std::vector<GridBest> partial(workers);
  auto run = [&](int w) {
    std::size_t lo = grid.size() * w / workers;
    std::size_t hi = grid.size() * (w + 1) / workers;
    GridBest best;
    for (std::size_t k = lo; k < hi; ++k) {
      double v = profit_or_neginf(inst, composition_to_distribution(grid[k], m));
      if (v == kNegInf) continue;
      if (!best.found || v > best.value) {
        best = GridBest{v, k, true};
      }
    }
    partial[w] = best;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  GridBest best;
  for (const auto& p : partial) {
    if (!p.found) continue;
    if (!best.found || p.value > best.value ||
        (p.value == best.value && p.index < best.index)) {
      best = p;
    }
  }
  return best;
}

// Golden-section maximization on [lo, hi]; f may return -inf.
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double best_u = (fc > fd) ? c : d;
  double best_v = std::max(fc, fd);
  for (double u : {lo, hi, 0.5 * (lo + hi)}) {
    double v = f(u);
    if (v > best_v) {
      best_v = v;
      best_u = u;
    }
  }
  return {best_u, best_v};
}

}  // namespace

std::vector<double> stability_populations(const Instance& inst,
                                          const Distribution& x) {
  if (x.size() != inst.num_rewards()) {
    throw Error(ErrorCode::DimensionMismatch,
                "distribution length must equal |rewards|");
  }
  std::vector<double> n(inst.num_types(), 0.0);
  for (int i = 0; i < inst.num_types(); ++i) {
    double rate = departure_rate(inst, i, x);
    if (rate <= 0.0) {
      if (inst.lambdas[i] > 0.0) {
        throw Error(ErrorCode::UnstableStatic,
                    "type " + std::to_string(i) +
                        " never departs under x; population is infinite");
      }
      n[i] = 0.0;
    } else {
      n[i] = inst.lambdas[i] / rate;
    }
  }
  return n;
}

double static_profit(const Instance& inst, const Distribution& x) {
  auto n = stability_populations(inst, x);
  double total = 0.0;
  for (double ni : n) total += ni;
  return eval_revenue(inst.revenue, total) -
         expected_payment(x, inst.rewards) * total;
}

FluidOptResult solve_fluid_opt(const Instance& inst, double grid_resolution,
                               double refine_tolerance) {
  if (!(grid_resolution > 0.0 && grid_resolution <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid resolution must be in (0,1]");
  }
  if (!(refine_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "refine tolerance must be > 0");
  }
  const int m = std::max(1, static_cast<int>(std::lround(1.0 / grid_resolution)));
  const int R = inst.num_rewards();
  auto grid = simplex_compositions(m, R);
  GridBest best = best_grid_point(inst, grid, m);
  if (!best.found) {
    throw Error(ErrorCode::NoFeasiblePoint, "every grid point is unstable");
  }

  std::vector<double> x = composition_to_distribution(grid[best.index], m).probs;
  double value = best.value;

  // Pairwise line searches: move mass between two coordinates holding the
  // rest fixed, cycling until a full sweep gains less than the tolerance.
  bool refined = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double sweep_gain = 0.0;
    for (int i = 0; i < R; ++i) {
      for (int j = i + 1; j < R; ++j) {
        double total_ij = x[i] + x[j];
        if (total_ij <= 0.0) continue;
        auto objective = [&](double u) {
          std::vector<double> trial = x;
          trial[i] = u;
          trial[j] = total_ij - u;
          return profit_or_neginf(inst, Distribution{std::move(trial)});
        };
        auto [u, v] = golden_max(objective, 0.0, total_ij);
        if (v > value) {
          sweep_gain += v - value;
          value = v;
          x[i] = u;
          x[j] = total_ij - u;
          refined = true;
        }
      }
    }
    if (sweep_gain < refine_tolerance) break;
  }

  FluidOptResult result;
  result.x_star = Distribution{x};
  result.n_star = stability_populations(inst, result.x_star);
  result.value = static_profit(inst, result.x_star);
  result.grid_resolution = grid_resolution;
  result.refined = refined;
  // the grid best is a lower bound; refinement never drops below it
  result.value = std::max(result.value, best.value);
  return result;
}

std::pair<Distribution, double> grid_oracle(const Instance& inst,
                                            double grid_resolution) {
  if (!(grid_resolution > 0.0 && grid_resolution <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid resolution must be in (0,1]");
  }
  const int m = std::max(1, static_cast<int>(std::lround(1.0 / grid_resolution)));
  const int R = inst.num_rewards();
  const int K = inst.num_types();

  // Odometer over compositions, evaluated with the balance equations inline.
  std::vector<int> counts(R, 0);
  counts[R - 1] = m;
  bool found = false;
  double best_value = kNegInf;
  std::vector<int> best_counts;
  while (true) {
    double total_pop = 0.0;
    double pay = 0.0;
    bool feasible = true;
    for (int r = 0; r < R; ++r) {
      pay += inst.rewards.values[r] * counts[r] / m;
    }
    for (int i = 0; i < K && feasible; ++i) {
      double rate = 0.0;
      for (int r = 0; r < R; ++r) {
        rate += inst.departures.ell[i][r] * counts[r] / m;
      }
      if (rate <= 0.0) {
        if (inst.lambdas[i] > 0.0) feasible = false;
      } else {
        total_pop += inst.lambdas[i] / rate;
      }
    }
    if (feasible) {
      double value = eval_revenue(inst.revenue, total_pop) - pay * total_pop;
      if (!found || value > best_value) {
        found = true;
        best_value = value;
        best_counts = counts;
      }
    }
    // next composition in lexicographic order
    int pos = R - 2;
    while (pos >= 0) {
      int tail = counts[R - 1];
      if (tail > 0) {
        counts[pos] += 1;
        counts[R - 1] -= 1;
        break;
      }
      counts[R - 1] = counts[pos];
      counts[pos] = 0;
      pos -= 1;
    }
    if (pos < 0 || R == 1) break;
  }
  if (!found) {
    throw Error(ErrorCode::NoFeasiblePoint, "every grid point is unstable");
  }
  return {composition_to_distribution(best_counts, m), best_value};
}

Distribution presence_weighted_static(const Instance& inst,
                                      const Policy& policy) {
  if (is_cohort_policy(policy)) {
    throw Error(ErrorCode::InvalidArgument,
                "presence averaging applies to uniform-cohort policies");
  }
  auto profile = steady_cycle(inst, policy);
  const int R = inst.num_rewards();
  std::vector<double> weighted(R, 0.0);
  double weight_sum = 0.0;
  for (int t = 0; t < profile.period; ++t) {
    const auto& state = profile.period_masses[t];
    double w = (inst.num_types() == 1) ? state.at(0, 0) : state.total();
    auto payout = std::visit(
        [t](const auto& p) -> Distribution {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, StaticPolicy>) {
            return p.x;
          } else if constexpr (std::is_same_v<T, CyclicPolicy>) {
            return p.schedule[t % p.period()];
          } else {
            return p.schedule_new[0];  // unreachable
          }
        },
        policy);
    for (int r = 0; r < R; ++r) weighted[r] += w * payout.probs[r];
    weight_sum += w;
  }
  if (weight_sum <= 0.0) {
    throw Error(ErrorCode::EmptyPresence, "no presence over the cycle");
  }
  for (double& w : weighted) w /= weight_sum;
  return Distribution{std::move(weighted)};
}

Policy make_belief_based(const Instance& inst,
                         const BeliefPolicyParams& params) {
  if (params.retained_payout.size() != inst.num_rewards() ||
      params.new_payout.size() != inst.num_rewards()) {
    throw Error(ErrorCode::DimensionMismatch,
                "payout distribution length must equal |rewards|");
  }
  if (params.pool_target < 0.0 || params.buildup_periods < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "pool target and buildup must be nonnegative");
  }
  CohortPolicy policy;
  policy.schedule_new = {params.new_payout};
  policy.schedule_retained = {params.retained_payout};
  policy.buildup_periods = params.buildup_periods;

  // Seed the pool into the types that can hold it indefinitely: full
  // retained-cohort survival and no steady inflow of new survivors.
  const int K = inst.num_types();
  std::vector<int> holders;
  double lambda_sum = 0.0;
  for (int i = 0; i < K; ++i) {
    double s_ret = 1.0 - departure_rate(inst, i, params.retained_payout);
    double inflow = inst.lambdas[i] *
                    (1.0 - departure_rate(inst, i, params.new_payout));
    if (s_ret >= 1.0 && inflow <= 0.0) {
      holders.push_back(i);
      lambda_sum += inst.lambdas[i];
    }
  }
  policy.retained_seed.assign(K, 0.0);
  if (params.pool_target > 0.0 && !holders.empty()) {
    for (int i : holders) {
      double share = (lambda_sum > 0.0)
                         ? inst.lambdas[i] / lambda_sum
                         : 1.0 / static_cast<double>(holders.size());
      policy.retained_seed[i] = params.pool_target * share;
    }
  }
  return policy;
}

Policy make_reward_slashing(const Instance& inst) {
  if (inst.num_rewards() != 2) {
    throw Error(ErrorCode::WrongRewardCount,
                "reward slashing needs exactly two rewards");
  }
  CyclicPolicy policy;
  policy.schedule = {point_mass(1, 2), point_mass(0, 2)};
  return policy;
}

}  // namespace fairfluid

#include <cmath>
#include <random>

#include "doctest.h"

#include "core/dynamics.hpp"
#include "core/model.hpp"
#include "core/policy_lab.hpp"

using namespace fairfluid;

namespace {

Instance prop2_instance() {
  return make_instance({0.1, 1.0}, make_reward_set({0.0, 1.0}),
                       DepartureMatrix{{{0.1, 0.0}, {1.0, 0.5}}},
                       linear_revenue(0.7));
}

Instance prop1_instance(double cap = 100.0) {
  return make_instance({cap / 4.0, cap / 2.0},
                       make_reward_set({0.0, 1.0, 1.5}),
                       DepartureMatrix{{{1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}}},
                       capped_linear_revenue(4.0, cap));
}

Instance random_instance(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> types(1, 3);
  std::uniform_int_distribution<int> reward_count(2, 4);
  int K = types(rng);
  int R = reward_count(rng);
  std::vector<double> rewards(R);
  rewards[0] = 0.0;
  for (int r = 1; r < R; ++r) rewards[r] = rewards[r - 1] + 0.1 + 0.4 * unit(rng);
  std::vector<double> lambdas(K);
  for (double& l : lambdas) l = 0.1 + unit(rng);
  DepartureMatrix dep;
  for (int i = 0; i < K; ++i) {
    std::vector<double> row(R);
    for (double& e : row) e = 0.3 + 0.7 * unit(rng);
    dep.ell.push_back(row);
  }
  double total_lambda = 0.0;
  for (double l : lambdas) total_lambda += l;
  return make_instance(lambdas, make_reward_set(rewards), dep,
                       capped_linear_revenue(0.5 + unit(rng),
                                             (1.0 + 2.0 * unit(rng)) *
                                                 total_lambda));
}

}  // namespace

TEST_CASE("stability populations") {
  Instance inst = prop2_instance();
  auto n0 = stability_populations(inst, point_mass(0, 2));
  CHECK(n0[0] == doctest::Approx(1.0));
  CHECK(n0[1] == doctest::Approx(1.0));
  auto n_half = stability_populations(inst, make_distribution({0.5, 0.5}));
  CHECK(n_half[0] == doctest::Approx(2.0));
  CHECK(n_half[1] == doctest::Approx(4.0 / 3.0));
  try {
    stability_populations(inst, point_mass(1, 2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnstableStatic);
  }
}

TEST_CASE("static profit") {
  CHECK(static_profit(prop2_instance(), point_mass(0, 2)) ==
        doctest::Approx(1.4).epsilon(1e-12));
  Instance capped = prop1_instance();
  CHECK(static_profit(capped, make_distribution({0.75, 0.0, 0.25})) ==
        doctest::Approx(362.5).epsilon(1e-12));
  CHECK(static_profit(capped, point_mass(0, 3)) ==
        doctest::Approx(300.0).epsilon(1e-12));
}

TEST_CASE("static profit matches the dynamics engine") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Instance inst = random_instance(rng);
    std::vector<double> p(inst.num_rewards());
    double sum = 0.0;
    for (double& v : p) {
      v = 0.05 + unit(rng);
      sum += v;
    }
    for (double& v : p) v /= sum;
    Distribution x{p};
    CHECK(static_profit(inst, x) ==
          doctest::Approx(long_run_profit(inst, StaticPolicy{x}))
              .epsilon(1e-12));
  }
}

TEST_CASE("fluid opt on the capped instance") {
  auto result = solve_fluid_opt(prop1_instance(), 0.01, 1e-9);
  CHECK(result.value == doctest::Approx(362.5).epsilon(0.5 / 362.5));
  CHECK(result.x_star.probs[0] == doctest::Approx(0.75).epsilon(0.02));
  CHECK(result.x_star.probs[2] == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("fluid opt on the slashing instance finds the zero-reward vertex") {
  auto result = solve_fluid_opt(prop2_instance(), 0.01, 1e-9);
  CHECK(result.value == doctest::Approx(1.4).epsilon(1e-6));
  CHECK(result.x_star.probs[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fluid opt with a single reward") {
  auto inst = make_instance({2.0}, make_reward_set({0.5}),
                            DepartureMatrix{{{1.0}}}, linear_revenue(3.0));
  auto result = solve_fluid_opt(inst, 0.5, 1e-9);
  CHECK(result.x_star.probs[0] == 1.0);
  CHECK(result.value == doctest::Approx(3.0 * 2.0 - 0.5 * 2.0));
}

TEST_CASE("fluid opt result satisfies its own balance invariant") {
  auto result = solve_fluid_opt(prop1_instance(), 0.02, 1e-9);
  Instance inst = prop1_instance();
  for (int i = 0; i < inst.num_types(); ++i) {
    double rate = departure_rate(inst, i, result.x_star);
    CHECK(result.n_star[i] ==
          doctest::Approx(inst.lambdas[i] / rate).epsilon(1e-12));
  }
  CHECK(result.value ==
        doctest::Approx(static_profit(inst, result.x_star)).epsilon(1e-12));
}

TEST_CASE("grid oracle") {
  auto [x_fine, value_fine] = grid_oracle(prop1_instance(), 0.005);
  CHECK(std::abs(value_fine - 362.5) <= 0.25);

  auto inst1 = make_instance({2.0}, make_reward_set({0.5}),
                             DepartureMatrix{{{1.0}}}, linear_revenue(3.0));
  auto [x_single, value_single] = grid_oracle(inst1, 0.25);
  CHECK(x_single.probs[0] == 1.0);

  auto [x_coarse, value_coarse] = grid_oracle(prop2_instance(), 0.1);
  CHECK(x_coarse.probs[0] == doctest::Approx(1.0));
  CHECK(value_coarse == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("no feasible grid point raises an error") {
  // the only reward never triggers departure
  auto inst = make_instance({1.0}, make_reward_set({1.0}),
                            DepartureMatrix{{{0.0}}}, linear_revenue(1.0));
  try {
    grid_oracle(inst, 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoFeasiblePoint);
  }
  CHECK_THROWS_AS(solve_fluid_opt(inst, 0.5, 1e-9), Error);
}

TEST_CASE("solver dominates the oracle on random instances") {
  std::mt19937 rng(42);
  for (int k = 0; k < 50; ++k) {
    Instance inst = random_instance(rng);
    auto result = solve_fluid_opt(inst, 0.05, 1e-9);
    auto [x, oracle_value] = grid_oracle(inst, 0.05);
    CHECK(result.value >= oracle_value - 1e-12);
  }
}

TEST_CASE("presence-weighted averaging of a single-type 2-cycle") {
  auto inst = make_instance({1.0}, make_reward_set({0.0, 1.0}),
                            DepartureMatrix{{{1.0, 0.5}}}, linear_revenue(2.0));
  CyclicPolicy cycle{{point_mass(1, 2), point_mass(0, 2)}};
  auto averaged = presence_weighted_static(inst, cycle);
  CHECK(averaged.probs[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(averaged.probs[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(static_profit(inst, averaged) ==
        doctest::Approx(long_run_profit(inst, cycle)).epsilon(1e-12));
}

TEST_CASE("presence-weighted averaging is idempotent on static policies") {
  Instance inst = prop2_instance();
  auto x = make_distribution({0.3, 0.7});
  auto averaged = presence_weighted_static(inst, StaticPolicy{x});
  CHECK(averaged.probs[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(averaged.probs[1] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("a constant schedule averages to itself") {
  auto inst = make_instance({1.0}, make_reward_set({0.0, 1.0}),
                            DepartureMatrix{{{0.4, 0.2}}}, linear_revenue(1.0));
  auto x = make_distribution({0.25, 0.75});
  CyclicPolicy cycle{{x, x, x}};
  auto averaged = presence_weighted_static(inst, cycle);
  CHECK(averaged.probs[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(averaged.probs[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("averaged static policy weakly improves on single-type cycles") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> reward_count(2, 4);
  std::uniform_int_distribution<int> cycle_len(1, 6);
  for (int k = 0; k < 200; ++k) {
    int R = reward_count(rng);
    std::vector<double> rewards(R);
    rewards[0] = 0.0;
    for (int r = 1; r < R; ++r) {
      rewards[r] = rewards[r - 1] + 0.05 + unit(rng);
    }
    std::vector<double> ell(R);
    for (double& e : ell) e = 0.1 + 0.9 * unit(rng);
    bool linear = (k % 2 == 0);
    double s1 = 2.0 + unit(rng);
    double s2 = s1 * unit(rng);
    double s3 = s2 * unit(rng);
    RevenueFunction rev =
        linear ? linear_revenue(0.5 + unit(rng))
               : piecewise_linear_revenue({{0.0, 0.0},
                                           {1.0, s1},
                                           {3.0, s1 + 2.0 * s2},
                                           {10.0, s1 + 2.0 * s2 + 7.0 * s3}});
    Instance inst =
        make_instance({0.1 + 2.0 * unit(rng)}, make_reward_set(rewards),
                      DepartureMatrix{{ell}}, rev);
    CyclicPolicy cycle;
    int tau = cycle_len(rng);
    for (int t = 0; t < tau; ++t) {
      std::vector<double> p(R);
      double sum = 0.0;
      for (double& v : p) {
        v = unit(rng);
        sum += v;
      }
      for (double& v : p) v /= sum;
      cycle.schedule.push_back(Distribution{p});
    }
    double cyclic_profit = long_run_profit(inst, cycle);
    double averaged_profit =
        static_profit(inst, presence_weighted_static(inst, cycle));
    CHECK(averaged_profit >= cyclic_profit - 1e-9);
    if (linear) {
      CHECK(std::abs(averaged_profit - cyclic_profit) <= 1e-9);
    }
  }
}

TEST_CASE("belief-based policy on the capped instance") {
  Instance inst = prop1_instance();
  BeliefPolicyParams params;
  // from an empty start the first arrivals appear one period in, so two
  // buildup periods pay exactly one arriving wave the retained reward
  params.buildup_periods = 2;
  params.pool_target = 25.0;
  params.retained_payout = point_mass(1, 3);
  params.new_payout = point_mass(0, 3);
  Policy policy = make_belief_based(inst, params);
  CHECK(long_run_profit(inst, policy) == doctest::Approx(375.0).epsilon(1e-12));

  // buildup simulation reaches the same pool
  auto traj = simulate(inst, policy, 10, PopulationState::zero(2, 2));
  CHECK(traj.back().at(0, 1) == doctest::Approx(25.0));
  CHECK(traj.back().at(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("identical cohort payouts collapse to the static policy") {
  Instance inst = prop1_instance();
  auto x = make_distribution({0.5, 0.25, 0.25});
  BeliefPolicyParams params;
  params.retained_payout = x;
  params.new_payout = x;
  Policy policy = make_belief_based(inst, params);
  CHECK(long_run_profit(inst, policy) ==
        doctest::Approx(long_run_profit(inst, StaticPolicy{x}))
            .epsilon(1e-12));
}

TEST_CASE("full-churn new payout leaves no retained pool") {
  auto inst = make_instance({1.0, 2.0}, make_reward_set({0.0, 1.0}),
                            DepartureMatrix{{{1.0, 0.5}, {1.0, 0.5}}},
                            linear_revenue(1.0));
  BeliefPolicyParams params;
  params.retained_payout = point_mass(1, 2);
  params.new_payout = point_mass(0, 2);
  auto profile = steady_cycle(inst, make_belief_based(inst, params));
  CHECK(profile.period_masses[0].at(0, 1) == 0.0);
  CHECK(profile.period_masses[0].at(1, 1) == 0.0);
  CHECK(profile.avg_population == doctest::Approx(3.0));
}

TEST_CASE("reward slashing construction") {
  Instance inst = prop2_instance();
  Policy policy = make_reward_slashing(inst);
  const auto& cyclic = std::get<CyclicPolicy>(policy);
  REQUIRE(cyclic.period() == 2);
  CHECK(cyclic.schedule[0].probs == std::vector<double>{0.0, 1.0});
  CHECK(cyclic.schedule[1].probs == std::vector<double>{1.0, 0.0});

  auto three = make_instance({1.0}, make_reward_set({0.0, 1.0, 2.0}),
                             DepartureMatrix{{{1.0, 0.5, 0.5}}},
                             linear_revenue(1.0));
  try {
    make_reward_slashing(three);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongRewardCount);
  }

  auto other = make_instance({1.0}, make_reward_set({0.5, 2.0}),
                             DepartureMatrix{{{1.0, 0.5}}},
                             linear_revenue(1.0));
  Policy other_policy = make_reward_slashing(other);
  const auto& c2 = std::get<CyclicPolicy>(other_policy);
  CHECK(c2.schedule[0].probs == std::vector<double>{0.0, 1.0});
  CHECK(c2.schedule[1].probs == std::vector<double>{1.0, 0.0});
}

TEST_CASE("static simulation limit equals the balance populations") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    Instance inst = random_instance(rng);
    std::vector<double> p(inst.num_rewards());
    double sum = 0.0;
    for (double& v : p) {
      v = 0.05 + unit(rng);
      sum += v;
    }
    for (double& v : p) v /= sum;
    Distribution x{p};
    auto n = stability_populations(inst, x);
    auto traj = simulate(inst, StaticPolicy{x}, 300,
                         PopulationState::zero(inst.num_types(), 1));
    for (int i = 0; i < inst.num_types(); ++i) {
      CHECK(std::abs(traj.back().at(i, 0) - n[i]) <= 1e-6);
    }
  }
}

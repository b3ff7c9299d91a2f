#include "core/repro.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "core/dynamics.hpp"
#include "core/fairness.hpp"
#include "core/policy_lab.hpp"

namespace fairfluid {

using nlohmann::json;

namespace {

void add(ReproReport& report, const std::string& label, double value,
         double reference, double tolerance, const std::string& source) {
  ReproQuantity q;
  q.label = label;
  q.value = value;
  q.reference = reference;
  q.tolerance = tolerance;
  q.pass = std::abs(value - reference) <= tolerance;
  q.source = source;
  report.quantities.push_back(q);
}

ReproReport repro_prop2(const ReproParams& p) {
  ReproReport report;
  report.name = "prop2";
  const double lambda = p.lambda;
  const double r = p.high_reward;
  const double alpha = p.alpha_linear;
  Instance inst = slashing_instance(lambda, r, alpha);
  Policy cyclic = make_reward_slashing(inst);
  auto profile = steady_cycle(inst, cyclic);

  const auto& pay_period = profile.period_masses[0];
  const auto& zero_period = profile.period_masses[1];
  add(report, "mass_type1_pay_period", pay_period.at(0, 0), 1.9 * lambda,
      1e-9, "derived");
  add(report, "mass_type2_pay_period", pay_period.at(1, 0), 1.0 * lambda,
      1e-9, "derived");
  add(report, "mass_type1_zero_period", zero_period.at(0, 0), 2.0 * lambda,
      1e-9, "derived");
  add(report, "mass_type2_zero_period", zero_period.at(1, 0), 1.5 * lambda,
      1e-9, "derived");
  add(report, "exposure_type1_high_reward",
      exposure_distribution(profile, 0).probs[1], 19.0 / 39.0, 1e-9,
      "published");
  add(report, "exposure_type2_high_reward",
      exposure_distribution(profile, 1).probs[1], 0.4, 1e-9, "published");
  add(report, "fairness_gap", fairness_gap(profile), 34.0 / 195.0, 1e-9,
      "derived");
  add(report, "profit_cyclic", profile.avg_profit,
      (6.4 * alpha - 2.9 * r) * lambda / 2.0, 1e-9, "derived");
  add(report, "profit_static_low_reward",
      static_profit(inst, point_mass(0, 2)), 2.0 * alpha * lambda, 1e-9,
      "derived");
  return report;
}

ReproReport repro_prop1(const ReproParams& p) {
  ReproReport report;
  report.name = "prop1";
  for (double cap : p.caps) {
    Instance inst = capped_instance(p.v1, p.v2, p.alpha_capped, cap);
    double pool = cap - inst.lambdas[0] - inst.lambdas[1];
    BeliefPolicyParams bp;
    bp.buildup_periods = 1;
    bp.pool_target = pool;
    bp.retained_payout = point_mass(1, 3);  // low positive reward
    bp.new_payout = point_mass(0, 3);
    double belief = long_run_profit(inst, make_belief_based(inst, bp));
    auto opt = solve_fluid_opt(inst, p.grid_resolution, p.refine_tolerance);

    double belief_ref = p.alpha_capped * cap - p.v1 * pool;
    double static_ref = p.alpha_capped * cap - 0.25 * p.v2 * cap;
    std::string suffix = "_D" + std::to_string(static_cast<long>(cap));
    add(report, "belief_profit" + suffix, belief, belief_ref, 1e-6 * cap,
        "derived");
    add(report, "fluid_opt_value" + suffix, opt.value, static_ref,
        1e-6 * cap, "derived");
    double gap_ref = (belief_ref - static_ref) / cap;
    add(report, "gap_over_cap" + suffix, (belief - opt.value) / cap, gap_ref,
        0.01 * gap_ref, "derived");
  }
  return report;
}

ReproReport repro_pof(const ReproParams& p) {
  ReproReport report;
  report.name = "pof";
  const double cap = 100.0;
  Instance inst = capped_instance(p.v1, p.v2, p.alpha_capped, cap);
  auto base_opt = solve_fluid_opt(inst, p.grid_resolution, p.refine_tolerance);

  Instance shifted =
      make_instance(inst.lambdas, inst.rewards, inst.departures,
                    shift_revenue(inst.revenue, base_opt.value));
  auto shifted_opt =
      solve_fluid_opt(shifted, p.grid_resolution, p.refine_tolerance);

  double pool = cap - inst.lambdas[0] - inst.lambdas[1];
  BeliefPolicyParams bp;
  bp.buildup_periods = 1;
  bp.pool_target = pool;
  bp.retained_payout = point_mass(1, 3);
  bp.new_payout = point_mass(0, 3);
  double belief = long_run_profit(shifted, make_belief_based(shifted, bp));

  double belief_ref =
      (p.alpha_capped * cap - p.v1 * pool) - (p.alpha_capped - 0.25 * p.v2) * cap;
  add(report, "shifted_static_optimum", shifted_opt.value, 0.0, 1e-9,
      "derived");
  add(report, "shifted_belief_profit", belief, belief_ref,
      0.01 * std::abs(belief_ref), "derived");
  return report;
}

ReproReport repro_theorem1(const ReproParams&) {
  ReproReport report;
  report.name = "theorem1";
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> reward_count(2, 4);
  std::uniform_int_distribution<int> cycle_len(1, 6);

  double worst_concave = 0.0;  // max profit shortfall of the averaged policy
  double worst_linear = 0.0;   // max |static - cyclic| under linear revenue
  const int cases = 200;
  for (int k = 0; k < cases; ++k) {
    int R = reward_count(rng);
    std::vector<double> rewards(R);
    rewards[0] = 0.0;
    for (int r = 1; r < R; ++r) rewards[r] = rewards[r - 1] + 0.05 + unit(rng);
    std::vector<double> ell(R);
    for (double& e : ell) e = 0.1 + 0.9 * unit(rng);
    double lambda = 0.1 + 2.0 * unit(rng);

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
    Instance inst = make_instance({lambda}, make_reward_set(rewards),
                                  DepartureMatrix{{ell}}, rev);

    int tau = cycle_len(rng);
    CyclicPolicy cyclic;
    for (int t = 0; t < tau; ++t) {
      std::vector<double> probs(R);
      double sum = 0.0;
      for (double& p : probs) {
        p = unit(rng);
        sum += p;
      }
      for (double& p : probs) p /= sum;
      cyclic.schedule.push_back(Distribution{probs});
    }
    Policy policy = cyclic;

    double cyclic_profit = long_run_profit(inst, policy);
    Distribution averaged = presence_weighted_static(inst, policy);
    double static_value = static_profit(inst, averaged);
    worst_concave = std::max(worst_concave, cyclic_profit - static_value);
    if (linear) {
      worst_linear =
          std::max(worst_linear, std::abs(static_value - cyclic_profit));
    }
  }
  add(report, "max_profit_shortfall_concave", worst_concave, 0.0, 1e-9,
      "derived");
  add(report, "max_profit_mismatch_linear", worst_linear, 0.0, 1e-9,
      "derived");
  add(report, "cases", cases, cases, 0.0, "derived");
  return report;
}

}  // namespace

bool ReproReport::passed() const {
  for (const auto& q : quantities) {
    if (!q.pass) return false;
  }
  return true;
}

Instance capped_instance(double v1, double v2, double alpha, double cap) {
  return make_instance({cap / 4.0, cap / 2.0}, make_reward_set({0.0, v1, v2}),
                       DepartureMatrix{{{1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}}},
                       capped_linear_revenue(alpha, cap));
}

Instance slashing_instance(double lambda, double high_reward, double alpha) {
  return make_instance({0.1 * lambda, lambda},
                       make_reward_set({0.0, high_reward}),
                       DepartureMatrix{{{0.1, 0.0}, {1.0, 0.5}}},
                       linear_revenue(alpha));
}

ReproReport run_repro(const std::string& name, const ReproParams& params) {
  if (name == "prop1") return repro_prop1(params);
  if (name == "prop2") return repro_prop2(params);
  if (name == "pof") return repro_pof(params);
  if (name == "theorem1") return repro_theorem1(params);
  throw Error(ErrorCode::UnknownRepro, "unknown repro name: " + name);
}

std::string report_to_json(const ReproReport& report) {
  json doc;
  doc["name"] = report.name;
  json quantities = json::array();
  for (const auto& q : report.quantities) {
    quantities.push_back({{"label", q.label},
                          {"value", q.value},
                          {"reference", q.reference},
                          {"tolerance", q.tolerance},
                          {"pass", q.pass},
                          {"source", q.source}});
  }
  doc["quantities"] = quantities;
  doc["artifacts"] = report.artifacts;
  return doc.dump(2);
}

std::string report_to_csv(const ReproReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "label,value,reference,tolerance,pass\n";
  for (const auto& q : report.quantities) {
    out << q.label << ',' << q.value << ',' << q.reference << ','
        << q.tolerance << ',' << (q.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

void export_report(const ReproReport& report, const std::string& format,
                   const std::string& path) {
  std::string body;
  if (format == "json") {
    body = report_to_json(report);
  } else if (format == "csv") {
    body = report_to_csv(report);
  } else {
    throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
  out << body;
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path);
  }
}

}  // namespace fairfluid

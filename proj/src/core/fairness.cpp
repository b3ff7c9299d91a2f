#include "core/fairness.hpp"

#include <cmath>

namespace fairfluid {

Distribution exposure_distribution(const CycleProfile& profile,
                                  int type_index) {
  if (type_index < 0 ||
      type_index >= static_cast<int>(profile.presence.size())) {
    throw Error(ErrorCode::InvalidArgument, "type index out of range");
  }
  if (!(profile.presence[type_index] > 0.0)) {
    throw Error(ErrorCode::EmptyPresence,
                "type " + std::to_string(type_index) +
                    " is never present over the cycle");
  }
  return profile.per_type_exposure[type_index];
}

double fairness_gap(const CycleProfile& profile) {
  const int K = static_cast<int>(profile.presence.size());
  std::vector<int> present;
  for (int i = 0; i < K; ++i) {
    if (profile.presence[i] > 0.0) present.push_back(i);
  }
  if (present.empty()) {
    throw Error(ErrorCode::EmptyPresence, "no type is ever present");
  }
  double gap = 0.0;
  for (std::size_t a = 0; a < present.size(); ++a) {
    for (std::size_t b = a + 1; b < present.size(); ++b) {
      const auto& xi = profile.per_type_exposure[present[a]].probs;
      const auto& xj = profile.per_type_exposure[present[b]].probs;
      double l1 = 0.0;
      for (std::size_t r = 0; r < xi.size(); ++r) {
        l1 += std::abs(xi[r] - xj[r]);
      }
      gap = std::max(gap, l1);
    }
  }
  return gap;
}

AuditReport audit(const Instance& inst, const Policy& policy, double delta) {
  auto profile = steady_cycle(inst, policy);
  AuditReport report;
  report.delta = delta;
  report.exposures = profile.per_type_exposure;
  report.avg_rewards = profile.avg_reward_per_type;
  if (is_cohort_policy(policy)) {
    // Agents in the same period are paid from different distributions, so
    // the within-period fairness desideratum fails regardless of exposures.
    report.within_period_fair = false;
    report.fair = false;
    return report;
  }
  report.max_pairwise_l1 = fairness_gap(profile);
  report.fair = *report.max_pairwise_l1 <= delta;
  return report;
}

std::vector<int> participation_filter(const Instance& inst,
                                      const Policy& policy,
                                      const ParticipationSpec& spec) {
  if (static_cast<int>(spec.reservations.size()) != inst.num_types()) {
    throw Error(ErrorCode::DimensionMismatch,
                "reservation count must equal the type count");
  }
  auto profile = steady_cycle(inst, policy);
  std::vector<int> joining;
  for (int i = 0; i < inst.num_types(); ++i) {
    if (!(profile.presence[i] > 0.0)) continue;
    if (profile.avg_reward_per_type[i] >= spec.reservations[i]) {
      joining.push_back(i);
    }
  }
  return joining;
}

}  // namespace fairfluid

#ifndef FAIRFLUID_FAIRNESS_HPP
#define FAIRFLUID_FAIRNESS_HPP

#include <optional>
#include <vector>

#include "core/dynamics.hpp"
#include "core/model.hpp"

namespace fairfluid {

struct AuditReport {
  std::vector<Distribution> exposures;
  std::vector<double> avg_rewards;
  // Absent for cohort-conditioned policies, which already pay different
  // distributions within a period and are flagged unfair outright.
  std::optional<double> max_pairwise_l1;
  double delta = 0.0;
  bool within_period_fair = true;
  bool fair = false;
};

// Presence-weighted payout distribution of one type over the steady cycle.
Distribution exposure_distribution(const CycleProfile& profile, int type_index);

// Max pairwise L1 distance between exposure distributions of present types.
double fairness_gap(const CycleProfile& profile);

AuditReport audit(const Instance& inst, const Policy& policy, double delta);

// Types whose long-run average reward meets their reservation wage.
std::vector<int> participation_filter(const Instance& inst,
                                      const Policy& policy,
                                      const ParticipationSpec& spec);

}  // namespace fairfluid

#endif

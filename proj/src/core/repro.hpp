#ifndef FAIRFLUID_REPRO_HPP
#define FAIRFLUID_REPRO_HPP

#include <string>
#include <vector>

#include "core/model.hpp"

namespace fairfluid {

struct ReproQuantity {
  std::string label;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string source;  // "published" or "derived"
};

struct ReproReport {
  std::string name;
  std::vector<ReproQuantity> quantities;
  std::vector<std::string> artifacts;

  bool passed() const;
};

struct ReproParams {
  // discrimination-gap instance (capped revenue, three rewards)
  double v1 = 1.0;
  double v2 = 1.5;
  double alpha_capped = 4.0;
  std::vector<double> caps = {40.0, 400.0, 4000.0};
  // reward-slashing instance (linear revenue, two rewards)
  double lambda = 1.0;
  double high_reward = 1.0;
  double alpha_linear = 0.7;
  // solver settings
  double grid_resolution = 0.005;
  double refine_tolerance = 1e-9;
};

// Worked instances: the capped-revenue two-type instance with rewards
// {0, v1, v2}, and the linear-revenue two-type instance with rewards {0, r}.
Instance capped_instance(double v1, double v2, double alpha, double cap);
Instance slashing_instance(double lambda, double high_reward, double alpha);

// name: one of prop1 | prop2 | pof | theorem1
ReproReport run_repro(const std::string& name, const ReproParams& params);

std::string report_to_json(const ReproReport& report);
std::string report_to_csv(const ReproReport& report);
void export_report(const ReproReport& report, const std::string& format,
                   const std::string& path);

}  // namespace fairfluid

#endif

#ifndef FAIRFLUID_MODEL_HPP
#define FAIRFLUID_MODEL_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fairfluid {

enum class ErrorCode {
  NegativeArrival,
  DepartureOutOfRange,
  DuplicateReward,
  DimensionMismatch,
  NonConcaveRevenue,
  NegativeMass,
  InvalidDistribution,
  Unstable,
  UnstableStatic,
  EmptyPresence,
  NoFeasiblePoint,
  WrongRewardCount,
  UnknownRepro,
  ParseError,
  IoError,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Finite set of reward values, strictly increasing, all >= 0.
struct RewardSet {
  std::vector<double> values;

  double rmin() const { return values.front(); }
  double rmax() const { return values.back(); }
  int size() const { return static_cast<int>(values.size()); }
};

RewardSet make_reward_set(std::vector<double> values);

// Probability vector aligned with a RewardSet by index.
struct Distribution {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
};

Distribution make_distribution(std::vector<double> probs);
Distribution point_mass(int index, int num_rewards);

// ell[i][r]: fraction of type-i mass paid reward r that departs at period end.
struct DepartureMatrix {
  std::vector<std::vector<double>> ell;
};

struct RevenueFunction;

struct LinearRevenue {
  double alpha;
};

struct CappedLinearRevenue {
  double alpha;
  double cap;
};

// Breakpoints (mass, money), sorted by mass with non-increasing slopes.
// Beyond the last breakpoint the final slope is extrapolated.
struct PiecewiseLinearRevenue {
  std::vector<std::pair<double, double>> breakpoints;
};

struct ShiftedRevenue {
  std::shared_ptr<const RevenueFunction> base;
  double offset;
};

struct RevenueFunction {
  std::variant<LinearRevenue, CappedLinearRevenue, PiecewiseLinearRevenue,
               ShiftedRevenue>
      fn;
};

RevenueFunction linear_revenue(double alpha);
RevenueFunction capped_linear_revenue(double alpha, double cap);
RevenueFunction piecewise_linear_revenue(
    std::vector<std::pair<double, double>> breakpoints);
RevenueFunction shift_revenue(const RevenueFunction& rev, double v);

double eval_revenue(const RevenueFunction& rev, double mass);

// Model primitives. Immutable once validated.
struct Instance {
  std::vector<double> lambdas;
  RewardSet rewards;
  DepartureMatrix departures;
  RevenueFunction revenue;

  int num_types() const { return static_cast<int>(lambdas.size()); }
  int num_rewards() const { return rewards.size(); }
};

Instance make_instance(std::vector<double> lambdas, RewardSet rewards,
                       DepartureMatrix departures, RevenueFunction revenue);

// Per-type reservation wages for the endogenous-participation filter.
struct ParticipationSpec {
  std::vector<double> reservations;
};

ParticipationSpec make_participation_spec(std::vector<double> reservations);

// Expected payout per present agent under distribution x.
double expected_payment(const Distribution& x, const RewardSet& rewards);

// Per-period departure probability of type i under payout distribution x.
double departure_rate(const Instance& inst, int type, const Distribution& x);

}  // namespace fairfluid

#endif

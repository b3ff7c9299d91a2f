#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fairfluid {

namespace {
constexpr double kProbSumTol = 1e-12;
constexpr double kSlopeTol = 1e-12;
}  // namespace

RewardSet make_reward_set(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "reward set must be non-empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "rewards must be nonnegative");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw Error(ErrorCode::DuplicateReward,
                  "rewards must be strictly increasing");
    }
  }
  return RewardSet{std::move(values)};
}

Distribution make_distribution(std::vector<double> probs) {
  if (probs.empty()) {
    throw Error(ErrorCode::InvalidDistribution, "empty distribution");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::InvalidDistribution,
                  "probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTol) {
    throw Error(ErrorCode::InvalidDistribution,
                "probabilities sum to " + std::to_string(sum));
  }
  return Distribution{std::move(probs)};
}

Distribution point_mass(int index, int num_rewards) {
  if (index < 0 || index >= num_rewards) {
    throw Error(ErrorCode::InvalidArgument, "point mass index out of range");
  }
  std::vector<double> p(num_rewards, 0.0);
  p[index] = 1.0;
  return Distribution{std::move(p)};
}

RevenueFunction linear_revenue(double alpha) {
  if (!(alpha >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  }
  return RevenueFunction{LinearRevenue{alpha}};
}

RevenueFunction capped_linear_revenue(double alpha, double cap) {
  if (!(alpha >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  }
  if (!(cap > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cap must be positive");
  }
  return RevenueFunction{CappedLinearRevenue{alpha, cap}};
}

RevenueFunction piecewise_linear_revenue(
    std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "piecewise revenue needs at least two breakpoints");
  }
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    double dm = breakpoints[i].first - breakpoints[i - 1].first;
    if (!(dm > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "breakpoint masses must be strictly increasing");
    }
    double slope = (breakpoints[i].second - breakpoints[i - 1].second) / dm;
    if (slope > prev_slope + kSlopeTol) {
      throw Error(ErrorCode::NonConcaveRevenue,
                  "piecewise revenue slopes must be non-increasing");
    }
    prev_slope = slope;
  }
  return RevenueFunction{PiecewiseLinearRevenue{std::move(breakpoints)}};
}

RevenueFunction shift_revenue(const RevenueFunction& rev, double v) {
  return RevenueFunction{
      ShiftedRevenue{std::make_shared<RevenueFunction>(rev), v}};
}

double eval_revenue(const RevenueFunction& rev, double mass) {
  if (!(mass >= 0.0)) {
    throw Error(ErrorCode::NegativeMass, "mass must be nonnegative");
  }
  return std::visit(
      [mass](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, LinearRevenue>) {
          return r.alpha * mass;
        } else if constexpr (std::is_same_v<T, CappedLinearRevenue>) {
          return r.alpha * std::min(mass, r.cap);
        } else if constexpr (std::is_same_v<T, PiecewiseLinearRevenue>) {
          const auto& bp = r.breakpoints;
          if (mass <= bp.front().first) {
            // extend the first slope below the first breakpoint
            double slope = (bp[1].second - bp[0].second) /
                           (bp[1].first - bp[0].first);
            return bp[0].second + slope * (mass - bp[0].first);
          }
          for (std::size_t i = 1; i < bp.size(); ++i) {
            if (mass <= bp[i].first) {
              double w = (mass - bp[i - 1].first) /
                         (bp[i].first - bp[i - 1].first);
              return bp[i - 1].second +
                     w * (bp[i].second - bp[i - 1].second);
            }
          }
          const auto& a = bp[bp.size() - 2];
          const auto& b = bp.back();
          double slope = (b.second - a.second) / (b.first - a.first);
          return b.second + slope * (mass - b.first);
        } else {
          return eval_revenue(*r.base, mass) - r.offset;
        }
      },
      rev.fn);
}

Instance make_instance(std::vector<double> lambdas, RewardSet rewards,
                       DepartureMatrix departures, RevenueFunction revenue) {
  if (lambdas.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "need at least one type");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0)) {
      throw Error(ErrorCode::NegativeArrival,
                  "arrival rates must be nonnegative");
    }
  }
  if (departures.ell.size() != lambdas.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "departure matrix row count must equal the type count");
  }
  for (const auto& row : departures.ell) {
    if (static_cast<int>(row.size()) != rewards.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "departure matrix column count must equal |rewards|");
    }
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::DepartureOutOfRange,
                    "departure probability outside [0, 1]");
      }
    }
  }
  return Instance{std::move(lambdas), std::move(rewards),
                  std::move(departures), std::move(revenue)};
}

ParticipationSpec make_participation_spec(std::vector<double> reservations) {
  for (double w : reservations) {
    if (!(w >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "reservation wages must be nonnegative");
    }
  }
  return ParticipationSpec{std::move(reservations)};
}

double expected_payment(const Distribution& x, const RewardSet& rewards) {
  if (x.size() != rewards.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "distribution length must equal |rewards|");
  }
  double total = 0.0;
  for (int r = 0; r < x.size(); ++r) {
    total += rewards.values[r] * x.probs[r];
  }
  return total;
}

double departure_rate(const Instance& inst, int type, const Distribution& x) {
  const auto& row = inst.departures.ell[type];
  double rate = 0.0;
  for (int r = 0; r < x.size(); ++r) {
    rate += row[r] * x.probs[r];
  }
  return rate;
}

}  // namespace fairfluid

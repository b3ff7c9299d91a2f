#include "core/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fairfluid {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::ParseError, "malformed JSON document");
  }
  return doc;
}

std::vector<double> number_array(const json& node, const std::string& name) {
  if (!node.is_array()) {
    throw Error(ErrorCode::ParseError, name + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number()) {
      throw Error(ErrorCode::ParseError, name + " must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

RevenueFunction revenue_from_json(const json& node) {
  if (!node.is_object() || !node.contains("kind")) {
    throw Error(ErrorCode::ParseError, "revenue must be an object with kind");
  }
  std::string kind = node.at("kind").get<std::string>();
  if (kind == "linear") {
    return linear_revenue(node.at("alpha").get<double>());
  }
  if (kind == "capped") {
    return capped_linear_revenue(node.at("alpha").get<double>(),
                                 node.at("cap").get<double>());
  }
  if (kind == "pwl") {
    std::vector<std::pair<double, double>> bp;
    for (const auto& p : node.at("breakpoints")) {
      bp.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    return piecewise_linear_revenue(std::move(bp));
  }
  if (kind == "shifted") {
    return shift_revenue(revenue_from_json(node.at("base")),
                         node.at("offset").get<double>());
  }
  throw Error(ErrorCode::ParseError, "unknown revenue kind: " + kind);
}

json revenue_to_json(const RevenueFunction& rev) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, LinearRevenue>) {
          return {{"kind", "linear"}, {"alpha", r.alpha}};
        } else if constexpr (std::is_same_v<T, CappedLinearRevenue>) {
          return {{"kind", "capped"}, {"alpha", r.alpha}, {"cap", r.cap}};
        } else if constexpr (std::is_same_v<T, PiecewiseLinearRevenue>) {
          json bp = json::array();
          for (const auto& p : r.breakpoints) {
            bp.push_back({p.first, p.second});
          }
          return {{"kind", "pwl"}, {"breakpoints", bp}};
        } else {
          return {{"kind", "shifted"},
                  {"base", revenue_to_json(*r.base)},
                  {"offset", r.offset}};
        }
      },
      rev.fn);
}

Distribution distribution_from_json(const json& node, const Instance& inst,
                                    const std::string& name) {
  auto probs = number_array(node, name);
  if (static_cast<int>(probs.size()) != inst.num_rewards()) {
    throw Error(ErrorCode::DimensionMismatch,
                name + " length must equal |rewards|");
  }
  return make_distribution(std::move(probs));
}

std::vector<Distribution> schedule_from_json(const json& node,
                                             const Instance& inst,
                                             const std::string& name) {
  if (!node.is_array() || node.empty()) {
    throw Error(ErrorCode::ParseError, name + " must be a non-empty array");
  }
  std::vector<Distribution> schedule;
  for (const auto& x : node) {
    schedule.push_back(distribution_from_json(x, inst, name + " entry"));
  }
  return schedule;
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  json doc = parse_text(text);
  try {
    auto lambdas = number_array(doc.at("lambdas"), "lambdas");
    auto rewards = make_reward_set(number_array(doc.at("rewards"), "rewards"));
    const auto& dep = doc.at("departures");
    if (!dep.is_array()) {
      throw Error(ErrorCode::ParseError, "departures must be a matrix");
    }
    DepartureMatrix departures;
    for (const auto& row : dep) {
      departures.ell.push_back(number_array(row, "departures row"));
    }
    return make_instance(std::move(lambdas), std::move(rewards),
                         std::move(departures),
                         revenue_from_json(doc.at("revenue")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Instance instance_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["lambdas"] = inst.lambdas;
  doc["rewards"] = inst.rewards.values;
  doc["departures"] = inst.departures.ell;
  doc["revenue"] = revenue_to_json(inst.revenue);
  return doc.dump(2);
}

Policy policy_from_json(const std::string& text, const Instance& inst) {
  json doc = parse_text(text);
  try {
    std::string kind = doc.at("kind").get<std::string>();
    if (kind == "static") {
      return StaticPolicy{distribution_from_json(doc.at("x"), inst, "x")};
    }
    if (kind == "cyclic") {
      return CyclicPolicy{
          schedule_from_json(doc.at("schedule"), inst, "schedule")};
    }
    if (kind == "cohort") {
      CohortPolicy p;
      p.schedule_new = schedule_from_json(doc.at("new"), inst, "new");
      p.schedule_retained =
          schedule_from_json(doc.at("retained"), inst, "retained");
      if (doc.contains("seed")) {
        p.retained_seed = number_array(doc.at("seed"), "seed");
      }
      if (doc.contains("buildup")) {
        p.buildup_periods = doc.at("buildup").get<int>();
      }
      return p;
    }
    if (kind == "reward-slashing") {
      CyclicPolicy p;
      p.schedule = {point_mass(inst.num_rewards() - 1, inst.num_rewards()),
                    point_mass(0, inst.num_rewards())};
      return p;
    }
    throw Error(ErrorCode::ParseError, "unknown policy kind: " + kind);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Policy policy_from_file(const std::string& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return policy_from_json(buf.str(), inst);
}

std::string cycle_profile_to_json(const CycleProfile& profile) {
  json doc;
  doc["period"] = profile.period;
  doc["cohorts"] = profile.cohorts;
  json masses = json::array();
  for (const auto& state : profile.period_masses) {
    json per_type = json::array();
    for (int i = 0; i < state.num_types; ++i) {
      json row = json::array();
      for (int c = 0; c < state.cohorts; ++c) row.push_back(state.at(i, c));
      per_type.push_back(row);
    }
    masses.push_back(per_type);
  }
  doc["period_masses"] = masses;
  doc["avg_population"] = profile.avg_population;
  doc["avg_profit"] = profile.avg_profit;
  json exposures = json::array();
  for (std::size_t i = 0; i < profile.per_type_exposure.size(); ++i) {
    if (profile.presence[i] > 0.0) {
      exposures.push_back(profile.per_type_exposure[i].probs);
    } else {
      exposures.push_back(nullptr);
    }
  }
  doc["exposures"] = exposures;
  doc["avg_reward_per_type"] = profile.avg_reward_per_type;
  return doc.dump(2);
}

std::string fluid_opt_result_to_json(const FluidOptResult& result) {
  json doc;
  doc["x_star"] = result.x_star.probs;
  doc["n_star"] = result.n_star;
  doc["value"] = result.value;
  doc["grid_resolution"] = result.grid_resolution;
  doc["refined"] = result.refined;
  return doc.dump(2);
}

std::string audit_report_to_json(const AuditReport& report) {
  json doc;
  json exposures = json::array();
  for (const auto& x : report.exposures) exposures.push_back(x.probs);
  doc["exposures"] = exposures;
  doc["avg_rewards"] = report.avg_rewards;
  if (report.max_pairwise_l1.has_value()) {
    doc["gap"] = *report.max_pairwise_l1;
  } else {
    doc["gap"] = nullptr;
  }
  doc["delta"] = report.delta;
  doc["within_period_fair"] = report.within_period_fair;
  doc["fair"] = report.fair;
  return doc.dump(2);
}

}  // namespace fairfluid

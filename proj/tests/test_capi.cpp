#include <cmath>
#include <string>

#include "doctest.h"

#include "fairfluid.h"

namespace {

std::string data_path(const std::string& name) {
  return std::string(FAIRFLUID_DATA_DIR) + "/" + name;
}

struct Scoped {
  ff_instance* instance = nullptr;
  ff_policy* policy = nullptr;
  char* text = nullptr;

  ~Scoped() {
    ff_string_free(text);
    ff_policy_free(policy);
    ff_instance_free(instance);
  }
};

}  // namespace

TEST_CASE("instance lifecycle through the C API") {
  Scoped s;
  REQUIRE(ff_instance_from_file(data_path("prop2.json").c_str(),
                                &s.instance) == FF_OK);
  CHECK(ff_instance_num_types(s.instance) == 2);
  CHECK(ff_instance_num_rewards(s.instance) == 2);
  double rev = 0.0;
  REQUIRE(ff_eval_revenue(s.instance, 2.0, &rev) == FF_OK);
  CHECK(rev == doctest::Approx(1.4));
}

TEST_CASE("parse errors surface as status codes with messages") {
  ff_instance* inst = nullptr;
  CHECK(ff_instance_from_json("not json", &inst) == FF_ERR_PARSE);
  CHECK(std::string(ff_last_error()).size() > 0);
  CHECK(ff_instance_from_file("/no/such/file.json", &inst) == FF_ERR_IO);

  const char* bad_departure =
      "{\"lambdas\": [1.0], \"rewards\": [0.0],"
      " \"departures\": [[1.5]], \"revenue\": {\"kind\": \"linear\","
      " \"alpha\": 1.0}}";
  CHECK(ff_instance_from_json(bad_departure, &inst) ==
        FF_ERR_DEPARTURE_OUT_OF_RANGE);
}

TEST_CASE("steady cycle and audit via the C API") {
  Scoped s;
  REQUIRE(ff_instance_from_file(data_path("prop2.json").c_str(),
                                &s.instance) == FF_OK);
  REQUIRE(ff_policy_reward_slashing(s.instance, &s.policy) == FF_OK);

  REQUIRE(ff_steady_cycle(s.instance, s.policy, &s.text) == FF_OK);
  std::string profile(s.text);
  CHECK(profile.find("\"avg_profit\"") != std::string::npos);
  ff_string_free(s.text);
  s.text = nullptr;

  REQUIRE(ff_audit(s.instance, s.policy, 0.05, &s.text) == FF_OK);
  std::string report(s.text);
  CHECK(report.find("\"fair\": false") != std::string::npos);

  double profit = 0.0;
  REQUIRE(ff_long_run_profit(s.instance, s.policy, &profit) == FF_OK);
  CHECK(profit == doctest::Approx(0.79).epsilon(1e-9));
}

TEST_CASE("unstable policies map to FF_ERR_UNSTABLE") {
  Scoped s;
  REQUIRE(ff_instance_from_file(data_path("prop2.json").c_str(),
                                &s.instance) == FF_OK);
  REQUIRE(ff_policy_from_json("{\"kind\": \"static\", \"x\": [0.0, 1.0]}",
                              s.instance, &s.policy) == FF_OK);
  double profit = 0.0;
  CHECK(ff_long_run_profit(s.instance, s.policy, &profit) == FF_ERR_UNSTABLE);
}

TEST_CASE("optimizer and oracle via the C API") {
  Scoped s;
  REQUIRE(ff_instance_from_file(data_path("prop1.json").c_str(),
                                &s.instance) == FF_OK);
  REQUIRE(ff_solve_fluid_opt(s.instance, 0.01, 1e-9, &s.text) == FF_OK);
  std::string result(s.text);
  CHECK(result.find("\"value\"") != std::string::npos);
  ff_string_free(s.text);
  s.text = nullptr;
  REQUIRE(ff_grid_oracle(s.instance, 0.05, &s.text) == FF_OK);
}

TEST_CASE("shifted revenue through the C API") {
  Scoped s;
  REQUIRE(ff_instance_from_file(data_path("prop2.json").c_str(),
                                &s.instance) == FF_OK);
  ff_instance* shifted = nullptr;
  REQUIRE(ff_instance_shift_revenue(s.instance, 1.4, &shifted) == FF_OK);
  double rev = 0.0;
  REQUIRE(ff_eval_revenue(shifted, 2.0, &rev) == FF_OK);
  CHECK(rev == doctest::Approx(0.0));
  ff_instance_free(shifted);
}

TEST_CASE("belief policy and simulation via the C API") {
  Scoped s;
  REQUIRE(ff_instance_from_file(data_path("prop1.json").c_str(),
                                &s.instance) == FF_OK);
  REQUIRE(ff_policy_belief_based(
              s.instance,
              "{\"buildup\": 1, \"pool\": 25.0,"
              " \"retained\": [0.0, 1.0, 0.0], \"new\": [1.0, 0.0, 0.0]}",
              &s.policy) == FF_OK);
  double profit = 0.0;
  REQUIRE(ff_long_run_profit(s.instance, s.policy, &profit) == FF_OK);
  CHECK(profit == doctest::Approx(375.0));

  REQUIRE(ff_simulate_csv(s.instance, s.policy, 5, &s.text) == FF_OK);
  std::string csv(s.text);
  CHECK(csv.rfind("t,type,cohort,mass,payout_index\n", 0) == 0);
}

TEST_CASE("participation via the C API") {
  Scoped s;
  REQUIRE(ff_instance_from_file(data_path("prop2.json").c_str(),
                                &s.instance) == FF_OK);
  REQUIRE(ff_policy_reward_slashing(s.instance, &s.policy) == FF_OK);
  double reservations[2] = {0.45, 0.45};
  REQUIRE(ff_participation(s.instance, s.policy, reservations, 2, &s.text) ==
          FF_OK);
  CHECK(std::string(s.text).find("[\n    0\n  ]") != std::string::npos);
}

TEST_CASE("repro via the C API") {
  char* report = nullptr;
  int passed = 0;
  REQUIRE(ff_repro("prop2", "{}", "csv", &report, &passed) == FF_OK);
  CHECK(passed == 1);
  std::string csv(report);
  CHECK(csv.rfind("label,value,reference,tolerance,pass\n", 0) == 0);
  ff_string_free(report);

  CHECK(ff_repro("prop9", "{}", "csv", &report, &passed) ==
        FF_ERR_UNKNOWN_REPRO);
}

TEST_CASE("null arguments are rejected") {
  CHECK(ff_instance_from_json(nullptr, nullptr) == FF_ERR_INVALID_ARGUMENT);
  CHECK(ff_steady_cycle(nullptr, nullptr, nullptr) == FF_ERR_INVALID_ARGUMENT);
}

// Command-line front end for the fairfluid shared library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairfluid.h"

namespace {

int fail(const std::string& context) {
  std::cerr << "error: " << context << ": " << ff_last_error() << "\n";
  return 1;
}

int write_output(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  out << body;
  return out ? 0 : 1;
}

struct Loaded {
  ff_instance* instance = nullptr;
  ff_policy* policy = nullptr;

  ~Loaded() {
    ff_policy_free(policy);
    ff_instance_free(instance);
  }
};

int load_instance(const std::string& path, Loaded& loaded) {
  if (ff_instance_from_file(path.c_str(), &loaded.instance) != FF_OK) {
    return fail("loading instance " + path);
  }
  return 0;
}

// --policy accepts a JSON file path or the built-in name "slash".
int load_policy(const std::string& spec, Loaded& loaded) {
  if (spec == "slash") {
    if (ff_policy_reward_slashing(loaded.instance, &loaded.policy) != FF_OK) {
      return fail("building reward-slashing policy");
    }
    return 0;
  }
  if (ff_policy_from_file(spec.c_str(), loaded.instance, &loaded.policy) !=
      FF_OK) {
    return fail("loading policy " + spec);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic agent-retention dynamics, static-policy "
               "optimization, and group-fairness auditing"};
  app.require_subcommand(1);

  std::string instance_path, policy_spec, out_path, format = "json";
  double grid = 0.01, tol = 1e-9, delta = 1e-9;
  int horizon = 100;
  std::vector<double> reservations;

  auto* sim = app.add_subcommand("simulate", "Run the per-period recursion "
                                             "and export the trajectory CSV");
  sim->add_option("--instance", instance_path)->required();
  sim->add_option("--policy", policy_spec)->required();
  sim->add_option("--horizon", horizon);
  sim->add_option("--out", out_path);

  auto* steady = app.add_subcommand("steady", "Exact steady cycle of a "
                                              "periodic policy");
  steady->add_option("--instance", instance_path)->required();
  steady->add_option("--policy", policy_spec)->required();
  steady->add_option("--out", out_path);

  auto* opt = app.add_subcommand("optimize", "Optimal static policy via "
                                             "grid search plus refinement");
  opt->add_option("--instance", instance_path)->required();
  opt->add_option("--grid", grid);
  opt->add_option("--tol", tol);
  opt->add_option("--out", out_path);

  auto* audit = app.add_subcommand("audit", "Group-fairness audit of a "
                                            "policy at tolerance delta");
  audit->add_option("--instance", instance_path)->required();
  audit->add_option("--policy", policy_spec)->required();
  audit->add_option("--delta", delta);
  audit->add_option("--reservations", reservations)
      ->description("per-type reservation wages; adds a participation check");
  audit->add_option("--out", out_path);

  auto* repro = app.add_subcommand("repro", "Reproduction report for a "
                                            "worked instance");
  std::string repro_name, repro_params = "{}";
  repro->add_option("name", repro_name, "prop1 | prop2 | pof | theorem1")
      ->required();
  repro->add_option("--params", repro_params, "parameter overrides as JSON");
  repro->add_option("--grid", grid);
  repro->add_option("--tol", tol);
  repro->add_option("--out", out_path);
  repro->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  Loaded loaded;
  char* text = nullptr;
  int rc = 0;

  if (sim->parsed()) {
    if ((rc = load_instance(instance_path, loaded))) return rc;
    if ((rc = load_policy(policy_spec, loaded))) return rc;
    if (ff_simulate_csv(loaded.instance, loaded.policy, horizon, &text) !=
        FF_OK) {
      return fail("simulate");
    }
  } else if (steady->parsed()) {
    if ((rc = load_instance(instance_path, loaded))) return rc;
    if ((rc = load_policy(policy_spec, loaded))) return rc;
    if (ff_steady_cycle(loaded.instance, loaded.policy, &text) != FF_OK) {
      return fail("steady");
    }
  } else if (opt->parsed()) {
    if ((rc = load_instance(instance_path, loaded))) return rc;
    if (ff_solve_fluid_opt(loaded.instance, grid, tol, &text) != FF_OK) {
      return fail("optimize");
    }
  } else if (audit->parsed()) {
    if ((rc = load_instance(instance_path, loaded))) return rc;
    if ((rc = load_policy(policy_spec, loaded))) return rc;
    if (ff_audit(loaded.instance, loaded.policy, delta, &text) != FF_OK) {
      return fail("audit");
    }
    if (!reservations.empty()) {
      char* joining = nullptr;
      if (ff_participation(loaded.instance, loaded.policy,
                           reservations.data(),
                           static_cast<int>(reservations.size()),
                           &joining) != FF_OK) {
        ff_string_free(text);
        return fail("participation");
      }
      std::string combined(text);
      combined += "\n";
      combined += joining;
      ff_string_free(joining);
      ff_string_free(text);
      text = nullptr;
      rc = write_output(combined, out_path);
      return rc;
    }
  } else if (repro->parsed()) {
    // fold CLI solver flags into the params document
    std::string params = repro_params;
    if (params == "{}") {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "{\"grid\": %.17g, \"tol\": %.17g}",
                    grid == 0.01 ? 0.005 : grid, tol);
      params = buf;
    }
    int all_passed = 0;
    if (ff_repro(repro_name.c_str(), params.c_str(), format.c_str(), &text,
                 &all_passed) != FF_OK) {
      return fail("repro " + repro_name);
    }
    rc = write_output(text, out_path);
    ff_string_free(text);
    return rc != 0 ? rc : (all_passed ? 0 : 2);
  }

  if (text != nullptr) {
    rc = write_output(text, out_path);
    ff_string_free(text);
  }
  return rc;
}

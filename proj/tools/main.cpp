#include <iostream>
#include <string>

#include <CLI/CLI.hpp>
#include "commands.hpp"

namespace {

using depletion::cli::ExperimentConfig;

void parse_seed_range(const std::string& text, ExperimentConfig& config) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw depletion::ConfigError("--seeds expects a:b");
  try {
    config.seed_begin = std::stoull(text.substr(0, colon));
    config.seed_end = std::stoull(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw depletion::ConfigError("--seeds expects a:b, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string current;
  for (char ch : text) {
    if (ch == ',') {
      if (!current.empty()) items.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) items.push_back(current);
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig config;
  std::string policies_text;
  std::string properties_text;
  std::string seeds_text;
  double epsilon = 0.0;

  CLI::App app{"Stochastic depletion solver and experiment runner", "depletion"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", config.seed, "master seed");
  app.add_option("--cap-states", config.limits.max_states, "max states times epochs");
  app.add_option("--cap-outcomes", config.limits.max_outcomes, "max depletion outcomes per step");
  app.add_option("--cap-activities", config.limits.max_activities, "max activities");
  app.add_option("--tol", config.tol, "property check tolerance");
  app.add_option("--out", config.out, "output path");
  app.add_option("--format", config.format, "batch stdout format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", config.threads, "worker threads")->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* generate = app.add_subcommand("generate", "build an instance for an application");
  generate->add_option("--app", config.app)->required();
  generate->add_option("--params", config.params_path);
  auto* eps_opt = generate->add_option("--epsilon", epsilon);

  auto* solve = app.add_subcommand("solve", "compute the clairvoyant optimum");
  solve->add_option("--instance", config.instance_path)->required();
  solve->add_option("--dump-table", config.dump_table);
  solve->add_option("--policies", policies_text, "comma-separated policies to evaluate exactly");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy");
  simulate->add_option("--instance", config.instance_path)->required();
  simulate->add_option("--policy", config.policy);
  simulate->add_option("--reps", config.reps);

  auto* check = app.add_subcommand("check", "run property checks");
  check->add_option("--instance", config.instance_path)->required();
  check->add_option("--properties", properties_text, "vfm,ir,ratio:<b>,submodular,assumption1");
  check->add_option("--policy", config.policy, "policy for ratio checks");
  check->add_flag("--strict", config.strict, "exit 1 on any property failure");

  auto* batch = app.add_subcommand("batch", "solve and check a seed range");
  batch->add_option("--app", config.app)->required();
  batch->add_option("--params", config.params_path);
  batch->add_option("--seeds", seeds_text, "half-open range a:b")->required();
  batch->add_option("--policies", policies_text);
  batch->add_option("--epsilon", epsilon);

  for (auto* sub : {generate, solve, simulate, check, batch}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return depletion::cli::kExitConfigError;
  }

  try {
    config.policies = split_list(policies_text);
    config.properties = split_list(properties_text);
    if (*eps_opt || batch->count("--epsilon") > 0) config.epsilon = epsilon;
    if (*generate) return depletion::cli::run_generate(config, std::cout);
    if (*solve) return depletion::cli::run_solve(config, std::cout);
    if (*simulate) return depletion::cli::run_simulate(config, std::cout);
    if (*check) return depletion::cli::run_check(config, std::cout);
    if (batch->parsed()) {
      parse_seed_range(seeds_text, config);
      if (config.policies.empty()) config.policies = {"myopic"};
      return depletion::cli::run_batch(config, std::cout);
    }
  } catch (const std::exception& e) {
    return depletion::cli::report_error(e, std::cerr);
  }
  return depletion::cli::kExitConfigError;
}

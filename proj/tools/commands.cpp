#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace depletion::cli {

using nlohmann::json;

namespace {

std::string format17(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::string format_short(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.15g", v);
  return buffer;
}

SolverOptions solver_options(const ExperimentConfig& config) { return {config.limits, config.threads}; }

std::string params_text(const ExperimentConfig& config) {
  if (config.params_path.empty()) return {};
  if (!std::filesystem::exists(config.params_path)) throw ConfigError("params not found: " + config.params_path);
  return read_text_file(config.params_path);
}

void emit(const ExperimentConfig& config, std::ostream& out, const std::string& text) {
  if (config.out.empty()) {
    out << text << '\n';
  } else {
    write_text_file(config.out, text + "\n");
  }
}

Instance load_checked(const ExperimentConfig& config) {
  if (config.instance_path.empty()) throw ConfigError("--instance is required");
  Instance instance = load_instance(config.instance_path);
  if (instance.num_activities() > config.limits.max_activities)
    throw ActivityCapExceeded("activity count exceeds cap");
  return instance;
}

Instance require_instance(const ExperimentConfig& config) {
  Instance instance = load_checked(config);
  require_valid(instance, config.limits);
  return instance;
}

// Reward-shape rules that check_assumption1 reports itself.
bool is_assumption1_rule(const std::string& rule) {
  return rule == "w negative" || rule == "w not non-increasing in t" || rule == "reward negative" ||
         rule == "reward not non-increasing in t" || rule == "terminal reward nonzero";
}

}  // namespace

Instance generate_instance(const std::string& app, const std::string& params, std::uint64_t seed,
                           const Limits& limits, std::optional<double> epsilon) {
  auto need = [&](const char* what) {
    if (params.empty()) throw ConfigError(std::string("--params is required for ") + what);
  };
  if (app == "worstcase") {
    double eps = epsilon.value_or(0.1);
    if (!params.empty()) eps = json::parse(params).value("epsilon", eps);
    return build_worst_case_instance(eps);
  }
  if (app == "random-submodular") return random_submodular_instance(seed, random_family_params_from_json(params));
  if (app == "random-linear") return random_linear_decaying_instance(seed, random_family_params_from_json(params));
  if (app == "random-broadcast-static") {
    return build_broadcast_instance(random_static_broadcast_params(seed), seed, limits);
  }
  need(app.c_str());
  if (app == "queueing") return build_queueing_instance(queueing_params_from_json(params), seed, limits);
  if (app == "broadcast") return build_broadcast_instance(broadcast_params_from_json(params), seed, limits);
  if (app == "productline") return build_product_line_instance(product_line_params_from_json(params), limits);
  if (app == "adwords") return build_adwords_instance(adwords_params_from_json(params), limits);
  if (app == "matroid-card") return build_cardinality_matroid_instance(matroid_params_from_json(params), limits);
  if (app == "matroid-part") return build_partition_matroid_instance(matroid_params_from_json(params), limits);
  if (app == "setcover") {
    const auto p = set_cover_params_from_json(params);
    return build_set_cover_instance(p.ground_size, p.sets, p.k);
  }
  throw ConfigError("unknown application '" + app + "'");
}

int run_generate(const ExperimentConfig& config, std::ostream& out) {
  if (config.app.empty()) throw ConfigError("--app is required");
  const Instance instance = generate_instance(config.app, params_text(config), config.seed, config.limits, config.epsilon);
  require_valid(instance, config.limits);
  emit(config, out, instance_to_json(instance));
  return kExitOk;
}

int run_solve(const ExperimentConfig& config, std::ostream& out) {
  const Instance instance = require_instance(config);
  const auto options = solver_options(config);
  auto table = std::make_shared<const ValueTable>(solve_clairvoyant(instance, options));
  const State start = instance.initial_state();
  const double j_star = optimal_value(*table, instance, start);
  if (!config.dump_table.empty()) write_text_file(config.dump_table, value_table_to_json(*table) + "\n");

  json summary = {{"fingerprint", fingerprint_hex(table->fingerprint())},
                  {"j_star", j_star},
                  {"states", table->indexer().size()},
                  {"horizon", instance.horizon},
                  {"activities", instance.num_activities()},
                  {"best_activity", table->best_activity(start.items, 0)}};
  out << "J*=" << format_short(j_star) << '\n';
  out << "states=" << table->indexer().size() << " horizon=" << instance.horizon
      << " activities=" << instance.num_activities() << " fingerprint=" << fingerprint_hex(table->fingerprint())
      << '\n';
  json evaluated = json::array();
  for (const auto& name : config.policies) {
    const Policy policy = make_policy(parse_policy_spec(name), instance, options, table);
    const ValueTable values = evaluate_policy_exact(instance, policy, options);
    const double j = values.value(values.indexer().index(start.items), 0);
    const double ratio = j > 0.0 ? j_star / j : (j_star > 0.0 ? INFINITY : 1.0);
    out << "J^" << policy.name() << "=" << format_short(j) << " ratio=" << format_short(ratio) << '\n';
    evaluated.push_back({{"policy", policy.name()}, {"j_policy", j}, {"ratio", std::isinf(ratio) ? json("inf") : json(ratio)}});
  }
  summary["policies"] = evaluated;
  if (!config.out.empty()) write_text_file(config.out, summary.dump(2) + "\n");
  return kExitOk;
}

int run_simulate(const ExperimentConfig& config, std::ostream& out) {
  const Instance instance = require_instance(config);
  if (config.reps == 0) throw ConfigError("--reps must be at least 1");
  const auto options = solver_options(config);
  const Policy policy = make_policy(parse_policy_spec(config.policy), instance, options);
  if (!config.out.empty()) {
    std::ofstream traces(config.out, std::ios::binary);
    if (!traces) throw ConfigError("cannot write " + config.out);
    for (std::size_t k = 0; k < config.reps; ++k)
      traces << episode_trace_to_json(simulate_episode(instance, policy, split_seed(config.seed, k))) << '\n';
  }
  const EvalSummary summary = monte_carlo_value(instance, policy, config.reps, config.seed, config.threads);
  out << eval_summary_to_json(summary) << '\n';
  return kExitOk;
}

int run_check(const ExperimentConfig& config, std::ostream& out) {
  const Instance instance = load_checked(config);
  bool reward_shape_ok = true;
  {
    ValidationReport structural;
    for (const auto& v : validate_instance(instance, config.limits).violations) {
      if (is_assumption1_rule(v.rule)) {
        reward_shape_ok = false;
      } else {
        structural.violations.push_back(v);
      }
    }
    if (!structural.ok()) throw ConfigError("invalid instance: " + structural.summary());
  }
  const auto options = solver_options(config);
  const Tolerance tol(config.tol);
  auto properties = config.properties;
  if (properties.empty()) properties = {"vfm", "ir", "ratio:2"};

  std::shared_ptr<const ValueTable> table;
  auto optimal = [&] {
    if (!table) table = std::make_shared<const ValueTable>(solve_clairvoyant(instance, options));
    return table;
  };

  bool all_pass = true;
  json reports = json::array();
  for (const auto& property : properties) {
    bool pass = false;
    json report;
    const bool needs_table = property == "vfm" || property == "ir" || property.rfind("ratio:", 0) == 0;
    if (needs_table && !reward_shape_ok) {
      out << property << ": FAIL (reward violates assumption1; not solvable)\n";
      reports.push_back({{"property", property}, {"pass", false}, {"error", "reward violates assumption1"}});
      all_pass = false;
      continue;
    }
    if (property == "vfm") {
      const auto r = check_vfm(instance, *optimal(), tol);
      pass = r.pass;
      report = json::parse(property_report_to_json(r));
    } else if (property == "ir") {
      const auto r = check_ir(instance, *optimal(), tol, config.limits);
      pass = r.pass;
      report = json::parse(property_report_to_json(r));
    } else if (property == "submodular") {
      if (!std::holds_alternative<SubmodularReward>(instance.reward)) {
        out << "submodular: n/a (" << reward_family(instance.reward) << " reward)\n";
        reports.push_back({{"property", "submodular"}, {"applicable", false}});
        continue;
      }
      const auto r = check_submodular(instance.reward, instance.capacities, tol, config.limits);
      pass = r.pass;
      report = json::parse(property_report_to_json(r));
    } else if (property == "assumption1") {
      const auto r = check_assumption1(instance, tol);
      pass = r.pass;
      report = json::parse(property_report_to_json(r));
    } else if (property.rfind("ratio:", 0) == 0) {
      double bound = 0.0;
      try {
        bound = std::stod(property.substr(6));
      } catch (const std::exception&) {
        throw ConfigError("invalid ratio bound in '" + property + "'");
      }
      const Policy policy = make_policy(parse_policy_spec(config.policy), instance, options, optimal());
      const auto r = check_ratio(instance, policy, bound, tol, options, optimal());
      pass = r.pass;
      report = json::parse(ratio_report_to_json(r));
      report["property"] = property;
    } else {
      throw ConfigError("unknown property '" + property + "'");
    }
    all_pass = all_pass && pass;
    out << property << ": " << (pass ? "pass" : "FAIL");
    if (!pass && report.contains("violations") && !report["violations"].empty())
      out << " witness=" << report["violations"][0].dump();
    if (!pass && report.contains("worst_state")) out << " worst_state=" << report["worst_state"].dump();
    out << '\n';
    reports.push_back(std::move(report));
  }
  json document = {{"fingerprint", fingerprint_hex(fingerprint(instance))}, {"pass", all_pass}, {"reports", reports}};
  if (!config.out.empty()) write_text_file(config.out, document.dump(2) + "\n");
  return (!all_pass && config.strict) ? kExitPropertyFailure : kExitOk;
}

std::string BatchReport::to_csv() const {
  std::ostringstream csv;
  csv << "seed,fingerprint,family,j_star";
  for (const auto& p : policies) csv << ",j_" << p << ",ratio_" << p << ",max_ratio_" << p;
  csv << ",vfm,ir,error\n";
  for (const auto& row : rows) {
    csv << row.seed << ',' << row.fingerprint << ',' << row.family << ',' << (row.error.empty() ? format17(row.j_star) : "");
    for (std::size_t i = 0; i < policies.size(); ++i) {
      if (i < row.policies.size()) {
        const auto& c = row.policies[i];
        csv << ',' << format17(c.j_policy) << ',' << format17(c.ratio) << ',' << format17(c.max_ratio);
      } else {
        csv << ",,,";
      }
    }
    const bool ok = row.error.empty();
    csv << ',' << (ok ? (row.vfm ? "pass" : "FAIL") : "") << ',' << (ok ? (row.ir ? "pass" : "FAIL") : "") << ',';
    std::string error = row.error;
    for (char& ch : error)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    csv << error << '\n';
  }
  return csv.str();
}

std::string BatchReport::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    json policies_json = json::array();
    for (const auto& c : row.policies) {
      policies_json.push_back({{"policy", c.policy},
                               {"j_policy", c.j_policy},
                               {"ratio", std::isinf(c.ratio) ? json("inf") : json(c.ratio)},
                               {"max_ratio", std::isinf(c.max_ratio) ? json("inf") : json(c.max_ratio)}});
    }
    json r = {{"seed", row.seed},     {"fingerprint", row.fingerprint}, {"family", row.family},
              {"j_star", row.j_star}, {"policies", policies_json},      {"vfm", row.vfm},
              {"ir", row.ir},         {"seconds", row.seconds}};
    if (!row.error.empty()) r["error"] = row.error;
    rows_json.push_back(std::move(r));
  }
  return json{{"policies", policies}, {"rows", rows_json}}.dump(2);
}

namespace {

BatchRow batch_row(const ExperimentConfig& config, const std::string& params, std::uint64_t seed) {
  BatchRow row;
  row.seed = seed;
  const auto started = std::chrono::steady_clock::now();
  try {
    const SolverOptions options{config.limits, 1};
    const Instance instance = generate_instance(config.app, params, seed, config.limits, config.epsilon);
    require_valid(instance, config.limits);
    row.family = reward_family(instance.reward);
    auto table = std::make_shared<const ValueTable>(solve_clairvoyant(instance, options));
    row.fingerprint = fingerprint_hex(table->fingerprint());
    row.j_star = table->value(instance.initial_items, 0);
    const Tolerance tol(config.tol);
    row.vfm = check_vfm(instance, *table, tol).pass;
    row.ir = check_ir(instance, *table, tol, config.limits).pass;
    for (const auto& name : config.policies) {
      const Policy policy = make_policy(parse_policy_spec(name), instance, options, table);
      const auto ratio = check_ratio(instance, policy, 2.0, tol, options, table);
      row.policies.push_back({name, ratio.j_policy, ratio.ratio, ratio.max_ratio});
    }
  } catch (const std::exception& e) {
    const auto* lib = dynamic_cast<const Error*>(&e);
    row.error = std::string(lib ? lib->kind() : "error") + ": " + e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return row;
}

}  // namespace

BatchReport run_batch_report(const ExperimentConfig& config) {
  if (config.app.empty()) throw ConfigError("--app is required");
  if (config.seed_end < config.seed_begin) throw ConfigError("seed range end precedes its start");
  for (const auto& name : config.policies) (void)parse_policy_spec(name);
  const std::string params = params_text(config);
  BatchReport report;
  report.policies = config.policies;
  const std::size_t count = config.seed_end - config.seed_begin;
  report.rows.resize(count);
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) report.rows[i] = batch_row(config, params, config.seed_begin + i);
    });
  }
  for (auto& worker : workers) worker.join();
  return report;
}

int run_batch(const ExperimentConfig& config, std::ostream& out) {
  const BatchReport report = run_batch_report(config);
  if (config.out.empty()) {
    out << (config.format == "csv" ? report.to_csv() : report.to_json() + "\n");
  } else {
    write_text_file(config.out + ".csv", report.to_csv());
    write_text_file(config.out + ".json", report.to_json() + "\n");
    out << "rows=" << report.rows.size() << " csv=" << config.out << ".csv json=" << config.out << ".json\n";
  }
  return kExitOk;
}

int report_error(const std::exception& e, std::ostream& err) {
  int code = kExitConfigError;
  std::string kind = "Error";
  if (const auto* lib = dynamic_cast<const Error*>(&e)) {
    kind = lib->kind();
    if (dynamic_cast<const CapExceeded*>(&e)) code = kExitCapExceeded;
  } else if (dynamic_cast<const json::exception*>(&e)) {
    kind = "ParseError";
  }
  err << json{{"error", kind}, {"message", e.what()}}.dump() << '\n';
  return code;
}

}  // namespace depletion::cli

#include "depletion/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <type_traits>

#include "depletion/errors.hpp"
#include "depletion/model.hpp"
#include <nlohmann/json.hpp>

namespace depletion {

using nlohmann::json;

namespace {

json real_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_real(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
    throw ParseError("expected a number, got '" + s + "'");
  }
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

std::vector<double> get_reals(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_real(v));
  return out;
}

std::vector<std::vector<double>> get_real_matrix(const json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& row : j) out.push_back(get_reals(row));
  return out;
}

json reals_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(real_or_inf(x));
  return out;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid document: ") + e.what());
  }
}

json set_function_to_json(const SetFunction& w) {
  return std::visit(
      [](const auto& f) -> json {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, WeightedCoverage>) {
          return {{"kind", "submodular_coverage"}, {"element_weights", f.element_weights}, {"covers", f.covers}};
        } else if constexpr (std::is_same_v<F, BudgetedLinear>) {
          return {{"kind", "submodular_budgeted"},
                  {"groups", f.groups},
                  {"values", f.values},
                  {"budgets", reals_json(f.budgets)}};
        } else if constexpr (std::is_same_v<F, PlainLinear>) {
          return {{"kind", "linear"}, {"values", f.values}};
        } else if constexpr (std::is_same_v<F, TabulatedSetFunction>) {
          return {{"kind", "submodular_tabulated"}, {"bound", f.bound}, {"values", f.values}};
        } else {
          throw ConfigError("custom set function '" + f.name + "' cannot be serialized");
        }
      },
      w);
}

/// Accepts both the instance reward kinds and the short names used in
/// application parameter files (coverage, budgeted, linear, tabulated).
SetFunction set_function_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "submodular_coverage" || kind == "coverage") {
    return WeightedCoverage{get_reals(j.at("element_weights")), j.at("covers").get<std::vector<std::vector<int>>>()};
  }
  if (kind == "submodular_budgeted" || kind == "budgeted") {
    return BudgetedLinear{j.at("groups").get<std::vector<int>>(), get_reals(j.at("values")), get_reals(j.at("budgets"))};
  }
  if (kind == "linear") return PlainLinear{get_reals(j.at("values"))};
  if (kind == "submodular_tabulated" || kind == "tabulated") {
    return TabulatedSetFunction{j.at("bound").get<ItemVector>(), get_reals(j.at("values"))};
  }
  throw ParseError("unknown set function kind '" + kind + "'");
}

json reward_to_json(const RewardSpec& reward) {
  return std::visit(
      [](const auto& r) -> json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, LinearDecayingReward>) {
          return {{"kind", "linear_decaying"}, {"weights", r.weights}};
        } else if constexpr (std::is_same_v<R, SubmodularReward>) {
          return set_function_to_json(r.w);
        } else {
          json entries = json::array();
          const auto& idx = r.indexer();
          for (int t = 0; t <= r.horizon(); ++t)
            for (std::size_t x = 0; x < idx.size(); ++x)
              for (std::size_t xn = 0; xn < idx.size(); ++xn) {
                const double g = r.at_index(x, xn, t);
                if (g == 0.0 && !std::signbit(g)) continue;
                entries.push_back({{"x", idx.decode(x)}, {"x_next", idx.decode(xn)}, {"t", t}, {"g", g}});
              }
          return {{"kind", "general_tabulated"}, {"entries", entries}};
        }
      },
      reward);
}

RewardSpec reward_from_json(const json& j, const ItemVector& capacities, int horizon) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "linear_decaying") return LinearDecayingReward{get_real_matrix(j.at("weights"))};
  if (kind == "general_tabulated") {
    TabulatedReward g(capacities, horizon);
    for (const auto& e : j.at("entries")) {
      const auto x = e.at("x").get<ItemVector>();
      const auto xn = e.at("x_next").get<ItemVector>();
      g.set(x, xn, e.at("t").get<int>(), get_real(e.at("g")));
    }
    return g;
  }
  return SubmodularReward{set_function_from_json(j)};
}

}  // namespace

std::string fingerprint_hex(std::uint64_t fingerprint) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << fingerprint;
  return out.str();
}

std::string instance_to_json(const Instance& instance, int indent) {
  json j;
  j["num_types"] = instance.num_types();
  j["capacities"] = instance.capacities;
  j["initial_items"] = instance.initial_items;
  j["horizon"] = instance.horizon;
  j["activities"] = instance.activities;
  json schedule = json::array();
  for (int t = 0; t < instance.schedule.horizon(); ++t) {
    json per_activity = json::array();
    for (std::size_t a = 0; a < instance.schedule.num_activities(); ++a) {
      const auto row = instance.schedule.row(t, a);
      per_activity.push_back(std::vector<double>(row.begin(), row.end()));
    }
    schedule.push_back(std::move(per_activity));
  }
  j["schedule"] = std::move(schedule);
  j["reward"] = reward_to_json(instance.reward);
  if (instance.arrivals) j["arrivals"] = *instance.arrivals;
  if (instance.deadlines) j["deadlines"] = *instance.deadlines;
  j["metadata"] = instance.metadata;
  return j.dump(indent);
}

Instance instance_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    Instance instance;
    instance.capacities = j.at("capacities").get<ItemVector>();
    if (j.contains("num_types") && j.at("num_types").get<std::size_t>() != instance.capacities.size())
      throw ParseError("num_types differs from the length of capacities");
    instance.initial_items = j.at("initial_items").get<ItemVector>();
    instance.horizon = j.at("horizon").get<int>();
    instance.activities = j.at("activities").get<std::vector<std::string>>();
    if (instance.horizon < 1) throw ParseError("horizon must be at least 1");
    const auto& schedule = j.at("schedule");
    if (schedule.size() != static_cast<std::size_t>(instance.horizon))
      throw ParseError("schedule needs one block per epoch");
    instance.schedule = DepletionSchedule(instance.horizon, instance.activities.size(), instance.capacities.size());
    for (int t = 0; t < instance.horizon; ++t) {
      const auto& block = schedule.at(t);
      if (block.size() != instance.activities.size()) throw ParseError("schedule needs one row per activity");
      for (std::size_t a = 0; a < instance.activities.size(); ++a) {
        const auto& row = block.at(a);
        if (row.size() != instance.capacities.size()) throw ParseError("schedule row needs one entry per type");
        for (std::size_t m = 0; m < instance.capacities.size(); ++m) instance.schedule.set(t, a, m, get_real(row.at(m)));
      }
    }
    instance.reward = reward_from_json(j.at("reward"), instance.capacities, instance.horizon);
    if (j.contains("arrivals") && !j.at("arrivals").is_null()) instance.arrivals = j.at("arrivals").get<std::vector<int>>();
    if (j.contains("deadlines") && !j.at("deadlines").is_null())
      instance.deadlines = j.at("deadlines").get<std::vector<int>>();
    if (j.contains("metadata")) {
      for (const auto& [key, value] : j.at("metadata").items())
        instance.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return instance;
  });
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("instance not found: " + path.string());
  return instance_from_json(read_text_file(path));
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  write_text_file(path, instance_to_json(instance) + "\n");
}

std::string value_table_to_json(const ValueTable& table) {
  json j;
  j["fingerprint"] = fingerprint_hex(table.fingerprint());
  j["kind"] = table.kind() == ValueTable::Kind::kOptimal ? "optimal" : "policy";
  j["label"] = table.label();
  j["capacities"] = table.indexer().capacities();
  j["horizon"] = table.horizon();
  j["state_index"] = "sum_m x_m * prod_{m'<m} (capacity_m' + 1)";
  const auto S = table.indexer().size();
  json values = json::array();
  json best = json::array();
  for (int t = 0; t <= table.horizon(); ++t) {
    std::vector<double> v(S);
    for (std::size_t i = 0; i < S; ++i) v[i] = table.value(i, t);
    values.push_back(std::move(v));
    if (t < table.horizon()) {
      std::vector<int> b(S);
      for (std::size_t i = 0; i < S; ++i) b[i] = table.best_activity(i, t);
      best.push_back(std::move(b));
    }
  }
  j["values"] = std::move(values);
  j["best_activity"] = std::move(best);
  return j.dump();
}

ValueTable value_table_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    const auto fp = std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
    const auto kind = j.at("kind").get<std::string>() == "optimal" ? ValueTable::Kind::kOptimal
                                                                    : ValueTable::Kind::kPolicy;
    ValueTable table(j.at("capacities").get<ItemVector>(), j.at("horizon").get<int>(), fp, kind,
                     j.at("label").get<std::string>());
    const auto S = table.indexer().size();
    const auto& values = j.at("values");
    const auto& best = j.at("best_activity");
    if (values.size() != static_cast<std::size_t>(table.horizon() + 1) ||
        best.size() != static_cast<std::size_t>(table.horizon()))
      throw ParseError("value table has the wrong number of epochs");
    for (int t = 0; t <= table.horizon(); ++t) {
      if (values.at(t).size() != S) throw ParseError("value table row has the wrong number of states");
      for (std::size_t i = 0; i < S; ++i) table.set_value(i, t, values.at(t).at(i).get<double>());
      if (t < table.horizon()) {
        if (best.at(t).size() != S) throw ParseError("best_activity row has the wrong number of states");
        for (std::size_t i = 0; i < S; ++i) table.set_best_activity(i, t, best.at(t).at(i).get<std::int32_t>());
      }
    }
    return table;
  });
}

namespace {

json violation_json(const PropertyViolation& v) {
  json witness = json::object();
  for (const auto& w : v.witness) witness[w.label] = w.vector;
  json out = {{"rule", v.rule}, {"witness", witness}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"gap", v.gap}};
  if (v.epoch >= 0) out["t"] = v.epoch;
  return out;
}

}  // namespace

std::string property_report_to_json(const PropertyReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) violations.push_back(violation_json(v));
  json j = {{"property", report.property},
            {"fingerprint", fingerprint_hex(report.fingerprint)},
            {"checked", report.checked},
            {"violation_count", report.violation_count},
            {"worst_gap", report.worst_gap},
            {"pass", report.pass},
            {"violations", violations}};
  return j.dump();
}

std::string ratio_report_to_json(const RatioReport& report) {
  json j = {{"property", "ratio"},
            {"fingerprint", fingerprint_hex(report.fingerprint)},
            {"policy", report.policy},
            {"j_star", report.j_star},
            {"j_policy", report.j_policy},
            {"ratio", real_or_inf(report.ratio)},
            {"max_ratio", real_or_inf(report.max_ratio)},
            {"worst_state", {{"x", report.worst_state.items}, {"t", report.worst_state.epoch}}},
            {"bound", report.bound},
            {"slack", real_or_inf(report.slack)},
            {"states_checked", report.states_checked},
            {"zero_value_states", report.zero_value_states},
            {"pass", report.pass}};
  return j.dump();
}

std::string validation_report_to_json(const ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"field", v.field}, {"indices", v.indices}, {"rule", v.rule}});
  return json{{"pass", report.ok()}, {"violations", violations}}.dump();
}

std::string episode_trace_to_json(const EpisodeTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back(
        {{"t", s.state.epoch}, {"items", s.state.items}, {"activity", s.activity}, {"depleted", s.depleted}, {"reward", s.reward}});
  }
  json j = {{"seed", trace.seed},
            {"total_reward", trace.total_reward},
            {"final_items", trace.final_state.items},
            {"steps", steps}};
  return j.dump();
}

std::string eval_summary_to_json(const EvalSummary& s) {
  json j = {{"policy", s.policy},        {"mean", s.mean},         {"stddev", s.stddev},
            {"replications", s.replications}, {"standard_error", s.standard_error}, {"seed", s.seed}};
  return j.dump();
}

QueueingParams queueing_params_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    QueueingParams p;
    p.num_buffers = j.at("num_buffers").get<int>();
    p.num_servers = j.at("num_servers").get<int>();
    p.horizon = j.at("horizon").get<int>();
    if (j.contains("arrival_rates")) p.arrival_rates = get_reals(j.at("arrival_rates"));
    if (j.contains("arrival_traces")) p.arrival_traces = j.at("arrival_traces").get<std::vector<std::vector<int>>>();
    p.mean_service = get_real_matrix(j.at("mean_service"));
    p.rewards = get_real_matrix(j.at("rewards"));
    return p;
  });
}

BroadcastParams broadcast_params_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    BroadcastParams p;
    p.num_users = j.at("num_users").get<int>();
    p.num_pages = j.at("num_pages").get<int>();
    p.horizon = j.at("horizon").get<int>();
    p.max_users_per_slot = j.at("k").get<int>();
    if (j.contains("requests")) {
      for (const auto& r : j.at("requests")) {
        p.requests.push_back({r.at("user").get<int>(), r.at("page").get<int>(), r.at("arrival").get<int>(),
                              r.at("deadline").get<int>()});
      }
    }
    p.requests_per_slot = j.value("requests_per_slot", 0);
    p.rewards = get_real_matrix(j.at("rewards"));
    if (j.contains("channel_constants")) p.channel_constants = get_reals(j.at("channel_constants"));
    if (j.contains("channel_sequences")) p.channel_sequences = get_real_matrix(j.at("channel_sequences"));
    return p;
  });
}

ProductLineParams product_line_params_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    ProductLineParams p;
    p.num_products = j.at("num_products").get<int>();
    p.max_assortment = j.at("k").get<int>();
    p.horizon = j.at("horizon").get<int>();
    p.segment_sizes = j.at("segment_sizes").get<std::vector<int>>();
    p.prices = get_reals(j.at("prices"));
    for (const auto& d : j.at("demand"))
      p.demand.push_back({d.at("products").get<std::vector<int>>(), get_real_matrix(d.at("purchase"))});
    return p;
  });
}

AdwordsParams adwords_params_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    AdwordsParams p;
    p.num_advertisers = j.at("num_advertisers").get<int>();
    p.num_keywords = j.at("num_keywords").get<int>();
    p.budgets = get_reals(j.at("budgets"));
    p.valuations = get_real_matrix(j.at("valuations"));
    p.keyword_sequence = j.at("keyword_sequence").get<std::vector<int>>();
    p.max_ads_per_slot = j.at("max_ads_per_slot").get<int>();
    p.click_probabilities = get_real_matrix(j.at("click_probabilities"));
    return p;
  });
}

MatroidParams matroid_params_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    MatroidParams p;
    p.ground_size = j.at("ground_size").get<std::size_t>();
    p.value = set_function_from_json(j.at("value"));
    p.cardinality = j.value("cardinality", 0);
    if (j.contains("partition")) p.partition = j.at("partition").get<std::vector<std::vector<int>>>();
    if (j.contains("partition_bounds")) p.partition_bounds = j.at("partition_bounds").get<std::vector<int>>();
    if (j.contains("success")) {
      const auto& s = j.at("success");
      if (s.is_number()) {
        int horizon = p.cardinality;
        if (!p.partition.empty()) horizon = std::accumulate(p.partition_bounds.begin(), p.partition_bounds.end(), 0);
        p.success.assign(static_cast<std::size_t>(std::max(horizon, 0)),
                         std::vector<double>(p.ground_size, s.get<double>()));
      } else {
        p.success = get_real_matrix(s);
      }
    }
    return p;
  });
}

RandomFamilyParams random_family_params_from_json(std::string_view text) {
  const json j = text.empty() ? json::object() : parse(text);
  return guarded([&] {
    RandomFamilyParams p;
    p.max_types = j.value("max_types", p.max_types);
    p.max_capacity = j.value("max_capacity", p.max_capacity);
    p.max_horizon = j.value("max_horizon", p.max_horizon);
    p.max_activities = j.value("max_activities", p.max_activities);
    const auto kind = j.value("kind", std::string("mixed"));
    if (kind == "coverage") {
      p.submodular_kind = SubmodularKind::kCoverage;
    } else if (kind == "budgeted") {
      p.submodular_kind = SubmodularKind::kBudgeted;
    } else if (kind == "mixed") {
      p.submodular_kind = SubmodularKind::kMixed;
    } else {
      throw ParseError("unknown random family kind '" + kind + "'");
    }
    if (p.max_types < 1 || p.max_capacity < 1 || p.max_horizon < 1 || p.max_activities < 1)
      throw ConfigError("random family bounds must be positive");
    if (p.max_capacity > kMaxCapacity) throw ConfigError("random family capacity exceeds 64");
    return p;
  });
}

SetCoverParams set_cover_params_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded([&] {
    SetCoverParams p;
    p.k = j.at("k").get<int>();
    const auto& ground = j.at("ground_set");
    std::map<std::string, int> position;
    if (ground.is_number()) {
      p.ground_size = ground.get<int>();
    } else {
      p.ground_size = static_cast<int>(ground.size());
      for (std::size_t e = 0; e < ground.size(); ++e) {
        const auto key = ground[e].is_string() ? ground[e].get<std::string>() : ground[e].dump();
        position[key] = static_cast<int>(e);
      }
    }
    for (const auto& set : j.at("sets")) {
      std::vector<int> members;
      for (const auto& e : set) {
        if (position.empty()) {
          members.push_back(e.get<int>());
          continue;
        }
        const auto key = e.is_string() ? e.get<std::string>() : e.dump();
        const auto it = position.find(key);
        if (it == position.end()) throw ParseError("set member '" + key + "' is not in the ground set");
        members.push_back(it->second);
      }
      p.sets.push_back(std::move(members));
    }
    return p;
  });
}

}  // namespace depletion

#include "depletion/policy.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "depletion/errors.hpp"
#include "depletion/model.hpp"
#include "depletion/random.hpp"

namespace depletion {

Policy myopic_policy(const Limits& limits) {
  return Policy("myopic", [limits](const State& state, const Instance& instance) {
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t a = 0; a < instance.num_activities(); ++a) {
      const double v = expected_one_step_reward(state, a, instance, limits);
      if (a == 0 || v > best_value) {
        best = a;
        best_value = v;
      }
    }
    return best;
  });
}

Policy approx_myopic_policy(double alpha, const Limits& limits) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw ConfigError("approx policy requires alpha >= 1");
  std::string name = "approx:" + std::to_string(alpha);
  char buffer[64];
  if (auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, alpha); ec == std::errc{})
    name = "approx:" + std::string(buffer, end);
  return Policy(std::move(name), [alpha, limits](const State& state, const Instance& instance) {
    const auto values = one_step_rewards(state, instance, limits);
    double top = values.front();
    for (double v : values) top = std::max(top, v);
    const double threshold = top / alpha;
    std::size_t pick = values.size();
    for (std::size_t a = 0; a < values.size(); ++a) {
      if (values[a] < threshold) continue;
      if (pick == values.size() || values[a] < values[pick]) pick = a;
    }
    return pick;
  });
}

Policy optimal_policy_from_table(std::shared_ptr<const ValueTable> table) {
  if (!table) throw ConfigError("optimal policy requires a value table");
  return Policy("optimal", [table](const State& state, const Instance& instance) {
    require_matching(*table, instance);
    const auto a = table->best_activity(state.items, state.epoch);
    if (a < 0) throw DomainError("no decision recorded at the terminal epoch");
    return static_cast<std::size_t>(a);
  });
}

Policy random_policy(std::uint64_t seed) {
  return Policy("random:" + std::to_string(seed), [seed](const State& state, const Instance& instance) {
    std::uint64_t h = mix64(seed ^ static_cast<std::uint64_t>(state.epoch));
    for (int x : state.items) h = mix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h % instance.num_activities());
  });
}

Policy fixed_policy(std::size_t activity) {
  return Policy("fixed:" + std::to_string(activity), [activity](const State&, const Instance& instance) {
    if (activity >= instance.num_activities())
      throw ConfigError("fixed policy activity " + std::to_string(activity) + " out of range");
    return activity;
  });
}

Policy round_robin_policy() {
  return Policy("round_robin", [](const State& state, const Instance& instance) {
    return static_cast<std::size_t>(state.epoch) % instance.num_activities();
  });
}

namespace {

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

}  // namespace

PolicySpec parse_policy_spec(std::string_view text) {
  PolicySpec spec;
  spec.text = std::string(text);
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;
  if (head == "myopic" && !has_arg) {
    spec.kind = PolicySpec::Kind::kMyopic;
  } else if (head == "optimal" && !has_arg) {
    spec.kind = PolicySpec::Kind::kOptimal;
  } else if ((head == "round_robin" || head == "round-robin") && !has_arg) {
    spec.kind = PolicySpec::Kind::kRoundRobin;
  } else if (head == "approx" && has_arg) {
    spec.kind = PolicySpec::Kind::kApprox;
    spec.alpha = parse_number<double>(arg, "approx alpha");
    if (!(spec.alpha >= 1.0)) throw ConfigError("approx alpha must be >= 1");
  } else if (head == "random" && has_arg) {
    spec.kind = PolicySpec::Kind::kRandom;
    spec.seed = parse_number<std::uint64_t>(arg, "random seed");
  } else if (head == "fixed" && has_arg) {
    spec.kind = PolicySpec::Kind::kFixed;
    spec.activity = parse_number<std::size_t>(arg, "fixed activity");
  } else {
    throw ConfigError("unknown policy '" + std::string(text) + "'");
  }
  return spec;
}

Policy make_policy(const PolicySpec& spec, const Instance& instance, const SolverOptions& options,
                   std::shared_ptr<const ValueTable> table) {
  switch (spec.kind) {
    case PolicySpec::Kind::kMyopic:
      return myopic_policy(options.limits);
    case PolicySpec::Kind::kOptimal:
      if (!table) table = std::make_shared<const ValueTable>(solve_clairvoyant(instance, options));
      return optimal_policy_from_table(std::move(table));
    case PolicySpec::Kind::kApprox:
      return approx_myopic_policy(spec.alpha, options.limits);
    case PolicySpec::Kind::kRandom:
      return random_policy(spec.seed);
    case PolicySpec::Kind::kFixed:
      if (spec.activity >= instance.num_activities())
        throw ConfigError("fixed policy activity " + std::to_string(spec.activity) + " out of range");
      return fixed_policy(spec.activity);
    case PolicySpec::Kind::kRoundRobin:
      return round_robin_policy();
  }
  throw ConfigError("unknown policy kind");
}

}  // namespace depletion

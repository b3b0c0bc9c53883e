#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "depletion/dp.hpp"
#include "depletion/instance.hpp"

namespace depletion {

/// Deterministic mapping (state, instance) -> activity index with a stable name.
/// Immutable after construction.
class Policy {
 public:
  using Rule = std::function<std::size_t(const State&, const Instance&)>;

  Policy(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  std::size_t operator()(const State& state, const Instance& instance) const { return rule_(state, instance); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Rule rule_;
};

/// argmax_A E[R(s, A)], lowest index on ties.
Policy myopic_policy(const Limits& limits = {});

/// Adversarial alpha-approximate oracle: among activities whose expected
/// one-step reward is at least max / alpha, picks the smallest (lowest index on
/// ties). Throws ConfigError unless alpha >= 1.
Policy approx_myopic_policy(double alpha, const Limits& limits = {});

/// Replays the table's recorded activities. Every call checks that the
/// instance's fingerprint matches the table.
Policy optimal_policy_from_table(std::shared_ptr<const ValueTable> table);

/// Pseudo-random choice derived from (seed, state) only.
Policy random_policy(std::uint64_t seed);
Policy fixed_policy(std::size_t activity);
Policy round_robin_policy();

/// Parsed form of the CLI policy syntax
/// myopic | optimal | approx:<alpha> | random:<seed> | fixed:<a> | round_robin.
struct PolicySpec {
  enum class Kind { kMyopic, kOptimal, kApprox, kRandom, kFixed, kRoundRobin };
  Kind kind = Kind::kMyopic;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::size_t activity = 0;
  std::string text;
};

PolicySpec parse_policy_spec(std::string_view text);

/// Builds the policy for `instance`. "optimal" solves the instance (or reuses
/// `table` when given); fixed:<a> is range-checked here.
Policy make_policy(const PolicySpec& spec, const Instance& instance, const SolverOptions& options = {},
                   std::shared_ptr<const ValueTable> table = nullptr);

}  // namespace depletion

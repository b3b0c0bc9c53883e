#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "depletion/instance.hpp"
#include "depletion/random.hpp"

namespace depletion {

/// Binomial coefficient C(n, k) for 0 <= n <= kMaxCapacity from a Pascal table.
double binomial_coefficient(int n, int k);

/// One structural problem found by validate_instance.
struct Violation {
  std::string field;
  std::vector<int> indices;
  std::string rule;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_instance(const Instance& instance, const Limits& limits = {});

/// Throws ConfigError carrying the report summary when validation fails.
void require_valid(const Instance& instance, const Limits& limits = {});

/// One realized per-type depletion vector together with its probability.
struct Outcome {
  ItemVector depleted;
  double probability = 0.0;
};

/// Callback form of outcome enumeration; `depleted` is only valid during the call.
using OutcomeVisitor = std::function<void(std::span<const int> depleted, double probability)>;

/// Visits every outcome of nonzero probability in lexicographic order of the
/// depletion vector. Throws EnumerationCapExceeded when prod_m (x_m + 1) > cap.
void for_each_outcome(std::span<const int> items, std::span<const double> probabilities,
                      const OutcomeVisitor& visit, std::size_t max_outcomes);

std::vector<Outcome> depletion_pmf(const State& state, std::size_t activity, const Instance& instance,
                                   const Limits& limits = {});

ItemVector sample_depletion(const State& state, std::size_t activity, const Instance& instance,
                            RandomStream& rng);

/// g(x, x_next, t). Zero at t = T. Throws DomainError if x_next is not below x.
double reward(std::span<const int> x, std::span<const int> x_next, int t, const Instance& instance);

/// E[g(x, x - alpha, t)] under the activity's depletion law. Linear rewards
/// use the closed form sum_m w_m x_m p_m.
double expected_one_step_reward(const State& state, std::size_t activity, const Instance& instance,
                                const Limits& limits = {});

/// Always enumerates outcomes (reference path for the closed forms).
double expected_one_step_reward_enumerated(const State& state, std::size_t activity, const Instance& instance,
                                           const Limits& limits = {});

/// Expected one-step reward of every activity, in activity order.
std::vector<double> one_step_rewards(const State& state, const Instance& instance, const Limits& limits = {});

/// t' = t + 1, x'_m = (x_m - alpha_m)^+.
State apply_depletion_with_step(const State& state, std::span<const int> alpha);

/// t' = t, x'_m = (x_m - alpha_m)^+.
State apply_depletion_no_step(const State& state, std::span<const int> alpha);

}  // namespace depletion

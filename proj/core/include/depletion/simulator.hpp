#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "depletion/instance.hpp"
#include "depletion/policy.hpp"

namespace depletion {

struct EpisodeStep {
  State state;
  std::size_t activity = 0;
  ItemVector depleted;
  double reward = 0.0;
};

/// One simulated trajectory. total_reward is the in-order sum of step rewards.
struct EpisodeTrace {
  std::vector<EpisodeStep> steps;
  State final_state;
  double total_reward = 0.0;
  std::uint64_t seed = 0;
};

struct EvalSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  std::size_t replications = 0;
  double standard_error = 0.0;
  std::uint64_t seed = 0;
  std::string policy;
};

EpisodeTrace simulate_episode(const Instance& instance, const Policy& policy, std::uint64_t seed);

/// Replication k runs with split_seed(master_seed, k). Totals are stored by
/// replication index and summed in index order, so the result does not depend
/// on `threads`.
EvalSummary monte_carlo_value(const Instance& instance, const Policy& policy, std::size_t replications,
                              std::uint64_t master_seed, unsigned threads = 1);

}  // namespace depletion

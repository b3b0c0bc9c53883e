#include "depletion/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "depletion/errors.hpp"
#include "depletion/model.hpp"
#include "depletion/random.hpp"

namespace depletion {

EpisodeTrace simulate_episode(const Instance& instance, const Policy& policy, std::uint64_t seed) {
  EpisodeTrace trace;
  trace.seed = seed;
  RandomStream rng(seed);
  State state = instance.initial_state();
  trace.steps.reserve(static_cast<std::size_t>(instance.horizon));
  while (state.epoch < instance.horizon) {
    const std::size_t activity = policy(state, instance);
    if (activity >= instance.num_activities()) throw DomainError("policy returned an out-of-range activity");
    auto depleted = sample_depletion(state, activity, instance, rng);
    State next = apply_depletion_with_step(state, depleted);
    const double earned = reward(state.items, next.items, state.epoch, instance);
    trace.total_reward += earned;
    trace.steps.push_back({std::move(state), activity, std::move(depleted), earned});
    state = std::move(next);
  }
  trace.final_state = std::move(state);
  return trace;
}

EvalSummary monte_carlo_value(const Instance& instance, const Policy& policy, std::size_t replications,
                              std::uint64_t master_seed, unsigned threads) {
  if (replications == 0) throw ConfigError("monte carlo evaluation requires at least one replication");
  std::vector<double> totals(replications, 0.0);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k)
      totals[k] = simulate_episode(instance, policy, split_seed(master_seed, k)).total_reward;
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(replications)));
  if (threads == 1) {
    run(0, replications);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    const std::size_t chunk = (replications + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          run(std::min(replications, w * chunk), std::min(replications, (w + 1) * chunk));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EvalSummary summary;
  summary.replications = replications;
  summary.seed = master_seed;
  summary.policy = policy.name();
  double sum = 0.0;
  for (double v : totals) sum += v;
  summary.mean = sum / static_cast<double>(replications);
  if (replications > 1) {
    double squares = 0.0;
    for (double v : totals) squares += (v - summary.mean) * (v - summary.mean);
    summary.stddev = std::sqrt(squares / static_cast<double>(replications - 1));
  }
  summary.standard_error = summary.stddev / std::sqrt(static_cast<double>(replications));
  return summary;
}

}  // namespace depletion

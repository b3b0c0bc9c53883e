#include "depletion/applications.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "depletion/errors.hpp"
#include "depletion/random.hpp"

namespace depletion {

namespace {

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_activity_cap(std::size_t count, const Limits& limits) {
  if (count > limits.max_activities)
    throw ActivityCapExceeded("application needs more than " + std::to_string(limits.max_activities) +
                              " activities");
}

Instance blank_instance(std::size_t num_types, int horizon, std::size_t num_activities) {
  Instance instance;
  instance.capacities.assign(num_types, 1);
  instance.initial_items.assign(num_types, 1);
  instance.horizon = horizon;
  instance.activities.resize(num_activities);
  instance.schedule = DepletionSchedule(horizon, num_activities, num_types);
  return instance;
}

LinearDecayingReward constant_weights(const std::vector<double>& w, int horizon) {
  LinearDecayingReward r;
  for (double v : w) r.weights.emplace_back(static_cast<std::size_t>(horizon), v);
  return r;
}

double probability_in_unit(double p, const std::string& what) {
  require(p >= 0.0 && p <= 1.0, what + " must lie in [0, 1]");
  return p;
}

}  // namespace

std::vector<std::vector<int>> bounded_subsets(int n, int k, std::size_t cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  for (int size = 1; size <= std::min(n, k); ++size) {
    std::function<void(int)> extend = [&](int from) {
      if (static_cast<int>(current.size()) == size) {
        if (out.size() >= cap) throw ActivityCapExceeded("subset enumeration exceeds cap");
        out.push_back(current);
        return;
      }
      for (int e = from; e < n; ++e) {
        current.push_back(e);
        extend(e + 1);
        current.pop_back();
      }
    };
    extend(0);
  }
  return out;
}

Instance build_queueing_instance(const QueueingParams& params, std::uint64_t seed, const Limits& limits) {
  const int I = params.num_buffers;
  const int J = params.num_servers;
  const int T = params.horizon;
  require(I >= 1 && J >= 1 && T >= 1, "queueing: buffers, servers and horizon must be positive");
  require(params.mean_service.size() == static_cast<std::size_t>(I), "queueing: mean_service needs one row per buffer");
  require(params.rewards.size() == static_cast<std::size_t>(I), "queueing: rewards need one row per buffer");
  for (int i = 0; i < I; ++i) {
    require(params.mean_service[i].size() == static_cast<std::size_t>(J),
            "queueing: mean_service needs one entry per server");
    for (double mu : params.mean_service[i]) require(mu >= 1.0, "queueing: mean service times must be >= 1");
    require(params.rewards[i].size() >= static_cast<std::size_t>(T), "queueing: rewards need an entry per delay");
  }

  std::vector<std::vector<int>> arrived(I, std::vector<int>(T, 0));
  if (!params.arrival_traces.empty()) {
    require(params.arrival_traces.size() == static_cast<std::size_t>(I), "queueing: one arrival trace per buffer");
    for (int i = 0; i < I; ++i) {
      require(params.arrival_traces[i].size() == static_cast<std::size_t>(T), "queueing: arrival trace length != T");
      for (int t = 0; t < T; ++t) arrived[i][t] = params.arrival_traces[i][t] != 0 ? 1 : 0;
    }
  } else {
    require(params.arrival_rates.size() == static_cast<std::size_t>(I), "queueing: one arrival rate per buffer");
    RandomStream rng(seed);
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < I; ++i)
        arrived[i][t] = rng.bernoulli(probability_in_unit(params.arrival_rates[i], "queueing: arrival rate")) ? 1 : 0;
  }

  const int M = I * T;
  // Non-empty matchings: server j takes nothing or a distinct job type.
  std::vector<std::vector<int>> matchings;  // [activity][server] -> type or -1
  std::vector<int> assignment(J, -1);
  std::vector<char> used(M, 0);
  std::function<void(int, bool)> assign = [&](int j, bool any) {
    if (j == J) {
      if (!any) return;
      require_activity_cap(matchings.size() + 1, limits);
      matchings.push_back(assignment);
      return;
    }
    assignment[j] = -1;
    assign(j + 1, any);
    for (int m = 0; m < M; ++m) {
      if (used[m]) continue;
      used[m] = 1;
      assignment[j] = m;
      assign(j + 1, true);
      used[m] = 0;
    }
    assignment[j] = -1;
  };
  assign(0, false);

  Instance instance = blank_instance(M, T, matchings.size());
  instance.arrivals = std::vector<int>(M);
  LinearDecayingReward reward;
  reward.weights.resize(M);
  for (int i = 0; i < I; ++i) {
    for (int tau = 0; tau < T; ++tau) {
      const int m = i * T + tau;
      (*instance.arrivals)[m] = tau;
      instance.initial_items[m] = arrived[i][tau];
      for (int t = 0; t < T; ++t) reward.weights[m].push_back(params.rewards[i][std::max(t - tau, 0)]);
    }
  }
  for (std::size_t a = 0; a < matchings.size(); ++a) {
    std::string label;
    for (int j = 0; j < J; ++j) {
      const int m = matchings[a][j];
      if (m < 0) continue;
      if (!label.empty()) label += ' ';
      label += "s" + std::to_string(j) + "->b" + std::to_string(m / T) + "@" + std::to_string(m % T);
      const int i = m / T;
      const int tau = m % T;
      if (!arrived[i][tau]) continue;
      for (int t = tau; t < T; ++t) instance.schedule.set(t, a, m, 1.0 / params.mean_service[i][j]);
    }
    instance.activities[a] = label;
  }
  instance.reward = std::move(reward);
  instance.metadata = {{"app", "queueing"}, {"seed", std::to_string(seed)}};
  return instance;
}

std::vector<BroadcastRequest> sample_broadcast_requests(const BroadcastParams& params, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<std::vector<char>> requested(params.num_users, std::vector<char>(params.num_pages, 0));
  std::vector<BroadcastRequest> requests;
  for (int slot = 0; slot < params.horizon; ++slot) {
    const auto count = rng.uniform_int(0, params.requests_per_slot);
    for (std::int64_t n = 0; n < count; ++n) {
      const int user = static_cast<int>(rng.uniform_int(0, params.num_users - 1));
      std::vector<int> open;
      for (int page = 0; page < params.num_pages; ++page)
        if (!requested[user][page]) open.push_back(page);
      if (open.empty()) continue;
      const int page = open[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))];
      requested[user][page] = 1;
      const int deadline = static_cast<int>(rng.uniform_int(slot + 1, params.horizon));
      requests.push_back({user, page, slot, deadline});
    }
  }
  return requests;
}

Instance build_broadcast_instance(const BroadcastParams& params, std::uint64_t seed, const Limits& limits) {
  const int U = params.num_users;
  const int P = params.num_pages;
  const int T = params.horizon;
  require(U >= 1 && P >= 1 && T >= 1 && params.max_users_per_slot >= 1,
          "broadcast: users, pages, horizon and k must be positive");
  require(params.rewards.size() == static_cast<std::size_t>(P), "broadcast: rewards need one row per page");
  for (const auto& row : params.rewards) {
    require(row.size() == static_cast<std::size_t>(U), "broadcast: rewards need one entry per user");
    for (double r : row) require(r >= 0.0, "broadcast: rewards must be non-negative");
  }
  auto channel = [&](int t, int u) {
    if (!params.channel_sequences.empty()) return params.channel_sequences[t][u];
    return params.channel_constants[u];
  };
  if (params.channel_sequences.empty()) {
    require(params.channel_constants.size() == static_cast<std::size_t>(U), "broadcast: one channel constant per user");
  } else {
    require(params.channel_sequences.size() == static_cast<std::size_t>(T), "broadcast: channel sequence length != T");
    for (const auto& row : params.channel_sequences)
      require(row.size() == static_cast<std::size_t>(U), "broadcast: channel row needs one entry per user");
  }
  for (int t = 0; t < T; ++t)
    for (int u = 0; u < U; ++u) probability_in_unit(channel(t, u), "broadcast: channel success probability");

  auto requests = params.requests;
  if (requests.empty() && params.requests_per_slot > 0) requests = sample_broadcast_requests(params, seed);
  require(!requests.empty(), "broadcast: no requests");
  for (const auto& r : requests) {
    require(r.user >= 0 && r.user < U && r.page >= 0 && r.page < P, "broadcast: request user/page out of range");
    require(r.arrival >= 0 && r.arrival <= r.deadline && r.deadline <= T, "broadcast: need 0 <= arrival <= deadline <= T");
  }

  const auto subsets = bounded_subsets(U, params.max_users_per_slot, limits.max_activities);
  require_activity_cap(subsets.size() * static_cast<std::size_t>(P), limits);
  const std::size_t M = requests.size();
  Instance instance = blank_instance(M, T, subsets.size() * static_cast<std::size_t>(P));
  instance.arrivals = std::vector<int>(M);
  instance.deadlines = std::vector<int>(M);
  std::vector<double> w(M);
  for (std::size_t m = 0; m < M; ++m) {
    (*instance.arrivals)[m] = requests[m].arrival;
    (*instance.deadlines)[m] = requests[m].deadline;
    w[m] = params.rewards[requests[m].page][requests[m].user];
  }
  std::size_t a = 0;
  for (int page = 0; page < P; ++page) {
    for (const auto& users : subsets) {
      instance.activities[a] = "page" + std::to_string(page) + ":users{" + join(users) + "}";
      for (std::size_t m = 0; m < M; ++m) {
        const auto& r = requests[m];
        if (r.page != page || std::find(users.begin(), users.end(), r.user) == users.end()) continue;
        for (int t = r.arrival; t < r.deadline; ++t) instance.schedule.set(t, a, m, channel(t, r.user));
      }
      ++a;
    }
  }
  instance.reward = constant_weights(w, T);
  instance.metadata = {{"app", "broadcast"}, {"seed", std::to_string(seed)}};
  return instance;
}

Instance build_product_line_instance(const ProductLineParams& params, const Limits& limits) {
  const int I = static_cast<int>(params.segment_sizes.size());
  const int T = params.horizon;
  require(I >= 1 && T >= 1 && params.num_products >= 1 && params.max_assortment >= 1,
          "productline: segments, horizon, products and k must be positive");
  require(params.prices.size() == static_cast<std::size_t>(I), "productline: one price per segment");
  for (double p : params.prices) require(p >= 0.0, "productline: prices must be non-negative");
  for (int s : params.segment_sizes) require(s >= 0 && s <= kMaxCapacity, "productline: segment size outside [0, 64]");

  const auto assortments = bounded_subsets(params.num_products, params.max_assortment, limits.max_activities);
  require_activity_cap(assortments.size(), limits);
  Instance instance = blank_instance(static_cast<std::size_t>(I), T, assortments.size());
  for (int i = 0; i < I; ++i) {
    instance.capacities[i] = std::max(params.segment_sizes[i], 1);
    instance.initial_items[i] = params.segment_sizes[i];
  }
  for (std::size_t a = 0; a < assortments.size(); ++a) instance.activities[a] = "{" + join(assortments[a]) + "}";
  for (const auto& d : params.demand) {
    auto products = d.products;
    std::sort(products.begin(), products.end());
    const auto it = std::find(assortments.begin(), assortments.end(), products);
    require(it != assortments.end(), "productline: demand listed for an infeasible assortment {" + join(products) + "}");
    const auto a = static_cast<std::size_t>(it - assortments.begin());
    require(d.purchase.size() == static_cast<std::size_t>(T), "productline: purchase table needs one row per epoch");
    for (int t = 0; t < T; ++t) {
      require(d.purchase[t].size() == static_cast<std::size_t>(I), "productline: purchase row needs one entry per segment");
      for (int i = 0; i < I; ++i)
        instance.schedule.set(t, a, i, probability_in_unit(d.purchase[t][i], "productline: purchase probability"));
    }
  }
  instance.reward = constant_weights(params.prices, T);
  instance.metadata = {{"app", "productline"}};
  return instance;
}

Instance build_adwords_instance(const AdwordsParams& params, const Limits& limits) {
  const int N = params.num_advertisers;
  const int K = params.num_keywords;
  const int T = static_cast<int>(params.keyword_sequence.size());
  require(N >= 1 && K >= 1 && T >= 1, "adwords: advertisers, keywords and horizon must be positive");
  require(params.max_ads_per_slot >= 1 && params.max_ads_per_slot <= N, "adwords: need 1 <= C <= N");
  require(params.budgets.size() == static_cast<std::size_t>(N), "adwords: one budget per advertiser");
  require(params.valuations.size() == static_cast<std::size_t>(N), "adwords: valuations need one row per advertiser");
  for (const auto& row : params.valuations) {
    require(row.size() == static_cast<std::size_t>(K), "adwords: valuations need one entry per keyword");
    for (double v : row) require(v >= 0.0, "adwords: valuations must be non-negative");
  }
  for (double b : params.budgets) require(b >= 0.0, "adwords: budgets must be non-negative");
  for (int k : params.keyword_sequence) require(k >= 0 && k < K, "adwords: keyword index out of range");
  require(params.click_probabilities.size() == static_cast<std::size_t>(T), "adwords: click probabilities need one row per slot");
  for (const auto& row : params.click_probabilities)
    require(row.size() == static_cast<std::size_t>(N), "adwords: click row needs one entry per advertiser");

  const auto sets = bounded_subsets(N, params.max_ads_per_slot, limits.max_activities);
  require_activity_cap(sets.size(), limits);
  const std::size_t M = static_cast<std::size_t>(N) * static_cast<std::size_t>(T);
  Instance instance = blank_instance(M, T, sets.size());
  BudgetedLinear w;
  w.budgets = params.budgets;
  instance.arrivals = std::vector<int>(M);
  instance.deadlines = std::vector<int>(M);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      const std::size_t m = static_cast<std::size_t>(t) * N + i;
      w.groups.push_back(i);
      w.values.push_back(params.valuations[i][params.keyword_sequence[t]]);
      (*instance.arrivals)[m] = t;
      (*instance.deadlines)[m] = t + 1;
    }
  }
  for (std::size_t a = 0; a < sets.size(); ++a) {
    instance.activities[a] = "ads{" + join(sets[a]) + "}";
    for (int t = 0; t < T; ++t) {
      for (int i : sets[a]) {
        const std::size_t m = static_cast<std::size_t>(t) * N + i;
        instance.schedule.set(t, a, m, probability_in_unit(params.click_probabilities[t][i], "adwords: click probability"));
      }
    }
  }
  instance.reward = SubmodularReward{std::move(w)};
  instance.metadata = {{"app", "adwords"}};
  return instance;
}

namespace {

Instance matroid_skeleton(const MatroidParams& params, int horizon, const Limits& limits) {
  const std::size_t E = params.ground_size;
  require(E >= 1, "matroid: ground set must be non-empty");
  require(horizon >= 1, "matroid: horizon (k or sum of k_i) must be positive");
  require_activity_cap(E, limits);
  if (!params.success.empty()) {
    require(params.success.size() == static_cast<std::size_t>(horizon), "matroid: success table needs one row per attempt");
    for (const auto& row : params.success) {
      require(row.size() == E, "matroid: success row needs one entry per element");
      for (double p : row) probability_in_unit(p, "matroid: success probability");
    }
  }
  Instance instance = blank_instance(E, horizon, E);
  for (std::size_t e = 0; e < E; ++e) instance.activities[e] = "select" + std::to_string(e);
  instance.reward = SubmodularReward{params.value};
  return instance;
}

double success_at(const MatroidParams& params, int t, std::size_t e) {
  return params.success.empty() ? 1.0 : params.success[t][e];
}

}  // namespace

Instance build_cardinality_matroid_instance(const MatroidParams& params, const Limits& limits) {
  require(params.cardinality >= 1, "matroid-card: cardinality must be positive");
  Instance instance = matroid_skeleton(params, params.cardinality, limits);
  for (int t = 0; t < instance.horizon; ++t)
    for (std::size_t e = 0; e < params.ground_size; ++e) instance.schedule.set(t, e, e, success_at(params, t, e));
  instance.metadata = {{"app", "matroid-card"}};
  return instance;
}

Instance build_partition_matroid_instance(const MatroidParams& params, const Limits& limits) {
  if (params.partition.size() != params.partition_bounds.size())
    throw InvalidPartition("one bound k_i per block required");
  std::vector<int> block_of(params.ground_size, -1);
  for (std::size_t j = 0; j < params.partition.size(); ++j) {
    if (params.partition_bounds[j] < 0) throw InvalidPartition("block bounds must be non-negative");
    for (int e : params.partition[j]) {
      if (e < 0 || static_cast<std::size_t>(e) >= params.ground_size)
        throw InvalidPartition("block element " + std::to_string(e) + " outside the ground set");
      if (block_of[e] >= 0) throw InvalidPartition("element " + std::to_string(e) + " appears in two blocks");
      block_of[e] = static_cast<int>(j);
    }
  }
  for (std::size_t e = 0; e < params.ground_size; ++e)
    if (block_of[e] < 0) throw InvalidPartition("element " + std::to_string(e) + " is in no block");

  const int horizon = std::accumulate(params.partition_bounds.begin(), params.partition_bounds.end(), 0);
  Instance instance = matroid_skeleton(params, horizon, limits);
  int t = 0;
  for (std::size_t j = 0; j < params.partition.size(); ++j) {
    for (int step = 0; step < params.partition_bounds[j]; ++step, ++t)
      for (int e : params.partition[j]) instance.schedule.set(t, e, e, success_at(params, t, e));
  }
  instance.metadata = {{"app", "matroid-part"}};
  return instance;
}

Instance build_set_cover_instance(int ground_size, const std::vector<std::vector<int>>& cover_sets, int k) {
  require(ground_size >= 1, "setcover: ground set must be non-empty");
  require(!cover_sets.empty(), "setcover: need at least one cover set");
  require(k >= 1, "setcover: k must be positive");
  Instance instance = blank_instance(static_cast<std::size_t>(ground_size), k, cover_sets.size());
  for (std::size_t b = 0; b < cover_sets.size(); ++b) {
    instance.activities[b] = "{" + join(cover_sets[b]) + "}";
    for (int e : cover_sets[b]) {
      require(e >= 0 && e < ground_size, "setcover: element out of range");
      for (int t = 0; t < k; ++t) instance.schedule.set(t, b, static_cast<std::size_t>(e), 1.0);
    }
  }
  instance.reward = constant_weights(std::vector<double>(static_cast<std::size_t>(ground_size), 1.0), k);
  instance.metadata = {{"app", "setcover"}};
  return instance;
}

Instance build_worst_case_instance(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "worstcase: epsilon must lie in (0, 1)");
  Instance instance = blank_instance(2, 2, 2);
  instance.activities = {"1", "2"};
  instance.schedule.set(0, 0, 0, 1.0);
  instance.schedule.set(1, 0, 0, 1.0);
  instance.schedule.set(0, 1, 1, 1.0);
  instance.reward = constant_weights({1.0, 1.0 - epsilon}, 2);
  instance.metadata = {{"app", "worstcase"}, {"epsilon", std::to_string(epsilon)}};
  return instance;
}

namespace {

double draw_probability(RandomStream& rng) {
  const double u = rng.uniform();
  if (u < 0.2) return 0.0;
  if (u < 0.3) return 1.0;
  return rng.uniform();
}

Instance random_skeleton(RandomStream& rng, const RandomFamilyParams& params) {
  const auto M = static_cast<std::size_t>(rng.uniform_int(1, params.max_types));
  const int T = static_cast<int>(rng.uniform_int(1, params.max_horizon));
  const auto A = static_cast<std::size_t>(rng.uniform_int(1, params.max_activities));
  Instance instance = blank_instance(M, T, A);
  for (std::size_t m = 0; m < M; ++m) {
    instance.capacities[m] = static_cast<int>(rng.uniform_int(1, params.max_capacity));
    instance.initial_items[m] = instance.capacities[m];
  }
  for (std::size_t a = 0; a < A; ++a) instance.activities[a] = "a" + std::to_string(a);
  for (int t = 0; t < T; ++t)
    for (std::size_t a = 0; a < A; ++a)
      for (std::size_t m = 0; m < M; ++m) instance.schedule.set(t, a, m, draw_probability(rng));
  return instance;
}

}  // namespace

Instance random_submodular_instance(std::uint64_t seed, const RandomFamilyParams& params) {
  SubmodularKind kind = params.submodular_kind;
  RandomStream rng(mix64(seed ^ 0x5ab0d));
  Instance instance = random_skeleton(rng, params);
  const auto M = instance.num_types();
  if (kind == SubmodularKind::kMixed) kind = rng.bernoulli(0.5) ? SubmodularKind::kCoverage : SubmodularKind::kBudgeted;
  if (kind == SubmodularKind::kCoverage) {
    WeightedCoverage w;
    const auto elements = static_cast<std::size_t>(rng.uniform_int(1, 5));
    for (std::size_t e = 0; e < elements; ++e) w.element_weights.push_back(rng.uniform(0.1, 2.0));
    w.covers.resize(M);
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t e = 0; e < elements; ++e)
        if (rng.bernoulli(0.5)) w.covers[m].push_back(static_cast<int>(e));
    instance.reward = SubmodularReward{std::move(w)};
    instance.metadata = {{"app", "random-submodular"}, {"reward", "coverage"}, {"seed", std::to_string(seed)}};
  } else {
    BudgetedLinear w;
    const auto groups = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(M)));
    for (std::size_t i = 0; i < groups; ++i)
      w.budgets.push_back(rng.bernoulli(0.2) ? std::numeric_limits<double>::infinity() : rng.uniform(0.5, 3.0));
    for (std::size_t m = 0; m < M; ++m) {
      w.groups.push_back(static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(groups) - 1)));
      w.values.push_back(rng.uniform(0.0, 2.0));
    }
    instance.reward = SubmodularReward{std::move(w)};
    instance.metadata = {{"app", "random-submodular"}, {"reward", "budgeted"}, {"seed", std::to_string(seed)}};
  }
  return instance;
}

Instance random_linear_decaying_instance(std::uint64_t seed, const RandomFamilyParams& params) {
  RandomStream rng(mix64(seed ^ 0x11dec));
  Instance instance = random_skeleton(rng, params);
  LinearDecayingReward w;
  w.weights.resize(instance.num_types());
  for (auto& row : w.weights) {
    double current = rng.uniform(0.0, 2.0);
    for (int t = 0; t < instance.horizon; ++t) {
      row.push_back(current);
      current *= rng.uniform();
    }
  }
  instance.reward = std::move(w);
  instance.metadata = {{"app", "random-linear"}, {"seed", std::to_string(seed)}};
  return instance;
}

BroadcastParams random_static_broadcast_params(std::uint64_t seed, int max_users, int max_pages, int max_horizon,
                                               int max_k) {
  RandomStream rng(mix64(seed ^ 0xb40adca57));
  BroadcastParams p;
  p.num_users = static_cast<int>(rng.uniform_int(1, max_users));
  p.num_pages = static_cast<int>(rng.uniform_int(1, max_pages));
  p.horizon = static_cast<int>(rng.uniform_int(1, max_horizon));
  p.max_users_per_slot = static_cast<int>(rng.uniform_int(1, max_k));
  p.rewards.assign(p.num_pages, std::vector<double>(p.num_users));
  for (auto& row : p.rewards)
    for (double& r : row) r = rng.uniform(0.1, 2.0);
  for (int u = 0; u < p.num_users; ++u) p.channel_constants.push_back(rng.uniform(0.05, 1.0));
  for (int u = 0; u < p.num_users; ++u)
    for (int page = 0; page < p.num_pages; ++page)
      if (rng.bernoulli(0.6)) p.requests.push_back({u, page, 0, p.horizon});
  if (p.requests.empty()) p.requests.push_back({0, 0, 0, p.horizon});
  return p;
}

}  // namespace depletion

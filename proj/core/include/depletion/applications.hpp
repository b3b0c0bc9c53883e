#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "depletion/instance.hpp"

namespace depletion {

// Builders turning application models into clairvoyant instances. Scenario
// randomness (arrivals, request streams) is resolved from the seed at build
// time, so each seed yields one realized instance.

/// Discrete-time multi-buffer, multi-server queue with pre-emption.
struct QueueingParams {
  int num_buffers = 1;
  int num_servers = 1;
  int horizon = 1;
  /// Bernoulli arrival rate per buffer; ignored when arrival_traces is set.
  std::vector<double> arrival_rates;
  /// Explicit 0/1 arrivals, [buffer][t].
  std::vector<std::vector<int>> arrival_traces;
  /// Mean geometric service time [buffer][server], in [1, inf].
  std::vector<std::vector<double>> mean_service;
  /// Completion reward [buffer][delay], non-increasing, at least `horizon` entries.
  std::vector<std::vector<double>> rewards;
};

/// One item type per (buffer, slot), type index buffer * T + slot. Activities
/// are every non-empty server-to-job matching.
Instance build_queueing_instance(const QueueingParams& params, std::uint64_t seed, const Limits& limits = {});

struct BroadcastRequest {
  int user = 0;
  int page = 0;
  int arrival = 0;
  int deadline = 0;  // exclusive: deliverable while arrival <= t < deadline
};

struct BroadcastParams {
  int num_users = 1;
  int num_pages = 1;
  int horizon = 1;
  int max_users_per_slot = 1;  // k
  /// Explicit requests. When empty and requests_per_slot > 0, a stream is sampled.
  std::vector<BroadcastRequest> requests;
  int requests_per_slot = 0;
  /// r[page][user].
  std::vector<std::vector<double>> rewards;
  /// Static channels C_u; used when channel_sequences is empty.
  std::vector<double> channel_constants;
  /// P_t^u as [t][user].
  std::vector<std::vector<double>> channel_sequences;
};

/// Sampled request stream: each slot draws 0..requests_per_slot requests with a
/// uniform user, a uniform page the user has not yet requested and a uniform
/// deadline in [slot + 1, T].
std::vector<BroadcastRequest> sample_broadcast_requests(const BroadcastParams& params, std::uint64_t seed);

/// One item type per request; activities are (page, non-empty user subset of size <= k).
Instance build_broadcast_instance(const BroadcastParams& params, std::uint64_t seed, const Limits& limits = {});

struct AssortmentDemand {
  std::vector<int> products;
  /// Purchase probability [t][segment] when exactly this assortment is offered.
  std::vector<std::vector<double>> purchase;
};

struct ProductLineParams {
  int num_products = 1;
  int max_assortment = 1;  // k
  int horizon = 1;
  std::vector<int> segment_sizes;
  std::vector<double> prices;
  /// Feasible assortments not listed have zero purchase probability.
  std::vector<AssortmentDemand> demand;
};

/// Types are segments; activities are non-empty assortments of size <= k
/// ordered by size, then lexicographically.
Instance build_product_line_instance(const ProductLineParams& params, const Limits& limits = {});

struct AdwordsParams {
  int num_advertisers = 1;
  int num_keywords = 1;
  std::vector<double> budgets;  // +inf allowed
  std::vector<std::vector<double>> valuations;  // [advertiser][keyword]
  std::vector<int> keyword_sequence;  // k_t; its length is the horizon
  int max_ads_per_slot = 1;  // C
  std::vector<std::vector<double>> click_probabilities;  // [t][advertiser]
};

/// Types are (advertiser, k_t, t) with index t * N + i; activities are
/// non-empty advertiser sets of size <= C, each depleting the advertiser's
/// type for the current slot only.
Instance build_adwords_instance(const AdwordsParams& params, const Limits& limits = {});

struct MatroidParams {
  std::size_t ground_size = 0;
  SetFunction value;
  /// Cardinality bound k (cardinality reduction).
  int cardinality = 0;
  /// Disjoint blocks E_i covering the ground set and their bounds k_i (partition reduction).
  std::vector<std::vector<int>> partition;
  std::vector<int> partition_bounds;
  /// Per-attempt success probability [t][element]; empty means deterministic.
  std::vector<std::vector<double>> success;
};

Instance build_cardinality_matroid_instance(const MatroidParams& params, const Limits& limits = {});

/// Time is cut into consecutive blocks of lengths k_0, k_1, ...; during block j
/// only elements of E_j can be selected. Throws InvalidPartition.
Instance build_partition_matroid_instance(const MatroidParams& params, const Limits& limits = {});

/// One unit-weight type per ground element, one activity per cover set,
/// horizon k: J*(xbar, 0) = |ground| iff a cover of size <= k exists.
Instance build_set_cover_instance(int ground_size, const std::vector<std::vector<int>>& cover_sets, int k);

/// Two types, two activities, T = 2: activity "1" can deplete type 1 in both
/// epochs, activity "2" depletes type 2 only at t = 0; weights (1, 1 - epsilon).
Instance build_worst_case_instance(double epsilon);

enum class SubmodularKind { kCoverage, kBudgeted, kMixed };

/// Size ranges for the randomized verification families. Probabilities are 0
/// with chance 0.2, 1 with chance 0.1 and uniform on [0, 1] otherwise.
struct RandomFamilyParams {
  int max_types = 3;
  int max_capacity = 2;
  int max_horizon = 4;
  int max_activities = 4;
  SubmodularKind submodular_kind = SubmodularKind::kMixed;
};

Instance random_submodular_instance(std::uint64_t seed, const RandomFamilyParams& params = {});

Instance random_linear_decaying_instance(std::uint64_t seed, const RandomFamilyParams& params = {});

/// Broadcast parameters with static channels, every request at t = 0 and
/// deadline T.
BroadcastParams random_static_broadcast_params(std::uint64_t seed, int max_users = 3, int max_pages = 3,
                                               int max_horizon = 4, int max_k = 2);

/// Non-empty subsets of {0..n-1} with at most k elements, by size then lexicographically.
std::vector<std::vector<int>> bounded_subsets(int n, int k, std::size_t cap);

}  // namespace depletion

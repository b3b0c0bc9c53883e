#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace depletion {

/// Per-type item counts. Used for states, capacities, outcomes and the
/// cumulative-depletion argument of set functions.
using ItemVector = std::vector<int>;

/// Largest supported per-type capacity (size of the Pascal triangle).
inline constexpr int kMaxCapacity = 64;

/// Resource caps shared by every enumerating operation.
struct Limits {
  std::size_t max_outcomes = 1'000'000;
  std::size_t max_states = 10'000'000;
  std::size_t max_activities = 100'000;
  std::size_t max_pairs = 100'000'000;
};

/// Reduced clairvoyant state: remaining items and the current epoch.
struct State {
  ItemVector items;
  int epoch = 0;

  friend bool operator==(const State&, const State&) = default;
};

/// Mixed-radix addressing of item vectors bounded by a capacity vector:
/// index(x) = sum_m x_m * prod_{m' < m} (cap_{m'} + 1).
class StateIndexer {
 public:
  StateIndexer() = default;
  explicit StateIndexer(ItemVector capacities);

  std::size_t size() const { return size_; }
  std::size_t num_types() const { return capacities_.size(); }
  const ItemVector& capacities() const { return capacities_; }
  std::size_t stride(std::size_t m) const { return strides_[m]; }

  std::size_t index(std::span<const int> x) const;
  void decode(std::size_t index, ItemVector& x) const;
  ItemVector decode(std::size_t index) const;

  /// Number of states, or nullopt when the product overflows `limit`.
  static std::optional<std::size_t> checked_size(std::span<const int> capacities, std::size_t limit);

 private:
  ItemVector capacities_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Dense table p[t][activity][type] of realized success probabilities.
class DepletionSchedule {
 public:
  DepletionSchedule() = default;
  DepletionSchedule(int horizon, std::size_t num_activities, std::size_t num_types);

  int horizon() const { return horizon_; }
  std::size_t num_activities() const { return num_activities_; }
  std::size_t num_types() const { return num_types_; }

  double at(int t, std::size_t activity, std::size_t type) const {
    return p_[offset(t, activity) + type];
  }
  void set(int t, std::size_t activity, std::size_t type, double p) { p_[offset(t, activity) + type] = p; }

  /// Probabilities of every type under one (epoch, activity).
  std::span<const double> row(int t, std::size_t activity) const {
    return {p_.data() + offset(t, activity), num_types_};
  }
  std::span<double> row(int t, std::size_t activity) {
    return {p_.data() + offset(t, activity), num_types_};
  }

  const std::vector<double>& raw() const { return p_; }

 private:
  std::size_t offset(int t, std::size_t activity) const {
    return (static_cast<std::size_t>(t) * num_activities_ + activity) * num_types_;
  }

  int horizon_ = 0;
  std::size_t num_activities_ = 0;
  std::size_t num_types_ = 0;
  std::vector<double> p_;
};

// Set functions w : Z_+^M -> R evaluated on cumulative depletions y = xbar - x.

/// Element e counts once some type m with y_m >= 1 covers it.
struct WeightedCoverage {
  std::vector<double> element_weights;
  std::vector<std::vector<int>> covers;  // per type
};

/// w(y) = sum_i min(B_i, sum_{m in group i} v_m y_m). Infinite budgets allowed.
struct BudgetedLinear {
  std::vector<int> groups;  // per type
  std::vector<double> values;  // per type
  std::vector<double> budgets;  // per group
};

struct PlainLinear {
  std::vector<double> values;  // per type
};

/// Explicit values over the box [0, bound], mixed-radix ordered.
struct TabulatedSetFunction {
  ItemVector bound;
  std::vector<double> values;
};

/// Arbitrary evaluator. Not serializable; `name` enters the fingerprint.
struct CustomSetFunction {
  std::string name;
  std::function<double(std::span<const int>)> evaluate;
};

using SetFunction =
    std::variant<WeightedCoverage, BudgetedLinear, PlainLinear, TabulatedSetFunction, CustomSetFunction>;

double evaluate(const SetFunction& w, std::span<const int> y);

/// g(x, x', t) = w(xbar - x') - w(xbar - x) for t < T.
struct SubmodularReward {
  SetFunction w;
};

/// g(x, x', t) = sum_m weights[m][t] * (x_m - x'_m); weights has T columns.
struct LinearDecayingReward {
  std::vector<std::vector<double>> weights;
};

/// Explicit g(x, x', t) over x' <= x <= xbar and t in [0, T].
class TabulatedReward {
 public:
  TabulatedReward() = default;
  TabulatedReward(ItemVector capacities, int horizon);

  double at(std::span<const int> x, std::span<const int> x_next, int t) const;
  void set(std::span<const int> x, std::span<const int> x_next, int t, double g);

  const StateIndexer& indexer() const { return indexer_; }
  int horizon() const { return horizon_; }
  double at_index(std::size_t x, std::size_t x_next, int t) const { return g_[slot(x, x_next, t)]; }

 private:
  std::size_t slot(std::size_t x, std::size_t x_next, int t) const {
    return (static_cast<std::size_t>(t) * indexer_.size() + x) * indexer_.size() + x_next;
  }

  StateIndexer indexer_;
  int horizon_ = 0;
  std::vector<double> g_;
};

using RewardSpec = std::variant<TabulatedReward, SubmodularReward, LinearDecayingReward>;

/// Short tag of the reward family: "general_tabulated", "submodular", "linear_decaying".
std::string reward_family(const RewardSpec& reward);

/// Complete description of a stochastic depletion problem with a realized schedule.
struct Instance {
  ItemVector capacities;
  ItemVector initial_items;
  int horizon = 1;
  std::vector<std::string> activities;
  DepletionSchedule schedule;
  RewardSpec reward;
  std::optional<std::vector<int>> arrivals;
  std::optional<std::vector<int>> deadlines;
  std::map<std::string, std::string> metadata;

  std::size_t num_types() const { return capacities.size(); }
  std::size_t num_activities() const { return activities.size(); }
  State initial_state() const { return {initial_items, 0}; }
};

/// 64-bit FNV-1a digest of everything that determines values (metadata and
/// activity labels excluded).
std::uint64_t fingerprint(const Instance& instance);

}  // namespace depletion

#include "depletion/instance.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <type_traits>

#include "depletion/errors.hpp"

namespace depletion {

StateIndexer::StateIndexer(ItemVector capacities) : capacities_(std::move(capacities)) {
  strides_.resize(capacities_.size());
  std::size_t stride = 1;
  for (std::size_t m = 0; m < capacities_.size(); ++m) {
    if (capacities_[m] < 0) throw DomainError("negative capacity");
    strides_[m] = stride;
    stride *= static_cast<std::size_t>(capacities_[m]) + 1;
  }
  size_ = stride;
}

std::size_t StateIndexer::index(std::span<const int> x) const {
  if (x.size() != capacities_.size()) throw DomainError("item vector has wrong length");
  std::size_t idx = 0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (x[m] < 0 || x[m] > capacities_[m]) throw DomainError("item count outside [0, capacity]");
    idx += static_cast<std::size_t>(x[m]) * strides_[m];
  }
  return idx;
}

void StateIndexer::decode(std::size_t index, ItemVector& x) const {
  x.resize(capacities_.size());
  for (std::size_t m = 0; m < capacities_.size(); ++m) {
    const auto radix = static_cast<std::size_t>(capacities_[m]) + 1;
    x[m] = static_cast<int>(index % radix);
    index /= radix;
  }
}

ItemVector StateIndexer::decode(std::size_t index) const {
  ItemVector x;
  decode(index, x);
  return x;
}

std::optional<std::size_t> StateIndexer::checked_size(std::span<const int> capacities, std::size_t limit) {
  std::size_t size = 1;
  for (int c : capacities) {
    const auto radix = static_cast<std::size_t>(std::max(c, 0)) + 1;
    if (size > limit / radix) return std::nullopt;
    size *= radix;
  }
  if (size > limit) return std::nullopt;
  return size;
}

DepletionSchedule::DepletionSchedule(int horizon, std::size_t num_activities, std::size_t num_types)
    : horizon_(horizon),
      num_activities_(num_activities),
      num_types_(num_types),
      p_(static_cast<std::size_t>(std::max(horizon, 0)) * num_activities * num_types, 0.0) {}

TabulatedReward::TabulatedReward(ItemVector capacities, int horizon)
    : indexer_(std::move(capacities)), horizon_(horizon) {
  g_.assign(static_cast<std::size_t>(horizon + 1) * indexer_.size() * indexer_.size(), 0.0);
}

double TabulatedReward::at(std::span<const int> x, std::span<const int> x_next, int t) const {
  if (t < 0 || t > horizon_) throw DomainError("epoch outside [0, T]");
  return g_[slot(indexer_.index(x), indexer_.index(x_next), t)];
}

void TabulatedReward::set(std::span<const int> x, std::span<const int> x_next, int t, double g) {
  if (t < 0 || t > horizon_) throw DomainError("epoch outside [0, T]");
  g_[slot(indexer_.index(x), indexer_.index(x_next), t)] = g;
}

namespace {

double evaluate_coverage(const WeightedCoverage& w, std::span<const int> y) {
  if (y.size() != w.covers.size()) throw DomainError("coverage: argument has wrong length");
  std::vector<char> covered(w.element_weights.size(), 0);
  for (std::size_t m = 0; m < y.size(); ++m) {
    if (y[m] <= 0) continue;
    for (int e : w.covers[m]) covered[static_cast<std::size_t>(e)] = 1;
  }
  double total = 0.0;
  for (std::size_t e = 0; e < covered.size(); ++e) {
    if (covered[e]) total += w.element_weights[e];
  }
  return total;
}

double evaluate_budgeted(const BudgetedLinear& w, std::span<const int> y) {
  if (y.size() != w.values.size()) throw DomainError("budgeted: argument has wrong length");
  std::vector<double> spend(w.budgets.size(), 0.0);
  for (std::size_t m = 0; m < y.size(); ++m) {
    spend[static_cast<std::size_t>(w.groups[m])] += w.values[m] * y[m];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < spend.size(); ++i) total += std::min(w.budgets[i], spend[i]);
  return total;
}

double evaluate_linear(const PlainLinear& w, std::span<const int> y) {
  if (y.size() != w.values.size()) throw DomainError("linear: argument has wrong length");
  double total = 0.0;
  for (std::size_t m = 0; m < y.size(); ++m) total += w.values[m] * y[m];
  return total;
}

double evaluate_tabulated(const TabulatedSetFunction& w, std::span<const int> y) {
  if (y.size() != w.bound.size()) throw DomainError("tabulated: argument has wrong length");
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (std::size_t m = 0; m < y.size(); ++m) {
    if (y[m] < 0 || y[m] > w.bound[m]) throw DomainError("tabulated set function queried outside its box");
    idx += static_cast<std::size_t>(y[m]) * stride;
    stride *= static_cast<std::size_t>(w.bound[m]) + 1;
  }
  return w.values.at(idx);
}

}  // namespace

double evaluate(const SetFunction& w, std::span<const int> y) {
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, WeightedCoverage>) {
          return evaluate_coverage(f, y);
        } else if constexpr (std::is_same_v<F, BudgetedLinear>) {
          return evaluate_budgeted(f, y);
        } else if constexpr (std::is_same_v<F, PlainLinear>) {
          return evaluate_linear(f, y);
        } else if constexpr (std::is_same_v<F, TabulatedSetFunction>) {
          return evaluate_tabulated(f, y);
        } else {
          if (!f.evaluate) throw DomainError("custom set function has no evaluator");
          return f.evaluate(y);
        }
      },
      w);
}

std::string reward_family(const RewardSpec& reward) {
  switch (reward.index()) {
    case 0: return "general_tabulated";
    case 1: return "submodular";
    default: return "linear_decaying";
  }
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  template <class T>
  void ints(const std::vector<T>& v) {
    u64(v.size());
    for (auto x : v) i64(x);
  }
  void reals(const std::vector<double>& v) {
    u64(v.size());
    for (double x : v) f64(x);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

void hash_set_function(Fnv1a& h, const SetFunction& w) {
  h.u64(w.index());
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, WeightedCoverage>) {
          h.reals(f.element_weights);
          h.u64(f.covers.size());
          for (const auto& c : f.covers) h.ints(c);
        } else if constexpr (std::is_same_v<F, BudgetedLinear>) {
          h.ints(f.groups);
          h.reals(f.values);
          h.reals(f.budgets);
        } else if constexpr (std::is_same_v<F, PlainLinear>) {
          h.reals(f.values);
        } else if constexpr (std::is_same_v<F, TabulatedSetFunction>) {
          h.ints(f.bound);
          h.reals(f.values);
        } else {
          h.str(f.name);
        }
      },
      w);
}

}  // namespace

std::uint64_t fingerprint(const Instance& instance) {
  Fnv1a h;
  h.ints(instance.capacities);
  h.ints(instance.initial_items);
  h.i64(instance.horizon);
  h.u64(instance.activities.size());
  h.u64(instance.schedule.num_activities());
  h.u64(instance.schedule.num_types());
  h.i64(instance.schedule.horizon());
  h.reals(instance.schedule.raw());
  h.u64(instance.reward.index());
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TabulatedReward>) {
          const auto size = r.indexer().size();
          for (int t = 0; t <= r.horizon(); ++t)
            for (std::size_t x = 0; x < size; ++x)
              for (std::size_t xn = 0; xn < size; ++xn) h.f64(r.at_index(x, xn, t));
        } else if constexpr (std::is_same_v<R, SubmodularReward>) {
          hash_set_function(h, r.w);
        } else {
          h.u64(r.weights.size());
          for (const auto& row : r.weights) h.reals(row);
        }
      },
      instance.reward);
  h.u64(instance.arrivals.has_value());
  if (instance.arrivals) h.ints(*instance.arrivals);
  h.u64(instance.deadlines.has_value());
  if (instance.deadlines) h.ints(*instance.deadlines);
  return h.value();
}

}  // namespace depletion

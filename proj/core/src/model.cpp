#include "depletion/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <type_traits>

#include "depletion/errors.hpp"

namespace depletion {

namespace {

using PascalTable = std::array<std::array<double, kMaxCapacity + 1>, kMaxCapacity + 1>;

const PascalTable& pascal() {
  static const PascalTable table = [] {
    PascalTable c{};
    for (int n = 0; n <= kMaxCapacity; ++n) {
      c[n][0] = 1.0;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0.0);
    }
    return c;
  }();
  return table;
}

void add(ValidationReport& report, std::string field, std::vector<int> indices, std::string rule) {
  report.violations.push_back({std::move(field), std::move(indices), std::move(rule)});
}

void check_set_function(const SetFunction& w, const Instance& instance, ValidationReport& report) {
  const auto M = instance.num_types();
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, WeightedCoverage>) {
          if (f.covers.size() != M) add(report, "reward.covers", {}, "one cover list per type required");
          for (std::size_t e = 0; e < f.element_weights.size(); ++e) {
            if (!(f.element_weights[e] >= 0.0) || !std::isfinite(f.element_weights[e]))
              add(report, "reward.element_weights", {static_cast<int>(e)}, "coverage weight negative");
          }
          for (std::size_t m = 0; m < f.covers.size(); ++m) {
            for (int e : f.covers[m]) {
              if (e < 0 || static_cast<std::size_t>(e) >= f.element_weights.size())
                add(report, "reward.covers", {static_cast<int>(m), e}, "covered element out of range");
            }
          }
        } else if constexpr (std::is_same_v<F, BudgetedLinear>) {
          if (f.groups.size() != M || f.values.size() != M)
            add(report, "reward.groups", {}, "one group and value per type required");
          for (std::size_t m = 0; m < f.groups.size(); ++m) {
            if (f.groups[m] < 0 || static_cast<std::size_t>(f.groups[m]) >= f.budgets.size())
              add(report, "reward.groups", {static_cast<int>(m)}, "group index out of range");
          }
          for (std::size_t m = 0; m < f.values.size(); ++m) {
            if (!(f.values[m] >= 0.0) || !std::isfinite(f.values[m]))
              add(report, "reward.values", {static_cast<int>(m)}, "value negative");
          }
          for (std::size_t i = 0; i < f.budgets.size(); ++i) {
            if (!(f.budgets[i] >= 0.0)) add(report, "reward.budgets", {static_cast<int>(i)}, "budget negative");
          }
        } else if constexpr (std::is_same_v<F, PlainLinear>) {
          if (f.values.size() != M) add(report, "reward.values", {}, "one value per type required");
          for (std::size_t m = 0; m < f.values.size(); ++m) {
            if (!(f.values[m] >= 0.0) || !std::isfinite(f.values[m]))
              add(report, "reward.values", {static_cast<int>(m)}, "value negative");
          }
        } else if constexpr (std::is_same_v<F, TabulatedSetFunction>) {
          bool covers = f.bound.size() == M;
          for (std::size_t m = 0; covers && m < M; ++m) covers = f.bound[m] >= instance.capacities[m];
          if (!covers) add(report, "reward.bound", {}, "tabulated set function does not cover [0, capacities]");
          std::size_t size = 1;
          for (int b : f.bound) size *= static_cast<std::size_t>(std::max(b, 0)) + 1;
          if (f.values.size() != size) add(report, "reward.values", {}, "tabulated set function has wrong size");
        }
      },
      w);
}

void check_tabulated_reward(const TabulatedReward& g, const Instance& instance, ValidationReport& report) {
  if (g.indexer().capacities() != instance.capacities || g.horizon() != instance.horizon) {
    add(report, "reward.table", {}, "tabulated reward shape mismatch");
    return;
  }
  const auto& idx = g.indexer();
  ItemVector x, xn;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx.decode(i, x);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      idx.decode(j, xn);
      bool below = true;
      for (std::size_t m = 0; m < x.size(); ++m) below = below && xn[m] <= x[m];
      if (!below) continue;
      for (int t = 0; t <= g.horizon(); ++t) {
        const double v = g.at_index(i, j, t);
        std::vector<int> where{static_cast<int>(i), static_cast<int>(j), t};
        if (!(v >= 0.0) || !std::isfinite(v)) add(report, "reward.table", where, "reward negative");
        if (t < g.horizon() && g.at_index(i, j, t + 1) > v)
          add(report, "reward.table", where, "reward not non-increasing in t");
      }
      if (g.at_index(i, j, g.horizon()) != 0.0)
        add(report, "reward.table", {static_cast<int>(i), static_cast<int>(j), g.horizon()},
            "terminal reward nonzero");
    }
  }
}

void check_bounds(std::span<const int> x, std::span<const int> x_next, const Instance& instance) {
  const auto M = instance.num_types();
  if (x.size() != M || x_next.size() != M) throw DomainError("item vector has wrong length");
  for (std::size_t m = 0; m < M; ++m) {
    if (x[m] < 0 || x[m] > instance.capacities[m]) throw DomainError("item count outside [0, capacity]");
    if (x_next[m] < 0 || x_next[m] > x[m]) throw DomainError("x_next is not componentwise below x");
  }
}

void require_decision_epoch(const State& state, const Instance& instance) {
  if (state.epoch < 0 || state.epoch >= instance.horizon) throw DomainError("epoch outside [0, T-1]");
  if (state.items.size() != instance.num_types()) throw DomainError("item vector has wrong length");
}

std::span<const double> activity_row(const State& state, std::size_t activity, const Instance& instance) {
  require_decision_epoch(state, instance);
  if (activity >= instance.num_activities()) throw DomainError("activity index out of range");
  return instance.schedule.row(state.epoch, activity);
}

}  // namespace

double binomial_coefficient(int n, int k) {
  if (n < 0 || n > kMaxCapacity) throw DomainError("binomial coefficient: n outside [0, 64]");
  if (k < 0 || k > n) return 0.0;
  return pascal()[n][k];
}

std::string ValidationReport::summary() const {
  if (violations.empty()) return "pass";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i > 0) out << "; ";
    out << v.field;
    if (!v.indices.empty()) {
      out << '[';
      for (std::size_t j = 0; j < v.indices.size(); ++j) out << (j ? "," : "") << v.indices[j];
      out << ']';
    }
    out << ": " << v.rule;
  }
  return out.str();
}

ValidationReport validate_instance(const Instance& instance, const Limits& limits) {
  ValidationReport report;
  const auto M = instance.num_types();
  const auto A = instance.num_activities();
  const int T = instance.horizon;

  if (M == 0) add(report, "num_types", {}, "at least one item type required");
  if (A == 0) add(report, "activities", {}, "at least one activity required");
  if (A > limits.max_activities) add(report, "activities", {}, "activity count exceeds cap");
  if (T < 1) add(report, "horizon", {}, "horizon must be at least 1");

  for (std::size_t m = 0; m < M; ++m) {
    const int c = instance.capacities[m];
    if (c < 1 || c > kMaxCapacity) add(report, "capacities", {static_cast<int>(m)}, "capacity outside [1, 64]");
  }
  if (instance.initial_items.size() != M) {
    add(report, "initial_items", {}, "initial_items length differs from num_types");
  } else {
    for (std::size_t m = 0; m < M; ++m) {
      if (instance.initial_items[m] < 0 || instance.initial_items[m] > instance.capacities[m])
        add(report, "initial_items", {static_cast<int>(m)}, "initial items outside [0, capacity]");
    }
  }

  const auto& s = instance.schedule;
  const bool shape_ok = s.horizon() == T && s.num_activities() == A && s.num_types() == M;
  if (!shape_ok) add(report, "schedule", {}, "schedule shape mismatch");
  if (shape_ok) {
    for (int t = 0; t < T; ++t)
      for (std::size_t a = 0; a < A; ++a)
        for (std::size_t m = 0; m < M; ++m) {
          const double p = s.at(t, a, m);
          if (!(p >= 0.0 && p <= 1.0))
            add(report, "schedule", {t, static_cast<int>(a), static_cast<int>(m)}, "probability out of [0,1]");
        }
  }

  if (instance.arrivals && instance.arrivals->size() != M)
    add(report, "arrivals", {}, "arrivals length differs from num_types");
  if (instance.deadlines && instance.deadlines->size() != M)
    add(report, "deadlines", {}, "deadlines length differs from num_types");
  if ((instance.arrivals || instance.deadlines) && shape_ok) {
    for (std::size_t m = 0; m < M; ++m) {
      const int arrival = instance.arrivals && m < instance.arrivals->size() ? (*instance.arrivals)[m] : 0;
      const int deadline = instance.deadlines && m < instance.deadlines->size() ? (*instance.deadlines)[m] : T;
      if (arrival < 0 || arrival > T) add(report, "arrivals", {static_cast<int>(m)}, "arrival outside [0, T]");
      if (deadline < arrival || deadline > T)
        add(report, "deadlines", {static_cast<int>(m)}, "deadline outside [arrival, T]");
      for (int t = 0; t < T; ++t) {
        if (t >= arrival && t < deadline) continue;
        for (std::size_t a = 0; a < A; ++a) {
          if (s.at(t, a, m) != 0.0)
            add(report, "schedule", {t, static_cast<int>(a), static_cast<int>(m)},
                "nonzero probability outside [arrival, deadline)");
        }
      }
    }
  }

  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, LinearDecayingReward>) {
          if (r.weights.size() != M) {
            add(report, "reward.weights", {}, "weights shape mismatch");
            return;
          }
          for (std::size_t m = 0; m < M; ++m) {
            const auto& row = r.weights[m];
            if (row.size() != static_cast<std::size_t>(std::max(T, 0))) {
              add(report, "reward.weights", {static_cast<int>(m)}, "weights shape mismatch");
              continue;
            }
            for (int t = 0; t < T; ++t) {
              if (!(row[t] >= 0.0) || !std::isfinite(row[t]))
                add(report, "reward.weights", {static_cast<int>(m), t}, "w negative");
              if (t + 1 < T && row[t + 1] > row[t])
                add(report, "reward.weights", {static_cast<int>(m), t}, "w not non-increasing in t");
            }
          }
        } else if constexpr (std::is_same_v<R, SubmodularReward>) {
          check_set_function(r.w, instance, report);
        } else {
          check_tabulated_reward(r, instance, report);
        }
      },
      instance.reward);
  return report;
}

void require_valid(const Instance& instance, const Limits& limits) {
  const auto report = validate_instance(instance, limits);
  if (!report.ok()) throw ConfigError("invalid instance: " + report.summary());
}

void for_each_outcome(std::span<const int> items, std::span<const double> probabilities,
                      const OutcomeVisitor& visit, std::size_t max_outcomes) {
  const auto M = items.size();
  if (probabilities.size() != M) throw DomainError("probability row has wrong length");
  if (!StateIndexer::checked_size(items, max_outcomes))
    throw EnumerationCapExceeded("outcome space exceeds cap of " + std::to_string(max_outcomes));

  // Per-type support: counts with nonzero binomial mass, ascending.
  std::vector<std::vector<std::pair<int, double>>> support(M);
  for (std::size_t m = 0; m < M; ++m) {
    const int n = items[m];
    if (n < 0 || n > kMaxCapacity) throw DomainError("item count outside [0, 64]");
    const double p = probabilities[m];
    for (int k = 0; k <= n; ++k) {
      const double mass = binomial_coefficient(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
      if (mass != 0.0) support[m].emplace_back(k, mass);
    }
    if (support[m].empty()) return;
  }

  std::vector<std::size_t> choice(M, 0);
  std::vector<int> depleted(M);
  while (true) {
    double probability = 1.0;
    for (std::size_t m = 0; m < M; ++m) {
      depleted[m] = support[m][choice[m]].first;
      probability *= support[m][choice[m]].second;
    }
    visit(depleted, probability);

    // Odometer with the last type varying fastest gives lexicographic order.
    std::size_t m = M;
    while (m > 0) {
      --m;
      if (++choice[m] < support[m].size()) break;
      choice[m] = 0;
      if (m == 0) return;
    }
    if (M == 0) return;
  }
}

std::vector<Outcome> depletion_pmf(const State& state, std::size_t activity, const Instance& instance,
                                   const Limits& limits) {
  const auto row = activity_row(state, activity, instance);
  std::vector<Outcome> outcomes;
  for_each_outcome(
      state.items, row,
      [&](std::span<const int> alpha, double p) { outcomes.push_back({ItemVector(alpha.begin(), alpha.end()), p}); },
      limits.max_outcomes);
  return outcomes;
}

ItemVector sample_depletion(const State& state, std::size_t activity, const Instance& instance,
                            RandomStream& rng) {
  const auto row = activity_row(state, activity, instance);
  ItemVector alpha(state.items.size(), 0);
  for (std::size_t m = 0; m < alpha.size(); ++m) {
    const double p = row[m];
    if (p <= 0.0) continue;
    if (p >= 1.0) {
      alpha[m] = state.items[m];
      continue;
    }
    for (int k = 0; k < state.items[m]; ++k) alpha[m] += rng.bernoulli(p) ? 1 : 0;
  }
  return alpha;
}

double reward(std::span<const int> x, std::span<const int> x_next, int t, const Instance& instance) {
  check_bounds(x, x_next, instance);
  if (t < 0 || t > instance.horizon) throw DomainError("epoch outside [0, T]");
  return std::visit(
      [&](const auto& r) -> double {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TabulatedReward>) {
          return r.at(x, x_next, t);
        } else {
          if (t == instance.horizon) return 0.0;
          if constexpr (std::is_same_v<R, SubmodularReward>) {
            const auto M = x.size();
            ItemVector used_after(M), used_before(M);
            for (std::size_t m = 0; m < M; ++m) {
              used_after[m] = instance.capacities[m] - x_next[m];
              used_before[m] = instance.capacities[m] - x[m];
            }
            return evaluate(r.w, used_after) - evaluate(r.w, used_before);
          } else {
            double total = 0.0;
            for (std::size_t m = 0; m < x.size(); ++m) total += r.weights[m][t] * (x[m] - x_next[m]);
            return total;
          }
        }
      },
      instance.reward);
}

double expected_one_step_reward_enumerated(const State& state, std::size_t activity, const Instance& instance,
                                           const Limits& limits) {
  const auto row = activity_row(state, activity, instance);
  ItemVector next(state.items.size());
  double total = 0.0;
  for_each_outcome(
      state.items, row,
      [&](std::span<const int> alpha, double p) {
        for (std::size_t m = 0; m < next.size(); ++m) next[m] = state.items[m] - alpha[m];
        total += p * reward(state.items, next, state.epoch, instance);
      },
      limits.max_outcomes);
  return total;
}

double expected_one_step_reward(const State& state, std::size_t activity, const Instance& instance,
                                const Limits& limits) {
  const auto row = activity_row(state, activity, instance);
  const int t = state.epoch;
  if (const auto* ld = std::get_if<LinearDecayingReward>(&instance.reward)) {
    double total = 0.0;
    for (std::size_t m = 0; m < row.size(); ++m) total += ld->weights[m][t] * state.items[m] * row[m];
    return total;
  }
  if (const auto* sub = std::get_if<SubmodularReward>(&instance.reward)) {
    if (const auto* lin = std::get_if<PlainLinear>(&sub->w)) {
      double total = 0.0;
      for (std::size_t m = 0; m < row.size(); ++m) total += lin->values[m] * state.items[m] * row[m];
      return total;
    }
  }
  return expected_one_step_reward_enumerated(state, activity, instance, limits);
}

std::vector<double> one_step_rewards(const State& state, const Instance& instance, const Limits& limits) {
  std::vector<double> values(instance.num_activities());
  for (std::size_t a = 0; a < values.size(); ++a) values[a] = expected_one_step_reward(state, a, instance, limits);
  return values;
}

namespace {

State deplete(const State& state, std::span<const int> alpha, int step) {
  if (alpha.size() != state.items.size()) throw DomainError("outcome vector has wrong length");
  State next{state.items, state.epoch + step};
  for (std::size_t m = 0; m < alpha.size(); ++m) next.items[m] = std::max(state.items[m] - alpha[m], 0);
  return next;
}

}  // namespace

State apply_depletion_with_step(const State& state, std::span<const int> alpha) { return deplete(state, alpha, 1); }

State apply_depletion_no_step(const State& state, std::span<const int> alpha) { return deplete(state, alpha, 0); }

}  // namespace depletion

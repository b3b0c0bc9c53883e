#include "depletion/dp.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>
#include <type_traits>

#include "depletion/errors.hpp"
#include "depletion/model.hpp"
#include "depletion/policy.hpp"

namespace depletion {

ValueTable::ValueTable(ItemVector capacities, int horizon, std::uint64_t fingerprint, Kind kind, std::string label)
    : indexer_(std::move(capacities)),
      horizon_(horizon),
      fingerprint_(fingerprint),
      kind_(kind),
      label_(std::move(label)) {
  const auto slots = static_cast<std::size_t>(horizon + 1) * indexer_.size();
  values_.assign(slots, 0.0);
  best_.assign(slots, -1);
}

double ValueTable::value(std::span<const int> x, int t) const {
  if (t < 0 || t > horizon_) throw DomainError("epoch outside [0, T]");
  return value(indexer_.index(x), t);
}

std::int32_t ValueTable::best_activity(std::size_t state_index, int t) const {
  if (t >= horizon_) return -1;
  return best_[slot(state_index, t)];
}

std::int32_t ValueTable::best_activity(std::span<const int> x, int t) const {
  if (t < 0 || t > horizon_) throw DomainError("epoch outside [0, T]");
  return best_activity(indexer_.index(x), t);
}

namespace {

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

void check_caps(const Instance& instance, const Limits& limits) {
  if (instance.num_activities() > limits.max_activities)
    throw ActivityCapExceeded("activity count " + std::to_string(instance.num_activities()) + " exceeds cap");
  require_valid(instance, limits);
  const auto states = StateIndexer::checked_size(instance.capacities, limits.max_states);
  if (!states || *states * static_cast<std::size_t>(instance.horizon + 1) > limits.max_states)
    throw StateSpaceCapExceeded("state space exceeds cap of " + std::to_string(limits.max_states) + " entries");
}

// Rewards g(x, x - alpha, t) for a fixed (x, t), reusing w(xbar - x).
class StepReward {
 public:
  StepReward(const Instance& instance, std::span<const int> x, std::size_t x_index, int t)
      : instance_(instance), x_(x), x_index_(x_index), t_(t) {
    if (const auto* sub = std::get_if<SubmodularReward>(&instance.reward)) {
      used_.resize(x.size());
      for (std::size_t m = 0; m < x.size(); ++m) used_[m] = instance.capacities[m] - x[m];
      base_ = evaluate(sub->w, used_);
    }
  }

  double operator()(std::span<const int> alpha, std::size_t next_index) {
    return std::visit(
        [&](const auto& r) -> double {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, LinearDecayingReward>) {
            double total = 0.0;
            for (std::size_t m = 0; m < alpha.size(); ++m) total += r.weights[m][t_] * alpha[m];
            return total;
          } else if constexpr (std::is_same_v<R, SubmodularReward>) {
            for (std::size_t m = 0; m < alpha.size(); ++m) used_[m] = instance_.capacities[m] - x_[m] + alpha[m];
            return evaluate(r.w, used_) - base_;
          } else {
            return r.at_index(x_index_, next_index, t_);
          }
        },
        instance_.reward);
  }

 private:
  const Instance& instance_;
  std::span<const int> x_;
  std::size_t x_index_;
  int t_;
  ItemVector used_;
  double base_ = 0.0;
};

// E[g + J(next, t+1)] for one (x, t, activity).
double backup(const Instance& instance, const ValueTable& table, std::span<const int> x, std::size_t x_index, int t,
              std::size_t activity, const Limits& limits) {
  const auto& idx = table.indexer();
  StepReward step(instance, x, x_index, t);
  double total = 0.0;
  for_each_outcome(
      x, instance.schedule.row(t, activity),
      [&](std::span<const int> alpha, double p) {
        std::size_t next = x_index;
        for (std::size_t m = 0; m < alpha.size(); ++m) next -= static_cast<std::size_t>(alpha[m]) * idx.stride(m);
        total += p * (step(alpha, next) + table.value(next, t + 1));
      },
      limits.max_outcomes);
  return total;
}

template <class Body>
void for_each_state(std::size_t count, unsigned threads, const Body& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    ItemVector x;
    for (std::size_t i = 0; i < count; ++i) body(i, x);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        ItemVector x;
        const std::size_t end = std::min(count, (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) body(i, x);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

ValueTable solve_clairvoyant(const Instance& instance, const SolverOptions& options) {
  check_caps(instance, options.limits);
  ValueTable table(instance.capacities, instance.horizon, fingerprint(instance), ValueTable::Kind::kOptimal,
                   "optimal");
  const auto& idx = table.indexer();
  for (int t = instance.horizon - 1; t >= 0; --t) {
    for_each_state(idx.size(), options.threads, [&](std::size_t i, ItemVector& x) {
      idx.decode(i, x);
      double best = 0.0;
      std::int32_t arg = -1;
      for (std::size_t a = 0; a < instance.num_activities(); ++a) {
        const double q = backup(instance, table, x, i, t, a, options.limits);
        if (arg < 0 || q > best) {
          best = q;
          arg = static_cast<std::int32_t>(a);
        }
      }
      table.set_value(i, t, best);
      table.set_best_activity(i, t, arg);
    });
  }
  return table;
}

ValueTable evaluate_policy_exact(const Instance& instance, const Policy& policy, const SolverOptions& options) {
  check_caps(instance, options.limits);
  ValueTable table(instance.capacities, instance.horizon, fingerprint(instance), ValueTable::Kind::kPolicy,
                   policy.name());
  const auto& idx = table.indexer();
  for (int t = instance.horizon - 1; t >= 0; --t) {
    for_each_state(idx.size(), options.threads, [&](std::size_t i, ItemVector& x) {
      idx.decode(i, x);
      const std::size_t a = policy(State{x, t}, instance);
      if (a >= instance.num_activities()) throw DomainError("policy returned an out-of-range activity");
      table.set_value(i, t, backup(instance, table, x, i, t, a, options.limits));
      table.set_best_activity(i, t, static_cast<std::int32_t>(a));
    });
  }
  return table;
}

double optimal_value(const ValueTable& table, const State& state) { return table.value(state.items, state.epoch); }

void require_matching(const ValueTable& table, const Instance& instance) {
  const auto fp = fingerprint(instance);
  if (fp != table.fingerprint())
    throw FingerprintMismatch("table fingerprint " + hex(table.fingerprint()) + " does not match instance " + hex(fp));
}

double optimal_value(const ValueTable& table, const Instance& instance, const State& state) {
  require_matching(table, instance);
  return optimal_value(table, state);
}

AuditReport audit_table(const Instance& instance, const ValueTable& table, double tol, const Limits& limits) {
  require_matching(table, instance);
  AuditReport report;
  const auto& idx = table.indexer();
  ItemVector x;
  auto note = [&](double gap) {
    ++report.checked;
    report.worst_gap = std::max(report.worst_gap, gap);
    if (gap > tol) ++report.discrepancies;
  };
  for (std::size_t i = 0; i < idx.size(); ++i) note(std::abs(table.value(i, instance.horizon)));
  for (int t = 0; t < instance.horizon; ++t) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      idx.decode(i, x);
      const double stored = table.value(i, t);
      const auto chosen = table.best_activity(i, t);
      if (chosen < 0 || static_cast<std::size_t>(chosen) >= instance.num_activities()) {
        ++report.checked;
        ++report.discrepancies;
        report.worst_gap = std::max(report.worst_gap, std::abs(stored));
        continue;
      }
      const double at_chosen = backup(instance, table, x, i, t, static_cast<std::size_t>(chosen), limits);
      double target = at_chosen;
      if (table.kind() == ValueTable::Kind::kOptimal) {
        for (std::size_t a = 0; a < instance.num_activities(); ++a)
          target = std::max(target, backup(instance, table, x, i, t, a, limits));
        note(std::abs(target - at_chosen));
      }
      note(std::abs(stored - target));
    }
  }
  return report;
}

}  // namespace depletion

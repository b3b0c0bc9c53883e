#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "depletion/instance.hpp"

namespace depletion {

class Policy;

/// Values J(x, t) for every reduced state plus the activity attaining each
/// value. Entries are addressed by (epoch, mixed-radix index of x).
class ValueTable {
 public:
  enum class Kind { kOptimal, kPolicy };

  ValueTable() = default;
  ValueTable(ItemVector capacities, int horizon, std::uint64_t fingerprint, Kind kind, std::string label);

  const StateIndexer& indexer() const { return indexer_; }
  int horizon() const { return horizon_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  Kind kind() const { return kind_; }
  /// "optimal" or the evaluated policy's name.
  const std::string& label() const { return label_; }

  double value(std::size_t state_index, int t) const { return values_[slot(state_index, t)]; }
  double value(std::span<const int> x, int t) const;
  void set_value(std::size_t state_index, int t, double v) { values_[slot(state_index, t)] = v; }

  /// Activity chosen at (x, t) for t < T; -1 at t = T.
  std::int32_t best_activity(std::size_t state_index, int t) const;
  std::int32_t best_activity(std::span<const int> x, int t) const;
  void set_best_activity(std::size_t state_index, int t, std::int32_t a) { best_[slot(state_index, t)] = a; }

  const std::vector<double>& raw_values() const { return values_; }
  const std::vector<std::int32_t>& raw_best() const { return best_; }

 private:
  std::size_t slot(std::size_t state_index, int t) const {
    return static_cast<std::size_t>(t) * indexer_.size() + state_index;
  }

  StateIndexer indexer_;
  int horizon_ = 0;
  std::uint64_t fingerprint_ = 0;
  Kind kind_ = Kind::kOptimal;
  std::string label_;
  std::vector<double> values_;
  std::vector<std::int32_t> best_;
};

struct SolverOptions {
  Limits limits;
  /// Worker threads used within an epoch. Output is identical for every value.
  unsigned threads = 1;
};

/// Backward induction J(x,t) = max_A sum_alpha Pr(alpha) [g(x, x-alpha, t) + J(x-alpha, t+1)]
/// over the full reduced state space. Ties go to the lowest activity index.
ValueTable solve_clairvoyant(const Instance& instance, const SolverOptions& options = {});

/// J^pi over the full reduced state space; best_activity records pi's choices.
ValueTable evaluate_policy_exact(const Instance& instance, const Policy& policy, const SolverOptions& options = {});

/// Lookup of J at a state. Range-checked.
double optimal_value(const ValueTable& table, const State& state);

/// As above, also requiring the table to have been computed for `instance`.
double optimal_value(const ValueTable& table, const Instance& instance, const State& state);

void require_matching(const ValueTable& table, const Instance& instance);

struct AuditReport {
  std::size_t checked = 0;
  std::size_t discrepancies = 0;
  double worst_gap = 0.0;
};

/// Recomputes one Bellman backup per (x, t) from the stored next-epoch values
/// and compares it with the stored value. Optimal tables are audited against
/// the max over activities (and the stored argmax must attain it); policy
/// tables against their recorded activity.
AuditReport audit_table(const Instance& instance, const ValueTable& table, double tol = 1e-12,
                        const Limits& limits = {});

}  // namespace depletion

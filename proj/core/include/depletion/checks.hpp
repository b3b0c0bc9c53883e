#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "depletion/dp.hpp"
#include "depletion/instance.hpp"
#include "depletion/policy.hpp"

namespace depletion {

/// A comparison lhs <= rhs is violated when lhs > rhs + max(abs, rel * |rhs|).
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  Tolerance() = default;
  Tolerance(double both) : abs(both), rel(both) {}  // NOLINT(google-explicit-constructor)
  Tolerance(double abs_tol, double rel_tol) : abs(abs_tol), rel(rel_tol) {}

  double slack(double rhs) const;
  bool exceeds(double lhs, double rhs) const { return lhs > rhs + slack(rhs); }
};

struct Witness {
  std::string label;
  ItemVector vector;
};

struct PropertyViolation {
  std::string rule;
  std::vector<Witness> witness;
  int epoch = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // lhs - rhs
};

struct PropertyReport {
  std::string property;
  std::uint64_t fingerprint = 0;
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  /// First violations found, in enumeration order (at most kMaxStoredViolations).
  std::vector<PropertyViolation> violations;
  /// Largest lhs - rhs over all checked comparisons (0 when none were checked).
  double worst_gap = 0.0;
  bool pass = true;
};

inline constexpr std::size_t kMaxStoredViolations = 1000;

/// J(x - e_m, t) <= J(x, t) for every x, m with x_m >= 1 and every t.
PropertyReport check_vfm(const Instance& instance, const ValueTable& table, Tolerance tol = {});

/// J(x, t) <= g(x, x - alpha, t) + J(x - alpha, t) for every t < T, x and alpha <= x.
PropertyReport check_ir(const Instance& instance, const ValueTable& table, Tolerance tol = {},
                        const Limits& limits = {});

/// Monotonicity and diminishing returns of w over the box [0, domain_bound],
/// using unit increments. Throws DomainError for non-submodular reward kinds.
PropertyReport check_submodular(const RewardSpec& reward, const ItemVector& domain_bound, Tolerance tol = {},
                                const Limits& limits = {});

/// Non-negativity, monotonicity in t and zero terminal reward of g.
PropertyReport check_assumption1(const Instance& instance, Tolerance tol = {});

struct RatioReport {
  std::uint64_t fingerprint = 0;
  std::string policy;
  double j_star = 0.0;    // at (x0, 0)
  double j_policy = 0.0;  // at (x0, 0)
  /// J*/J^pi at (x0, 0); 1 when both vanish, +inf when only J^pi does.
  double ratio = 1.0;
  /// Maximum of J*/J^pi over every (x, t) with J^pi > 0.
  double max_ratio = 1.0;
  State worst_state;
  double bound = 2.0;
  double slack = 1.0;  // bound - max_ratio
  std::size_t states_checked = 0;
  /// States with J^pi = 0 < J*.
  std::size_t zero_value_states = 0;
  bool pass = true;
};

/// Compares J* with the exact value of `policy` at every state.
RatioReport check_ratio(const Instance& instance, const Policy& policy, double bound, Tolerance tol = {},
                        const SolverOptions& options = {}, std::shared_ptr<const ValueTable> optimal = nullptr);

}  // namespace depletion

#include "depletion/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "depletion/errors.hpp"
#include "depletion/model.hpp"

namespace depletion {

double Tolerance::slack(double rhs) const { return std::max(abs, rel * std::abs(rhs)); }

namespace {

class ReportBuilder {
 public:
  ReportBuilder(std::string property, std::uint64_t fingerprint, Tolerance tol) : tol_(tol) {
    report_.property = std::move(property);
    report_.fingerprint = fingerprint;
    report_.worst_gap = -std::numeric_limits<double>::infinity();
  }

  /// Records the comparison lhs <= rhs; `witness` is only built on violation.
  template <class MakeWitness>
  void compare(double lhs, double rhs, int epoch, const std::string& rule, MakeWitness&& make_witness) {
    ++report_.checked;
    report_.worst_gap = std::max(report_.worst_gap, lhs - rhs);
    if (!tol_.exceeds(lhs, rhs)) return;
    ++report_.violation_count;
    if (report_.violations.size() < kMaxStoredViolations)
      report_.violations.push_back({rule, make_witness(), epoch, lhs, rhs, lhs - rhs});
  }

  PropertyReport finish() {
    if (report_.checked == 0) report_.worst_gap = 0.0;
    report_.pass = report_.violation_count == 0;
    return std::move(report_);
  }

 private:
  Tolerance tol_;
  PropertyReport report_;
};

ItemVector unit(std::size_t size, std::size_t m) {
  ItemVector e(size, 0);
  e[m] = 1;
  return e;
}

std::size_t ir_pair_count(const ItemVector& capacities, int horizon, std::size_t limit) {
  // sum over x in the box of prod_m (x_m + 1) = prod_m (c_m + 1)(c_m + 2) / 2
  std::size_t total = static_cast<std::size_t>(std::max(horizon, 0));
  for (int c : capacities) {
    const auto factor = static_cast<std::size_t>(c + 1) * static_cast<std::size_t>(c + 2) / 2;
    if (total != 0 && factor > limit / total) return limit + 1;
    total *= factor;
  }
  return total;
}

}  // namespace

PropertyReport check_vfm(const Instance& instance, const ValueTable& table, Tolerance tol) {
  require_matching(table, instance);
  ReportBuilder report("vfm", table.fingerprint(), tol);
  const auto& idx = table.indexer();
  ItemVector x;
  for (int t = 0; t <= table.horizon(); ++t) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      idx.decode(i, x);
      for (std::size_t m = 0; m < x.size(); ++m) {
        if (x[m] == 0) continue;
        const std::size_t lower = i - idx.stride(m);
        report.compare(table.value(lower, t), table.value(i, t), t, "J(x - e_m, t) <= J(x, t)", [&] {
          ItemVector fewer = x;
          --fewer[m];
          return std::vector<Witness>{{"x", x}, {"x_minus_e_m", fewer}};
        });
      }
    }
  }
  return report.finish();
}

PropertyReport check_ir(const Instance& instance, const ValueTable& table, Tolerance tol, const Limits& limits) {
  require_matching(table, instance);
  if (ir_pair_count(instance.capacities, instance.horizon, limits.max_pairs) > limits.max_pairs)
    throw EnumerationCapExceeded("IR (state, outcome) enumeration exceeds cap of " +
                                 std::to_string(limits.max_pairs));
  ReportBuilder report("ir", table.fingerprint(), tol);
  const auto& idx = table.indexer();
  ItemVector x, alpha, rest;
  for (int t = 0; t < table.horizon(); ++t) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      idx.decode(i, x);
      const StateIndexer alphas(x);
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        alphas.decode(a, alpha);
        rest = x;
        for (std::size_t m = 0; m < x.size(); ++m) rest[m] -= alpha[m];
        const std::size_t rest_index = idx.index(rest);
        const double rhs = reward(x, rest, t, instance) + table.value(rest_index, t);
        report.compare(table.value(i, t), rhs, t, "J(x, t) <= g(x, x - alpha, t) + J(x - alpha, t)", [&] {
          return std::vector<Witness>{{"x", x}, {"alpha", alpha}};
        });
      }
    }
  }
  return report.finish();
}

PropertyReport check_submodular(const RewardSpec& reward_spec, const ItemVector& domain_bound, Tolerance tol,
                                const Limits& limits) {
  const auto* sub = std::get_if<SubmodularReward>(&reward_spec);
  if (!sub) throw DomainError("check_submodular requires a submodular reward");
  const auto box_size = StateIndexer::checked_size(domain_bound, limits.max_states);
  if (!box_size) throw EnumerationCapExceeded("submodularity domain exceeds cap");
  if (ir_pair_count(domain_bound, 1, limits.max_pairs) > limits.max_pairs)
    throw EnumerationCapExceeded("submodularity pair enumeration exceeds cap");

  const StateIndexer box(domain_bound);
  std::vector<double> w(box.size());
  ItemVector y, lower;
  for (std::size_t i = 0; i < box.size(); ++i) {
    box.decode(i, y);
    w[i] = evaluate(sub->w, y);
  }

  ReportBuilder report("submodular", 0, tol);
  for (std::size_t i = 0; i < box.size(); ++i) {
    box.decode(i, y);
    for (std::size_t m = 0; m < y.size(); ++m) {
      if (y[m] >= domain_bound[m]) continue;
      const std::size_t up = i + box.stride(m);
      report.compare(w[i], w[up], -1, "w(y) <= w(y + e_m)", [&] {
        return std::vector<Witness>{{"y", y}, {"e", unit(y.size(), m)}};
      });
    }
    // Every y' <= y.
    const StateIndexer below(y);
    for (std::size_t j = 0; j < below.size(); ++j) {
      below.decode(j, lower);
      const std::size_t k = box.index(lower);
      for (std::size_t m = 0; m < y.size(); ++m) {
        if (y[m] >= domain_bound[m]) continue;
        const double gain_high = w[i + box.stride(m)] - w[i];
        const double gain_low = w[k + box.stride(m)] - w[k];
        report.compare(gain_high, gain_low, -1, "w(y + e) - w(y) <= w(y' + e) - w(y')", [&] {
          return std::vector<Witness>{{"y", y}, {"y_prime", lower}, {"e", unit(y.size(), m)}};
        });
      }
    }
  }
  return report.finish();
}

PropertyReport check_assumption1(const Instance& instance, Tolerance tol) {
  ReportBuilder report("assumption1", fingerprint(instance), tol);
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TabulatedReward>) {
          const auto& idx = r.indexer();
          ItemVector x, xn;
          for (std::size_t i = 0; i < idx.size(); ++i) {
            idx.decode(i, x);
            for (std::size_t j = 0; j < idx.size(); ++j) {
              idx.decode(j, xn);
              bool below = true;
              for (std::size_t m = 0; m < x.size(); ++m) below = below && xn[m] <= x[m];
              if (!below) continue;
              auto witness = [&] { return std::vector<Witness>{{"x", x}, {"x_next", xn}}; };
              for (int t = 0; t <= r.horizon(); ++t) {
                const double g = r.at_index(i, j, t);
                report.compare(0.0, g, t, "reward negative", witness);
                if (t < r.horizon())
                  report.compare(r.at_index(i, j, t + 1), g, t, "reward not non-increasing in t", witness);
              }
              const double terminal = r.at_index(i, j, r.horizon());
              report.compare(std::abs(terminal), 0.0, r.horizon(), "terminal reward nonzero", witness);
            }
          }
        } else if constexpr (std::is_same_v<R, LinearDecayingReward>) {
          for (std::size_t m = 0; m < r.weights.size(); ++m) {
            const auto& row = r.weights[m];
            auto witness = [&] { return std::vector<Witness>{{"type", {static_cast<int>(m)}}}; };
            for (std::size_t t = 0; t < row.size(); ++t) {
              report.compare(0.0, row[t], static_cast<int>(t), "w negative", witness);
              if (t + 1 < row.size())
                report.compare(row[t + 1], row[t], static_cast<int>(t), "w not non-increasing in t", witness);
            }
          }
        } else {
          // g >= 0 iff w is monotone on the box [0, capacities]; g is zero at T by
          // construction and constant in t, so non-increasing.
          const StateIndexer box(instance.capacities);
          ItemVector y, up;
          for (std::size_t i = 0; i < box.size(); ++i) {
            box.decode(i, y);
            const double here = evaluate(r.w, y);
            for (std::size_t m = 0; m < y.size(); ++m) {
              if (y[m] >= instance.capacities[m]) continue;
              up = y;
              ++up[m];
              report.compare(here, evaluate(r.w, up), 0, "reward negative", [&] {
                return std::vector<Witness>{{"y", y}, {"y_plus_e_m", up}};
              });
            }
          }
        }
      },
      instance.reward);
  return report.finish();
}

RatioReport check_ratio(const Instance& instance, const Policy& policy, double bound, Tolerance tol,
                        const SolverOptions& options, std::shared_ptr<const ValueTable> optimal) {
  if (!optimal) optimal = std::make_shared<const ValueTable>(solve_clairvoyant(instance, options));
  require_matching(*optimal, instance);
  const ValueTable evaluated = evaluate_policy_exact(instance, policy, options);

  RatioReport report;
  report.fingerprint = optimal->fingerprint();
  report.policy = policy.name();
  report.bound = bound;
  const auto& idx = optimal->indexer();
  const std::size_t start = idx.index(instance.initial_items);
  report.j_star = optimal->value(start, 0);
  report.j_policy = evaluated.value(start, 0);
  if (report.j_policy > 0.0) {
    report.ratio = report.j_star / report.j_policy;
  } else {
    report.ratio = report.j_star > tol.abs ? std::numeric_limits<double>::infinity() : 1.0;
  }
  report.worst_state = instance.initial_state();

  ItemVector x;
  for (int t = 0; t <= instance.horizon; ++t) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      ++report.states_checked;
      const double best = optimal->value(i, t);
      const double achieved = evaluated.value(i, t);
      if (achieved > 0.0) {
        const double ratio = best / achieved;
        if (ratio > report.max_ratio) {
          report.max_ratio = ratio;
          idx.decode(i, x);
          report.worst_state = {x, t};
        }
      } else if (best > tol.abs) {
        ++report.zero_value_states;
      }
    }
  }
  report.slack = bound - report.max_ratio;
  report.pass = !tol.exceeds(report.max_ratio, bound) && report.zero_value_states == 0;
  return report;
}

}  // namespace depletion

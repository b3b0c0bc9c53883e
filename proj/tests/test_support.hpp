#pragma once

#include <string>
#include <vector>

#include "depletion/depletion.hpp"

namespace testing_support {

using depletion::Instance;

/// Instance with all-zero schedule; caller fills probabilities and reward.
inline Instance blank(const depletion::ItemVector& caps, int horizon, std::size_t activities) {
  Instance inst;
  inst.capacities = caps;
  inst.initial_items = caps;
  inst.horizon = horizon;
  for (std::size_t a = 0; a < activities; ++a) inst.activities.push_back("a" + std::to_string(a));
  inst.schedule = depletion::DepletionSchedule(horizon, activities, caps.size());
  return inst;
}

inline depletion::LinearDecayingReward constant_weights(const std::vector<double>& w, int horizon) {
  depletion::LinearDecayingReward r;
  for (double v : w) r.weights.push_back(std::vector<double>(horizon, v));
  return r;
}

/// Every (t, a, m) entry gets probability p.
inline void fill(Instance& inst, double p) {
  for (int t = 0; t < inst.horizon; ++t)
    for (std::size_t a = 0; a < inst.num_activities(); ++a)
      for (std::size_t m = 0; m < inst.num_types(); ++m) inst.schedule.set(t, a, m, p);
}

/// Tabulated reward g(x, x', t) = h(xbar - x') - h(xbar - x) for t < T, from a value per y.
template <class H>
depletion::TabulatedReward tabulate_difference(const depletion::ItemVector& caps, int horizon, H h) {
  depletion::TabulatedReward g(caps, horizon);
  const depletion::StateIndexer idx(caps);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto x = idx.decode(i);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const auto xn = idx.decode(j);
      bool below = true;
      depletion::ItemVector y(caps.size()), yn(caps.size());
      for (std::size_t m = 0; m < caps.size(); ++m) {
        below = below && xn[m] <= x[m];
        y[m] = caps[m] - x[m];
        yn[m] = caps[m] - xn[m];
      }
      if (!below) continue;
      for (int t = 0; t < horizon; ++t) g.set(x, xn, t, h(yn) - h(y));
    }
  }
  return g;
}

}  // namespace testing_support

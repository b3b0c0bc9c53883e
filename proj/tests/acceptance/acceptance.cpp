// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "depletion/depletion.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace depletion;

namespace {

// Every optimal or policy table built by criteria 1-7 is audited here.
struct AuditLog {
  std::size_t tables = 0;
  std::size_t discrepancies = 0;
  double worst_gap = 0.0;

  void add(const Instance& inst, const ValueTable& table) {
    const auto report = audit_table(inst, table, 1e-12);
    ++tables;
    discrepancies += report.discrepancies;
    worst_gap = std::max(worst_gap, report.worst_gap);
  }
};

AuditLog audit_log;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, f, v);
  return buffer;
}

std::shared_ptr<const ValueTable> solve_and_audit(const Instance& inst) {
  auto table = std::make_shared<const ValueTable>(solve_clairvoyant(inst));
  audit_log.add(inst, *table);
  return table;
}

ValueTable evaluate_and_audit(const Instance& inst, const Policy& policy) {
  auto table = evaluate_policy_exact(inst, policy);
  audit_log.add(inst, table);
  return table;
}

template <class F>
void for_each_decision_state(const Instance& inst, F f) {
  const StateIndexer idx(inst.capacities);
  for (int t = 0; t < inst.horizon; ++t)
    for (std::size_t i = 0; i < idx.size(); ++i) f(State{idx.decode(i), t});
}

/// Max over states of J*/J^pi with J^pi > 0, plus the count of states with J^pi = 0 < J*.
struct RatioScan {
  double max_ratio = 1.0;
  std::size_t zero_states = 0;
};

RatioScan scan_ratio(const Instance& inst, const ValueTable& opt, const ValueTable& pol) {
  RatioScan scan;
  const auto& j = opt.raw_values();
  const auto& p = pol.raw_values();
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (p[k] > 0.0) {
      scan.max_ratio = std::max(scan.max_ratio, j[k] / p[k]);
    } else if (j[k] > 1e-12) {
      ++scan.zero_states;
    }
  }
  (void)inst;
  return scan;
}

std::vector<Instance> submodular_suite() {
  std::vector<Instance> suite;
  RandomFamilyParams params;
  params.submodular_kind = SubmodularKind::kCoverage;
  for (std::uint64_t seed = 0; seed < 100; ++seed) suite.push_back(random_submodular_instance(seed, params));
  params.submodular_kind = SubmodularKind::kBudgeted;
  for (std::uint64_t seed = 100; seed < 200; ++seed) suite.push_back(random_submodular_instance(seed, params));
  return suite;
}

Verdict worst_case() {
  Verdict out;
  double worst_err = 0.0;
  for (double eps : {0.5, 0.1, 0.01}) {
    const auto inst = build_worst_case_instance(eps);
    const auto table = solve_and_audit(inst);
    const auto myopic = evaluate_and_audit(inst, myopic_policy());
    const double j = table->value(inst.initial_items, 0);
    const double g = myopic.value(inst.initial_items, 0);
    worst_err = std::max({worst_err, std::abs(j - (2.0 - eps)), std::abs(g - 1.0), std::abs(j / g - (2.0 - eps))});
    out.require(std::abs(j - (2.0 - eps)) <= 1e-12, "J* != 2-eps at eps=" + fmt("%g", eps));
    out.require(std::abs(g - 1.0) <= 1e-12, "J^myopic != 1 at eps=" + fmt("%g", eps));
    out.require(std::abs(j / g - (2.0 - eps)) <= 1e-12, "ratio != 2-eps at eps=" + fmt("%g", eps));
  }
  out.detail = out.pass ? "max abs error " + fmt("%.3g", worst_err) : out.detail;
  return out;
}

Verdict family_suite(const std::vector<Instance>& suite) {
  Verdict out;
  double worst = 1.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& inst = suite[i];
    const auto table = solve_and_audit(inst);
    const auto myopic = evaluate_and_audit(inst, myopic_policy());
    const auto vfm = check_vfm(inst, *table, 1e-9);
    const auto ir = check_ir(inst, *table, 1e-9);
    const auto scan = scan_ratio(inst, *table, myopic);
    worst = std::max(worst, scan.max_ratio);
    const std::string tag = " on instance " + std::to_string(i);
    out.require(vfm.pass, "vfm violated" + tag);
    out.require(ir.pass, "ir violated" + tag);
    out.require(scan.max_ratio <= 2.0 + 1e-9, "ratio " + fmt("%.17g", scan.max_ratio) + tag);
    out.require(scan.zero_states == 0, "myopic earns 0 where J* > 0" + tag);
  }
  if (out.pass) out.detail = std::to_string(suite.size()) + " instances, max ratio " + fmt("%.6f", worst);
  return out;
}

Verdict approx_oracle(const std::vector<Instance>& suite) {
  Verdict out;
  double worst15 = 1.0, worst2 = 1.0;
  std::size_t states = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& inst = suite[i];
    const auto table = solve_and_audit(inst);
    for (double alpha : {1.5, 2.0}) {
      const auto pol = evaluate_and_audit(inst, approx_myopic_policy(alpha));
      const auto scan = scan_ratio(inst, *table, pol);
      (alpha == 1.5 ? worst15 : worst2) = std::max(alpha == 1.5 ? worst15 : worst2, scan.max_ratio);
      out.require(scan.max_ratio <= 1.0 + alpha + 1e-9,
                  "alpha=" + fmt("%g", alpha) + " ratio " + fmt("%.17g", scan.max_ratio) + " on instance " +
                      std::to_string(i));
      out.require(scan.zero_states == 0, "approx policy earns 0 where J* > 0 on instance " + std::to_string(i));
    }
    const auto exact = approx_myopic_policy(1.0);
    const auto greedy = myopic_policy();
    for_each_decision_state(inst, [&](const State& s) {
      ++states;
      out.require(exact(s, inst) == greedy(s, inst), "alpha=1 decision differs on instance " + std::to_string(i));
    });
  }
  if (out.pass)
    out.detail = "max ratio " + fmt("%.6f", worst15) + " (alpha 1.5), " + fmt("%.6f", worst2) + " (alpha 2); " +
                 std::to_string(states) + " states with alpha=1 == myopic";
  return out;
}

Verdict static_broadcast() {
  Verdict out;
  double worst = 0.0;
  std::size_t full = 0, full_ok = 0, failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = build_broadcast_instance(random_static_broadcast_params(seed), seed);
    const auto table = solve_and_audit(inst);
    const auto myopic = evaluate_and_audit(inst, myopic_policy());
    const double gap = table->value(inst.initial_items, 0) - myopic.value(inst.initial_items, 0);
    worst = std::max(worst, std::abs(gap));
    const auto params = random_static_broadcast_params(seed);
    const bool uncapped = params.max_users_per_slot >= params.num_users;
    full += uncapped;
    full_ok += uncapped && std::abs(gap) <= 1e-9;
    failures += std::abs(gap) > 1e-9;
    out.require(std::abs(gap) <= 1e-9, "myopic below J* by " + fmt("%.6g", gap) + " at seed " + std::to_string(seed));
  }
  if (out.pass) {
    out.detail = "100 instances, max |J* - J^myopic| " + fmt("%.3g", worst);
  } else {
    out.detail += "; " + std::to_string(failures) + " of 100 fail (" + std::to_string(full - full_ok) +
                  " with k >= U); " + std::to_string(full_ok) + " of " + std::to_string(full) +
                  " instances with k >= U match";
  }
  return out;
}

Verdict set_cover() {
  Verdict out;
  std::size_t cases = 0, covers = 0;
  for (int n = 1; n <= 4; ++n) {
    const int subsets = (1 << n) - 1;
    for (int b = 1; b <= 4; ++b) {
      // Multisets of b non-empty subsets, as non-decreasing mask sequences.
      std::vector<int> masks(b, 1);
      while (true) {
        std::vector<std::vector<int>> sets;
        for (int m : masks) {
          std::vector<int> s;
          for (int e = 0; e < n; ++e)
            if (m & (1 << e)) s.push_back(e);
          sets.push_back(s);
        }
        for (int k = 1; k <= 4; ++k) {
          const auto inst = build_set_cover_instance(n, sets, k);
          const double j = solve_and_audit(inst)->value(inst.initial_items, 0);
          const bool expected = oracle::has_cover(n, sets, k);
          ++cases;
          covers += expected;
          out.require((j == static_cast<double>(n)) == expected,
                      "mismatch at n=" + std::to_string(n) + " b=" + std::to_string(b) + " k=" + std::to_string(k));
        }
        int pos = b - 1;
        while (pos >= 0 && masks[pos] == subsets) --pos;
        if (pos < 0) break;
        ++masks[pos];
        for (int q = pos + 1; q < b; ++q) masks[q] = masks[pos];
      }
    }
  }
  if (out.pass) out.detail = std::to_string(cases) + " cases (" + std::to_string(covers) + " coverable)";
  return out;
}

SetFunction random_integer_value(RandomStream& rng, std::size_t n) {
  if (rng.bernoulli(0.5)) {
    WeightedCoverage f;
    const auto elements = static_cast<int>(rng.uniform_int(2, 6));
    for (int e = 0; e < elements; ++e) f.element_weights.push_back(static_cast<double>(rng.uniform_int(1, 9)));
    for (std::size_t m = 0; m < n; ++m) {
      std::vector<int> cover;
      for (int e = 0; e < elements; ++e)
        if (rng.bernoulli(0.4)) cover.push_back(e);
      f.covers.push_back(cover);
    }
    return f;
  }
  BudgetedLinear f;
  const auto groups = static_cast<int>(rng.uniform_int(1, 3));
  for (std::size_t m = 0; m < n; ++m) {
    f.groups.push_back(static_cast<int>(rng.uniform_int(0, groups - 1)));
    f.values.push_back(static_cast<double>(rng.uniform_int(1, 9)));
  }
  for (int g = 0; g < groups; ++g) f.budgets.push_back(static_cast<double>(rng.uniform_int(3, 20)));
  return f;
}

// Dense overlapping covers, where greedy choices are frequently wrong.
SetFunction overlapping_coverage(RandomStream& rng, std::size_t n) {
  WeightedCoverage f;
  const auto elements = static_cast<int>(rng.uniform_int(3, 6));
  for (int e = 0; e < elements; ++e) f.element_weights.push_back(static_cast<double>(rng.uniform_int(1, 3)));
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<int> cover;
    for (int e = 0; e < elements; ++e)
      if (rng.bernoulli(0.5)) cover.push_back(e);
    f.covers.push_back(cover);
  }
  return f;
}

Verdict matroids() {
  Verdict out;
  const double e_bound = std::exp(1.0) / (std::exp(1.0) - 1.0);
  double worst_det = 1.0, worst_stoch = 1.0;
  std::size_t exact_cases = 0, stochastic_cases = 0, nontrivial = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream rng(split_seed(0x3a7e01d, seed));
    MatroidParams p;
    p.ground_size = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto n = p.ground_size;
    p.value = random_integer_value(rng, n);
    double exhaustive = 0.0;
    Instance inst;
    if (seed % 2 == 0) {
      p.cardinality = static_cast<int>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
      inst = build_cardinality_matroid_instance(p);
      exhaustive = oracle::best_cardinality(p.value, n, p.cardinality);
    } else {
      std::vector<int> order(n);
      for (std::size_t e = 0; e < n; ++e) order[e] = static_cast<int>(e);
      for (std::size_t e = n; e > 1; --e)
        std::swap(order[e - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(e) - 1))]);
      const auto blocks = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
      p.partition.assign(blocks, {});
      for (std::size_t e = 0; e < n; ++e) p.partition[e < blocks ? e : rng.uniform_int(0, blocks - 1)].push_back(order[e]);
      for (const auto& block : p.partition)
        p.partition_bounds.push_back(static_cast<int>(rng.uniform_int(1, static_cast<std::int64_t>(block.size()))));
      inst = build_partition_matroid_instance(p);
      exhaustive = oracle::best_partition(p.value, n, p.partition, p.partition_bounds);
    }
    const auto table = solve_and_audit(inst);
    const auto myopic = evaluate_and_audit(inst, myopic_policy());
    const double j = table->value(inst.initial_items, 0);
    ++exact_cases;
    out.require(j == exhaustive, "DP " + fmt("%.17g", j) + " != exhaustive " + fmt("%.17g", exhaustive) +
                                     " at seed " + std::to_string(seed));
    const auto scan = scan_ratio(inst, *table, myopic);
    worst_det = std::max(worst_det, scan.max_ratio);
    out.require(scan.max_ratio <= 2.0 + 1e-9 && scan.zero_states == 0,
                "deterministic myopic ratio " + fmt("%.17g", scan.max_ratio) + " at seed " + std::to_string(seed));

    // Stochastic selection over the cardinality reduction with constant success C.
    MatroidParams q;
    q.ground_size = static_cast<std::size_t>(rng.uniform_int(3, 6));
    q.value = overlapping_coverage(rng, q.ground_size);
    q.cardinality = static_cast<int>(rng.uniform_int(2, static_cast<std::int64_t>(q.ground_size) + 1));
    for (double c : {0.5, 1.0}) {
      q.success.assign(static_cast<std::size_t>(q.cardinality), std::vector<double>(q.ground_size, c));
      const auto stoch = build_cardinality_matroid_instance(q);
      const auto opt = solve_and_audit(stoch);
      const auto greedy = evaluate_and_audit(stoch, myopic_policy());
      const auto s = scan_ratio(stoch, *opt, greedy);
      ++stochastic_cases;
      nontrivial += s.max_ratio > 1.0 + 1e-9;
      worst_stoch = std::max(worst_stoch, s.max_ratio);
      out.require(s.max_ratio <= e_bound + 1e-6 && s.zero_states == 0,
                  "stochastic selection ratio " + fmt("%.17g", s.max_ratio) + " (C=" + fmt("%g", c) + ") at seed " +
                      std::to_string(seed));
    }
  }
  if (out.pass)
    out.detail = std::to_string(exact_cases) + " exact matches, max ratio " + fmt("%.6f", worst_det) + "; " +
                 std::to_string(stochastic_cases) + " stochastic selections (" + std::to_string(nontrivial) + " with greedy strictly suboptimal), max ratio " +
                 fmt("%.6f", worst_stoch) + " <= " + fmt("%.6f", e_bound);
  return out;
}

// The yardstick is the standard error of the Monte Carlo mean, sigma / sqrt(n),
// with sigma from an exact second-moment recursion. The sample estimate of it
// collapses to rounding noise when a loss event is rarer than 1 / n.
Verdict simulator_agreement() {
  Verdict out;
  double worst_z = 0.0;
  std::size_t degenerate = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = seed % 2 == 0 ? random_submodular_instance(1000 + seed) : random_linear_decaying_instance(1000 + seed);
    for (const auto& policy : {myopic_policy(), random_policy(seed)}) {
      const std::size_t reps = 10000;
      const double exact = evaluate_policy_exact(inst, policy).value(inst.initial_items, 0);
      oracle::PolicyMoments moments(inst, [&](const ItemVector& x, int t) { return policy(State{x, t}, inst); });
      const double oracle_mean = moments.at(inst.initial_items, 0).first;
      const double se = moments.stddev(inst.initial_items, 0) / std::sqrt(static_cast<double>(reps));
      const auto first = monte_carlo_value(inst, policy, reps, 0x5eed + seed);
      const auto second = monte_carlo_value(inst, policy, reps, 0x5eed + seed);
      const double diff = std::abs(first.mean - exact);
      if (se > 0.0) worst_z = std::max(worst_z, diff / se);
      if (diff > 3.0 * first.standard_error) ++degenerate;
      const std::string tag = policy.name() + " at instance " + std::to_string(seed);
      out.require(std::abs(oracle_mean - exact) <= 1e-9, "exact evaluation disagrees with moment oracle, " + tag);
      out.require(diff <= 3.0 * se + 1e-12 * std::max(1.0, std::abs(exact)),
                  "mean off by " + fmt("%.3g", diff) + " (se " + fmt("%.3g", se) + "), " + tag);
      out.require(eval_summary_to_json(first) == eval_summary_to_json(second), "summaries differ across runs, " + tag);
    }
  }
  if (out.pass)
    out.detail = "40 comparisons, max |z| " + fmt("%.3f", worst_z) + " against exact se (" + std::to_string(degenerate) +
                 " outside 3 sample se: rare-event collapse), summaries reproducible";
  return out;
}

Verdict checker_sensitivity() {
  Verdict out;
  std::size_t tried = 0, non_submodular = 0, found = 0;
  std::string witness;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    RandomStream rng(split_seed(0xc0ffee, seed));
    const ItemVector caps{static_cast<int>(rng.uniform_int(1, 2)), static_cast<int>(rng.uniform_int(1, 2))};
    const int horizon = static_cast<int>(rng.uniform_int(1, 3));
    // Monotone h by taking running maxima of random values over the box.
    const StateIndexer box(caps);
    std::vector<double> h(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto y = box.decode(i);
      double v = std::floor(rng.uniform(0.0, 4.0));
      for (std::size_t m = 0; m < 2; ++m)
        if (y[m] > 0) v = std::max(v, h[i - box.stride(m)]);
      h[i] = v;
    }
    const TabulatedSetFunction as_set{caps, h};
    ++tried;
    if (check_submodular(SubmodularReward{as_set}, caps, 1e-9).pass) continue;
    ++non_submodular;
    auto inst = testing_support::blank(caps, horizon, static_cast<std::size_t>(rng.uniform_int(1, 3)));
    for (int t = 0; t < horizon; ++t)
      for (std::size_t a = 0; a < inst.num_activities(); ++a)
        for (std::size_t m = 0; m < 2; ++m) inst.schedule.set(t, a, m, rng.bernoulli(0.5) ? 1.0 : rng.uniform());
    inst.reward = testing_support::tabulate_difference(caps, horizon, [&](const ItemVector& y) { return h[box.index(y)]; });
    if (!check_assumption1(inst).pass) continue;
    const auto report = check_vfm(inst, solve_clairvoyant(inst), 1e-9);
    if (!report.pass) {
      const auto& v = report.violations.front();
      oracle::RecursiveOptimum rec(inst);
      const double more = rec.value(v.witness[0].vector, v.epoch);
      const double fewer = rec.value(v.witness[1].vector, v.epoch);
      out.require(fewer > more + 1e-9, "oracle does not confirm VFM witness at search seed " + std::to_string(seed));
      if (found == 0) {
        std::ostringstream w;
        w << "first at search seed " << seed << ", t=" << v.epoch << ", gap " << v.gap;
        witness = w.str();
      }
      ++found;
    }
  }
  out.require(found > 0, "no VFM violation found in " + std::to_string(tried) + " candidates");
  if (out.pass)
    out.detail = std::to_string(found) + " of " + std::to_string(non_submodular) +
                 " non-submodular candidates violate VFM (" + witness + ")";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
    double time_limit;  // seconds, 0 = none
  };
  const auto sub_suite = submodular_suite();
  std::vector<Instance> lin_suite;
  for (std::uint64_t seed = 0; seed < 200; ++seed) lin_suite.push_back(random_linear_decaying_instance(seed));

  const std::vector<Criterion> criteria = {
      {"1 worst-case sharpness", worst_case, 1.0},
      {"2 submodular family", [&] { return family_suite(sub_suite); }, 60.0},
      {"3 linear-decaying family", [&] { return family_suite(lin_suite); }, 0.0},
      {"4 approximate oracle", [&] { return approx_oracle(sub_suite); }, 0.0},
      {"5 static-channel broadcast", static_broadcast, 0.0},
      {"6 set-cover reduction", set_cover, 0.0},
      {"7 matroid reductions", matroids, 0.0},
      {"8 simulator vs exact", simulator_agreement, 0.0},
      {"9 checker sensitivity", checker_sensitivity, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && seconds >= c.time_limit) {
      outcome.pass = false;
      outcome.detail += "; runtime " + fmt("%.2f", seconds) + " s exceeds " + fmt("%.0f", c.time_limit) + " s";
    }
    failures += !outcome.pass;
    std::printf("[%s] %s: %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", c.name, outcome.detail.c_str(), seconds);
  }

  const bool audit_ok = audit_log.discrepancies == 0 && audit_log.tables > 0;
  failures += !audit_ok;
  std::printf("[%s] 10 table audit: %zu tables, %zu discrepancies above 1e-12, worst gap %.3g\n",
              audit_ok ? "PASS" : "FAIL", audit_log.tables, audit_log.discrepancies, audit_log.worst_gap);
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}

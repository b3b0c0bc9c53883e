#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace depletion;
using testing_support::blank;
using testing_support::constant_weights;

namespace {

bool has_rule(const ValidationReport& report, const std::string& rule) {
  for (const auto& v : report.violations)
    if (v.rule == rule) return true;
  return false;
}

}  // namespace

TEST(StateIndexer, MixedRadixLayout) {
  const StateIndexer idx({2, 3});
  EXPECT_EQ(idx.size(), 12u);
  EXPECT_EQ(idx.stride(0), 1u);
  EXPECT_EQ(idx.stride(1), 3u);
  EXPECT_EQ(idx.index(ItemVector{1, 2}), 7u);
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(idx.index(idx.decode(i)), i);
  EXPECT_THROW(idx.index(ItemVector{3, 0}), DomainError);
}

TEST(StateIndexer, CheckedSizeDetectsOverflow) {
  const ItemVector caps(40, 63);
  EXPECT_FALSE(StateIndexer::checked_size(caps, 1'000'000).has_value());
  EXPECT_EQ(StateIndexer::checked_size(ItemVector{1, 1}, 10).value(), 4u);
}

TEST(Binomial, PascalTable) {
  EXPECT_DOUBLE_EQ(binomial_coefficient(5, 2), 10.0);
  EXPECT_DOUBLE_EQ(binomial_coefficient(64, 32), 1832624140942590534.0);
  EXPECT_DOUBLE_EQ(binomial_coefficient(3, 4), 0.0);
}

TEST(Validate, WorstCaseInstancePasses) {
  EXPECT_TRUE(validate_instance(build_worst_case_instance(0.1)).ok());
}

TEST(Validate, ProbabilityOutOfRange) {
  auto inst = build_worst_case_instance(0.1);
  inst.schedule.set(0, 0, 0, 1.3);
  const auto report = validate_instance(inst);
  EXPECT_TRUE(has_rule(report, "probability out of [0,1]"));
  EXPECT_THROW(require_valid(inst), ConfigError);
}

TEST(Validate, IncreasingWeights) {
  auto inst = blank({1}, 2, 1);
  inst.reward = LinearDecayingReward{{{1.0, 1.5}}};
  EXPECT_TRUE(has_rule(validate_instance(inst), "w not non-increasing in t"));
}

TEST(Validate, NegativeWeightsAndCapacity) {
  auto inst = blank({1}, 1, 1);
  inst.reward = LinearDecayingReward{{{-1.0}}};
  EXPECT_TRUE(has_rule(validate_instance(inst), "w negative"));
  auto big = blank({65}, 1, 1);
  big.reward = constant_weights({1.0}, 1);
  EXPECT_TRUE(has_rule(validate_instance(big), "capacity outside [1, 64]"));
}

TEST(Validate, ArrivalWindowMasking) {
  auto inst = blank({1}, 3, 1);
  inst.reward = constant_weights({1.0}, 3);
  inst.arrivals = std::vector<int>{1};
  inst.deadlines = std::vector<int>{2};
  inst.schedule.set(1, 0, 0, 0.5);
  EXPECT_TRUE(validate_instance(inst).ok());
  inst.schedule.set(2, 0, 0, 0.5);
  EXPECT_TRUE(has_rule(validate_instance(inst), "nonzero probability outside [arrival, deadline)"));
}

TEST(Validate, TabulatedTerminalReward) {
  auto inst = blank({1}, 1, 1);
  TabulatedReward g({1}, 1);
  g.set(ItemVector{1}, ItemVector{0}, 1, 0.5);
  inst.reward = g;
  EXPECT_TRUE(has_rule(validate_instance(inst), "terminal reward nonzero"));
}

TEST(Validate, ActivityCap) {
  auto inst = blank({1}, 1, 3);
  inst.reward = constant_weights({1.0}, 1);
  Limits limits;
  limits.max_activities = 2;
  EXPECT_TRUE(has_rule(validate_instance(inst, limits), "activity count exceeds cap"));
}

TEST(Pmf, BinomialHalf) {
  auto inst = blank({2}, 1, 1);
  inst.reward = constant_weights({1.0}, 1);
  inst.schedule.set(0, 0, 0, 0.5);
  const auto pmf = depletion_pmf({{2}, 0}, 0, inst);
  ASSERT_EQ(pmf.size(), 3u);
  EXPECT_EQ(pmf[0].depleted, ItemVector{0});
  EXPECT_NEAR(pmf[0].probability, 0.25, 1e-15);
  EXPECT_NEAR(pmf[1].probability, 0.5, 1e-15);
  EXPECT_NEAR(pmf[2].probability, 0.25, 1e-15);
}

TEST(Pmf, WorstCaseActivityOneIsDeterministic) {
  const auto inst = build_worst_case_instance(0.1);
  const auto pmf = depletion_pmf({{1, 1}, 0}, 0, inst);
  ASSERT_EQ(pmf.size(), 1u);
  EXPECT_EQ(pmf[0].depleted, (ItemVector{1, 0}));
  EXPECT_DOUBLE_EQ(pmf[0].probability, 1.0);
}

TEST(Pmf, MatchesFactorialOracle) {
  auto inst = blank({1, 2}, 1, 1);
  inst.reward = constant_weights({1.0, 1.0}, 1);
  inst.schedule.set(0, 0, 0, 0.3);
  inst.schedule.set(0, 0, 1, 0.6);
  const auto pmf = depletion_pmf({{1, 2}, 0}, 0, inst);
  const auto expected = oracle::joint_pmf({1, 2}, {0.3, 0.6});
  ASSERT_EQ(pmf.size(), 6u);
  ASSERT_EQ(expected.size(), 6u);
  for (const auto& o : pmf) EXPECT_NEAR(o.probability, expected.at(o.depleted), 1e-15);
  // Lexicographic with the last type varying fastest.
  EXPECT_EQ(pmf[1].depleted, (ItemVector{0, 1}));
  EXPECT_EQ(pmf[3].depleted, (ItemVector{1, 0}));
}

TEST(Pmf, SumsToOneOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = random_submodular_instance(seed);
    const StateIndexer idx(inst.capacities);
    for (int t = 0; t < inst.horizon; ++t)
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t a = 0; a < inst.num_activities(); ++a) {
          double total = 0.0;
          for (const auto& o : depletion_pmf({idx.decode(i), t}, a, inst)) total += o.probability;
          EXPECT_NEAR(total, 1.0, 1e-12);
        }
  }
}

TEST(Pmf, EnumerationCap) {
  const ItemVector items(4, 9);
  const std::vector<double> p(4, 0.5);
  EXPECT_THROW(for_each_outcome(items, p, [](std::span<const int>, double) {}, 1000), EnumerationCapExceeded);
}

TEST(Sample, CertaintyAndImpossibility) {
  auto inst = blank({3, 2}, 1, 2);
  inst.reward = constant_weights({1.0, 1.0}, 1);
  inst.schedule.set(0, 0, 0, 1.0);
  inst.schedule.set(0, 0, 1, 1.0);
  RandomStream rng(5);
  EXPECT_EQ(sample_depletion({{3, 1}, 0}, 0, inst, rng), (ItemVector{3, 1}));
  EXPECT_EQ(sample_depletion({{3, 1}, 0}, 1, inst, rng), (ItemVector{0, 0}));
}

TEST(Sample, ChiSquareAgainstPmf) {
  auto inst = blank({2}, 1, 1);
  inst.reward = constant_weights({1.0}, 1);
  inst.schedule.set(0, 0, 0, 0.5);
  RandomStream rng(20240101);
  std::vector<double> counts(3, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[sample_depletion({{2}, 0}, 0, inst, rng)[0]] += 1.0;
  // Each cell within 3 sigma and the 2-dof statistic below the 0.999 quantile.
  const std::vector<double> p{0.25, 0.5, 0.25};
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(counts[k] - n * p[k]), 3.0 * std::sqrt(n * p[k] * (1 - p[k])));
  EXPECT_LT(oracle::chi_square(counts, p), 13.8155);
}

TEST(Reward, WorstCaseStep) {
  const auto inst = build_worst_case_instance(0.1);
  EXPECT_DOUBLE_EQ(reward(ItemVector{1, 1}, ItemVector{0, 1}, 0, inst), 1.0);
  EXPECT_DOUBLE_EQ(reward(ItemVector{1, 1}, ItemVector{0, 0}, 2, inst), 0.0);
  EXPECT_DOUBLE_EQ(reward(ItemVector{1, 1}, ItemVector{1, 1}, 1, inst), 0.0);
  EXPECT_THROW(reward(ItemVector{0, 1}, ItemVector{1, 1}, 0, inst), DomainError);
}

TEST(Reward, BudgetTruncatesTotal) {
  auto inst = blank({1, 1}, 2, 1);
  inst.reward = SubmodularReward{BudgetedLinear{{0, 0}, {3.0, 3.0}, {5.0}}};
  const double first = reward(ItemVector{1, 1}, ItemVector{0, 1}, 0, inst);
  const double second = reward(ItemVector{0, 1}, ItemVector{0, 0}, 1, inst);
  EXPECT_DOUBLE_EQ(first, 3.0);
  EXPECT_DOUBLE_EQ(first + second, 5.0);
}

TEST(Reward, NoDepletionNoRewardAndTelescoping) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_submodular_instance(seed);
    const auto& w = std::get<SubmodularReward>(inst.reward).w;
    RandomStream rng(seed);
    ItemVector x = inst.capacities;
    double total = 0.0;
    for (int t = 0; t < inst.horizon; ++t) {
      EXPECT_EQ(reward(x, x, t, inst), 0.0);
      ItemVector xn = x;
      for (auto& v : xn) v = static_cast<int>(rng.uniform_int(0, v));
      total += reward(x, xn, t, inst);
      x = xn;
    }
    ItemVector y(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) y[m] = inst.capacities[m] - x[m];
    EXPECT_NEAR(total, oracle::set_value(w, y) - oracle::set_value(w, ItemVector(x.size(), 0)), 1e-12);
  }
}

TEST(ExpectedReward, WorstCase) {
  const auto inst = build_worst_case_instance(0.1);
  EXPECT_DOUBLE_EQ(expected_one_step_reward({{1, 1}, 0}, 0, inst), 1.0);
  EXPECT_NEAR(expected_one_step_reward({{1, 1}, 0}, 1, inst), 0.9, 1e-15);
  auto zero = inst;
  testing_support::fill(zero, 0.0);
  EXPECT_EQ(expected_one_step_reward({{1, 1}, 0}, 0, zero), 0.0);
}

TEST(ExpectedReward, FastPathMatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (const auto& inst : {random_linear_decaying_instance(seed), random_submodular_instance(seed)}) {
      const StateIndexer idx(inst.capacities);
      for (int t = 0; t < inst.horizon; ++t)
        for (std::size_t i = 0; i < idx.size(); ++i)
          for (std::size_t a = 0; a < inst.num_activities(); ++a) {
            const State s{idx.decode(i), t};
            const double fast = expected_one_step_reward(s, a, inst);
            EXPECT_NEAR(fast, expected_one_step_reward_enumerated(s, a, inst), 1e-12);
            EXPECT_NEAR(fast, oracle::expected_reward(inst, s.items, t, a), 1e-12);
          }
    }
  }
}

TEST(Transitions, WithStep) {
  EXPECT_EQ(apply_depletion_with_step({{1, 1}, 0}, ItemVector{1, 0}), (State{{0, 1}, 1}));
  EXPECT_EQ(apply_depletion_with_step({{1, 1}, 0}, ItemVector{0, 0}), (State{{1, 1}, 1}));
  EXPECT_EQ(apply_depletion_with_step({{1, 1}, 0}, ItemVector{3, 0}), (State{{0, 1}, 1}));
}

TEST(Transitions, NoStep) {
  EXPECT_EQ(apply_depletion_no_step({{2, 1}, 3}, ItemVector{1, 1}), (State{{1, 0}, 3}));
  EXPECT_EQ(apply_depletion_no_step({{2, 1}, 3}, ItemVector{0, 0}), (State{{2, 1}, 3}));
}

TEST(Transitions, Composition) {
  const State s{{2, 1, 2}, 1};
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 3; ++c) {
        const ItemVector beta{a, b, c};
        EXPECT_EQ(apply_depletion_no_step(apply_depletion_with_step(s, ItemVector{0, 0, 0}), beta),
                  apply_depletion_with_step(s, beta));
      }
}

TEST(Fingerprint, IgnoresLabelsAndMetadata) {
  auto a = build_worst_case_instance(0.1);
  auto b = a;
  b.metadata["note"] = "x";
  b.activities = {"first", "second"};
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  b.schedule.set(1, 1, 1, 0.0);
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  b.schedule.set(1, 1, 0, 0.5);
  EXPECT_NE(fingerprint(a), fingerprint(b));
  EXPECT_NE(fingerprint(build_worst_case_instance(0.1)), fingerprint(build_worst_case_instance(0.2)));
}

TEST(RandomStream, SplitSeedIsStable) {
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_NE(split_seed(1, 0), split_seed(1, 1));
  RandomStream a(3), b(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform_int(0, 6), b.uniform_int(0, 6));
}

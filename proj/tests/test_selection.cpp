#include "powershap/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "powershap/errors.hpp"
#include "powershap/rng.hpp"
#include "powershap/stats.hpp"
#include "support/fixtures.hpp"

namespace powershap {
namespace {

// Builds an impact matrix from feature columns plus a probe column.
ImpactMatrix impacts(const std::vector<std::vector<double>>& features,
                     const std::vector<double>& probe) {
  Matrix values(probe.size(), features.size() + 1);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    for (std::size_t j = 0; j < features.size(); ++j) values(i, j) = features[j][i];
    values(i, features.size()) = probe[i];
  }
  return ImpactMatrix(std::move(values));
}

models::LearnerSpec quick_learner() {
  models::LearnerSpec spec;
  spec.n_estimators = 30;
  spec.max_depth = 3;
  return spec;
}

TEST(Analyze, FeatureEqualToProbe) {
  std::vector<double> probe{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto out = analyze(impacts({probe}, probe), 0.01, 0.99);
  EXPECT_EQ(out.probe_mean, 5.5);
  EXPECT_EQ(out.report.p_value[0], 0.5);
  EXPECT_EQ(out.report.effect_size[0], 0.0);
  EXPECT_EQ(out.report.required_iterations[0], stats::kUnattainable);
}

TEST(Analyze, AboveAndBelowProbeMean) {
  const std::vector<double> probe{0.1, 0.3, 0.2, 0.4};
  const std::vector<double> above{0.5, 0.6, 0.55, 0.7};
  const std::vector<double> below{0.01, 0.02, 0.05, 0.03};
  const auto out = analyze(impacts({above, below}, probe), 0.01, 0.99);
  EXPECT_EQ(out.report.p_value[0], 0.0);
  EXPECT_EQ(out.report.p_value[1], 1.0);
  EXPECT_GT(out.report.effect_size[0], 0.0);
  EXPECT_LT(out.report.effect_size[1], 0.0);
  EXPECT_DOUBLE_EQ(out.report.mean_impact[0], 0.5875);
  EXPECT_EQ(out.report.required_iterations[1], stats::kUnattainable);
  EXPECT_TRUE(std::isfinite(out.report.required_iterations[0]));
}

TEST(Analyze, NorthCorrectedStyle) {
  const std::vector<double> probe{0.1, 0.3, 0.2, 0.4};
  const std::vector<double> above{0.5, 0.6, 0.55, 0.7};
  const auto out = analyze(impacts({above}, probe), 0.01, 0.99, PValueStyle::NorthCorrected);
  EXPECT_DOUBLE_EQ(out.report.p_value[0], 0.2);
}

TEST(Analyze, ConstantColumnsMapToBounds) {
  const std::vector<double> probe(5, 1.0);
  const auto out =
      analyze(impacts({std::vector<double>(5, 2.0), std::vector<double>(5, 0.5),
                       std::vector<double>(5, 1.0)},
                      probe),
              0.01, 0.99);
  EXPECT_EQ(out.report.effect_size[0], std::numeric_limits<double>::infinity());
  EXPECT_EQ(out.report.required_iterations[0], stats::kMinIterations);
  EXPECT_EQ(out.report.effect_size[1], -std::numeric_limits<double>::infinity());
  EXPECT_EQ(out.report.required_iterations[1], stats::kUnattainable);
  EXPECT_EQ(out.report.required_iterations[2], stats::kUnattainable);
  EXPECT_TRUE(out.exceeds_probe[0]);
  EXPECT_FALSE(out.exceeds_probe[2]);
}

TEST(Analyze, RequiresTwoIterations) {
  try {
    analyze(impacts({{1.0}}, {0.5}), 0.01, 0.99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewIterations);
  }
}

TEST(Analyze, DegenerateAlphaLeavesRequiredUndefined) {
  const auto out = analyze(impacts({{1, 2, 3}}, {0.5, 0.6, 0.1}), 0.0, 0.99);
  EXPECT_TRUE(std::isnan(out.report.required_iterations[0]));
}

TEST(Analyze, RandomMatricesRespectReportInvariants) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t iterations = 2 + rng.below(30);
    const std::size_t m = 1 + rng.below(6);
    Matrix values(iterations, m + 1);
    for (std::size_t i = 0; i < iterations; ++i) {
      for (std::size_t j = 0; j <= m; ++j) values(i, j) = rng.uniform() * (1.0 + j);
    }
    const auto out = analyze(ImpactMatrix(values), 0.05, 0.9);
    ASSERT_EQ(out.report.size(), m);
    EXPECT_EQ(out.report.effect_size.size(), m);
    EXPECT_EQ(out.report.required_iterations.size(), m);
    for (std::size_t j = 0; j < m; ++j) {
      const double k = std::round(out.report.p_value[j] * static_cast<double>(iterations));
      EXPECT_EQ(out.report.p_value[j], k / static_cast<double>(iterations));
      EXPECT_GE(out.report.mean_impact[j], 0.0);
      EXPECT_GE(out.report.required_iterations[j], stats::kMinIterations);
    }
  }
}

TEST(SelectFixed, FindsExactSignal) {
  const auto x = fixtures::normal_matrix(1000, 10, 5);
  const auto data = fixtures::dataset(x, [](auto row) { return row[0]; }, Task::Regression);
  const auto result = select_fixed(data, models::LearnerSpec{}, 10, 0.01, 0);
  EXPECT_TRUE(std::count(result.selected.begin(), result.selected.end(), 0u) == 1);
  EXPECT_EQ(result.iterations_performed, 10u);
  EXPECT_FALSE(result.truncated);
  for (auto j : result.selected) EXPECT_LT(result.report.p_value[j], 0.01);
  ASSERT_EQ(result.selected_names.size(), result.selected.size());
  EXPECT_EQ(result.selected_names.front(), "x0");
}

TEST(SelectFixed, AlphaExtremes) {
  const auto data = fixtures::dataset(fixtures::normal_matrix(300, 5, 6),
                                      [](auto row) { return row[1] - row[3]; },
                                      Task::BinaryClassification);
  const auto none = select_fixed(data, quick_learner(), 5, 0.0, 1);
  EXPECT_TRUE(none.selected.empty());
  const auto all = select_fixed(data, quick_learner(), 5, 1.0, 1);
  std::vector<std::size_t> expected;
  for (std::size_t j = 0; j < 5; ++j) {
    if (all.report.p_value[j] < 1.0) expected.push_back(j);
  }
  EXPECT_EQ(all.selected, expected);
  // Same seed, same impacts: only the threshold differs.
  EXPECT_EQ(none.report.p_value, all.report.p_value);
}

TEST(SelectFixed, StrictThreshold) {
  // p-values are multiples of 1/5; alpha = 0.2 must exclude p = 0.2.
  const auto data = fixtures::dataset(fixtures::normal_matrix(300, 6, 7),
                                      [](auto row) { return row[0] + 0.2 * row[1]; },
                                      Task::Regression);
  const auto result = select_fixed(data, quick_learner(), 5, 0.2, 2);
  for (auto j : result.selected) EXPECT_LT(result.report.p_value[j], 0.2);
}

TEST(SelectAutomatic, DominantFeatureStopsAfterInitialBlock) {
  const auto x = fixtures::normal_matrix(600, 5, 8);
  const auto data = fixtures::dataset(x, [](auto row) { return 3.0 * row[2]; },
                                      Task::BinaryClassification);
  PowershapConfig config;
  const auto result = select_automatic(data, models::LearnerSpec{}, config);
  EXPECT_EQ(result.iterations_performed, 10u);
  EXPECT_NE(std::find(result.selected.begin(), result.selected.end(), 2u), result.selected.end());
  EXPECT_FALSE(result.truncated);
}

TEST(SelectAutomatic, NoiseStopsAfterInitialBlock) {
  const auto data = fixtures::null_classification(400, 5, 9);
  const auto result = select_automatic(data, quick_learner(), PowershapConfig{});
  EXPECT_EQ(result.iterations_performed, 10u);
  EXPECT_TRUE(result.selected.empty());
}

TEST(SelectAutomatic, LoopCoversDemandOrTruncates) {
  // Very weak second signals: some runs select a feature whose effect size
  // demands more than the initial block.
  std::size_t grown = 0;
  for (double weak : {0.01, 0.02, 0.03, 0.04}) {
    for (std::uint64_t seed : {10, 11, 12}) {
      const auto x = fixtures::normal_matrix(400, 6, seed);
      const auto data = fixtures::dataset(
          x, [weak](auto row) { return row[0] + weak * row[1]; }, Task::Regression);
      PowershapConfig config;
      config.max_iterations = 60;
      const auto result = select_automatic(data, quick_learner(), config);
      EXPECT_GE(result.iterations_performed, 10u);
      EXPECT_LE(result.iterations_performed, config.max_iterations);
      grown += result.iterations_performed > 10;
      if (result.truncated) continue;
      for (auto j : result.selected) {
        const double required = result.report.required_iterations[j];
        if (std::isfinite(required)) {
          EXPECT_GE(static_cast<double>(result.iterations_performed), std::ceil(required));
        }
      }
    }
  }
  EXPECT_GT(grown, 0u);
}

TEST(SelectAutomatic, TruncationIsFlagged) {
  const auto x = fixtures::normal_matrix(400, 6, 10);
  const auto data = fixtures::dataset(
      x, [](auto row) { return row[0] + 0.25 * row[1] + 0.12 * row[2]; }, Task::Regression);
  PowershapConfig config;
  config.alpha = 0.1;
  config.required_power = 0.9;
  config.max_iterations = 12;
  const auto result = select_automatic(data, quick_learner(), config);
  EXPECT_LE(result.iterations_performed, 12u);
  if (result.iterations_performed == 12u) {
    double demand = 0.0;
    for (auto j : result.selected) {
      const double required = result.report.required_iterations[j];
      if (std::isfinite(required)) demand = std::max(demand, std::ceil(required));
    }
    EXPECT_EQ(result.truncated, demand > 12.0);
  }
}

TEST(SelectAutomatic, Reproducible) {
  const auto data = fixtures::dataset(fixtures::normal_matrix(300, 4, 11),
                                      [](auto row) { return row[0] - row[1]; },
                                      Task::BinaryClassification);
  EXPECT_EQ(select_automatic(data, quick_learner(), PowershapConfig{}),
            select_automatic(data, quick_learner(), PowershapConfig{}));
}

TEST(SelectConvergence, EmptyFirstRoundMatchesAutomatic) {
  const auto data = fixtures::null_classification(400, 5, 12);
  PowershapConfig config;
  config.mode = SelectionMode::Convergence;
  const auto conv = select_convergence(data, quick_learner(), config);
  const auto autom = select_automatic(data, quick_learner(), config);
  ASSERT_EQ(conv.rounds.size(), 1u);
  EXPECT_EQ(conv.selected, autom.selected);
  EXPECT_EQ(conv.report, autom.report);
  EXPECT_EQ(conv.iterations_performed, autom.iterations_performed);
}

TEST(SelectConvergence, KeepsEarlierSelectionsAndDisjointRounds) {
  const auto x = fixtures::normal_matrix(800, 6, 13);
  const auto data = fixtures::dataset(x, [](auto row) { return row[0] + 0.01 * row[1]; },
                                      Task::Regression);
  PowershapConfig config;
  config.mode = SelectionMode::Convergence;
  const auto result = select(data, quick_learner(), config);
  ASSERT_GE(result.rounds.size(), 1u);
  const auto& first = result.rounds.front().selected;
  EXPECT_NE(std::find(first.begin(), first.end(), 0u), first.end());

  std::set<std::size_t> seen;
  std::size_t total_iterations = 0;
  for (const auto& round : result.rounds) {
    for (auto j : round.selected) EXPECT_TRUE(seen.insert(j).second);
    for (auto j : seen) {
      if (std::find(round.selected.begin(), round.selected.end(), j) != round.selected.end()) {
        continue;
      }
      // Features selected in earlier rounds are not offered again.
      if (&round != &result.rounds.front()) {
        EXPECT_EQ(std::find(round.features.begin(), round.features.end(), j),
                  round.features.end());
      }
    }
    total_iterations += round.iterations_performed;
  }
  EXPECT_EQ(std::vector<std::size_t>(seen.begin(), seen.end()), result.selected);
  EXPECT_TRUE(result.rounds.back().selected.empty() ||
              result.rounds.back().features.size() == result.rounds.back().selected.size());
  EXPECT_EQ(total_iterations, result.iterations_performed);
}

TEST(Select, DispatchesOnMode) {
  const auto data = fixtures::dataset(fixtures::normal_matrix(300, 4, 14),
                                      [](auto row) { return row[0]; }, Task::Regression);
  PowershapConfig config;
  config.mode = SelectionMode::Fixed;
  config.fixed_iterations = 4;
  const auto result = select(data, quick_learner(), config);
  EXPECT_EQ(result.iterations_performed, 4u);
  EXPECT_TRUE(result.rounds.empty());
}

TEST(Select, InvalidConfigRejected) {
  const auto data = fixtures::null_classification(50, 2, 1);
  PowershapConfig config;
  config.max_iterations = 5;
  EXPECT_THROW(select(data, quick_learner(), config), Error);
}

}  // namespace
}  // namespace powershap

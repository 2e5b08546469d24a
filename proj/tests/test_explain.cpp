#include "powershap/explain.hpp"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "powershap/errors.hpp"
#include "powershap/parallel.hpp"
#include "support/fixtures.hpp"

namespace powershap {
namespace {

ExplainPlan small_plan(std::size_t iterations) {
  ExplainPlan plan;
  plan.iterations = iterations;
  plan.learner.n_estimators = 15;
  plan.learner.max_depth = 3;
  return plan;
}

Dataset small_data(Task task = Task::BinaryClassification, std::size_t n = 200) {
  return fixtures::dataset(fixtures::normal_matrix(n, 4, 3),
                           [](auto row) { return row[0] + 0.5 * row[2]; }, task);
}

TEST(Explain, ShapeAndNonNegative) {
  const auto values = explain(small_plan(3), small_data());
  EXPECT_EQ(values.iterations(), 3u);
  EXPECT_EQ(values.values().cols(), 5u);
  for (double v : values.values().data()) EXPECT_GE(v, 0.0);
}

TEST(Explain, Deterministic) {
  const auto data = small_data(Task::Regression);
  EXPECT_EQ(explain(small_plan(4), data), explain(small_plan(4), data));
}

TEST(Explain, ThreadCountDoesNotChangeResult) {
  const auto data = small_data();
  auto plan = small_plan(6);
  plan.threads = 1;
  const auto serial = explain(plan, data);
  plan.threads = 4;
  EXPECT_EQ(serial, explain(plan, data));
}

TEST(Explain, BaseSeedShiftsIterations) {
  const auto data = small_data();
  auto plan = small_plan(3);
  plan.base_seed = 1;
  const auto shifted = explain(plan, data);
  const auto plain = explain(small_plan(4), data);
  // Iteration i with base seed 1 uses seed i + 1, i.e. plain iteration i + 1.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(shifted.values()(i, j), plain.values()(i + 1, j));
  }
}

TEST(ExplainAppend, ZeroExtraIsIdentity) {
  const auto data = small_data();
  const auto values = explain(small_plan(3), data);
  EXPECT_EQ(explain_append(values, 0, small_plan(3), data), values);
}

TEST(ExplainAppend, PrefixStableAndEqualToLongerRun) {
  const auto data = small_data();
  const auto first = explain(small_plan(10), data);
  const auto combined = explain_append(first, 5, small_plan(10), data);
  ASSERT_EQ(combined.iterations(), 15u);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(combined.values()(i, j), first.values()(i, j));
  }
  EXPECT_EQ(combined, explain(small_plan(15), data));
}

TEST(ExplainAppend, RejectsMismatchedWidth) {
  const auto data = small_data();
  const ImpactMatrix wrong(Matrix(2, 3, 1.0));
  EXPECT_THROW(explain_append(wrong, 1, small_plan(2), data), Error);
}

TEST(Split, DisjointCoverAndStratified) {
  const auto data = small_data(Task::BinaryClassification, 203);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto split = split_rows(data, 0.2, seed);
    EXPECT_TRUE(std::is_sorted(split.train.begin(), split.train.end()));
    EXPECT_TRUE(std::is_sorted(split.validation.begin(), split.validation.end()));
    std::set<std::size_t> all(split.train.begin(), split.train.end());
    for (auto i : split.validation) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), 203u);
    std::size_t train_ones = 0;
    for (auto i : split.train) train_ones += data.target()[i] == 1.0;
    EXPECT_GT(train_ones, 0u);
    EXPECT_LT(train_ones, split.train.size());
  }
}

TEST(Split, RegressionUsesRequestedFraction) {
  const auto split = split_rows(small_data(Task::Regression, 100), 0.2, 5);
  EXPECT_EQ(split.validation.size(), 20u);
  EXPECT_EQ(split.train.size(), 80u);
}

TEST(Split, KeepsRareClassInTraining) {
  Matrix x = fixtures::normal_matrix(10, 1, 0);
  std::vector<double> y(10, 0.0);
  y[3] = 1.0;
  const auto data = validate_dataset(x, y, {"a"}, Task::BinaryClassification);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto split = split_rows(data, 0.5, seed);
    EXPECT_NE(std::find(split.train.begin(), split.train.end(), 3u), split.train.end());
  }
}

TEST(Split, TooSmall) {
  const auto data = validate_dataset(Matrix(2, 1, 0.0), {1.0, 2.0}, {"a"}, Task::Regression);
  try {
    split_rows(data, 0.2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SplitTooSmall);
  }
  EXPECT_THROW(split_rows(data, 0.0, 1), Error);
}

TEST(Probe, UniformRangeAndFreshPerSeed) {
  const auto a = draw_probe(500, 1);
  const auto b = draw_probe(500, 2);
  EXPECT_NE(a, b);
  EXPECT_EQ(a, draw_probe(500, 1));
  for (double v : a) {
    EXPECT_GE(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Parallel, RunsEveryIndexOnceAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(100, [&](std::size_t i) { hits[i] += 1; }, 4);
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_THROW(parallel_for(
                   10, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }, 3),
               std::runtime_error);
}

}  // namespace
}  // namespace powershap

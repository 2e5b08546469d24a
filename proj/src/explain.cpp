#include "powershap/explain.hpp"

#include <algorithm>
#include <cmath>

#include "powershap/errors.hpp"
#include "powershap/parallel.hpp"
#include "powershap/rng.hpp"

namespace powershap {

namespace {

constexpr std::uint64_t kProbeStream = 0;
constexpr std::uint64_t kSplitStream = 1;

std::size_t validation_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

SplitIndices split_rows(const Dataset& data, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "val_fraction must lie in (0, 1)");
  }
  Rng rng(mix_seed(seed, kSplitStream));
  SplitIndices split;
  const std::size_t n = data.n_samples();

  auto take = [&](std::vector<std::size_t> pool, std::size_t n_val) {
    rng.shuffle(std::span<std::size_t>(pool));
    split.validation.insert(split.validation.end(), pool.begin(), pool.begin() + n_val);
    split.train.insert(split.train.end(), pool.begin() + n_val, pool.end());
  };

  if (data.task() == Task::BinaryClassification) {
    std::vector<std::size_t> zeros, ones;
    for (std::size_t i = 0; i < n; ++i) (data.target()[i] == 1.0 ? ones : zeros).push_back(i);
    for (auto* pool : {&zeros, &ones}) {
      // Each class keeps at least one training row.
      const std::size_t n_val = std::min(validation_count(pool->size(), val_fraction),
                                         pool->size() - 1);
      take(*pool, n_val);
    }
  } else {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    take(std::move(all), std::min(validation_count(n, val_fraction), n));
  }

  if (split.validation.empty() || split.train.size() < 2) {
    throw Error(ErrorCode::SplitTooSmall,
                "val_fraction " + std::to_string(val_fraction) + " on " + std::to_string(n) +
                    " rows leaves " + std::to_string(split.train.size()) + " training and " +
                    std::to_string(split.validation.size()) + " validation rows");
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

std::vector<double> draw_probe(std::size_t n, std::uint64_t seed) {
  Rng rng(mix_seed(seed, kProbeStream));
  std::vector<double> probe(n);
  for (auto& v : probe) v = rng.uniform(-1.0, 1.0);
  return probe;
}

std::vector<double> explain_iteration(const ExplainPlan& plan, const Dataset& data,
                                      std::size_t iteration) {
  const std::uint64_t seed = static_cast<std::uint64_t>(iteration) + plan.base_seed;
  const std::size_t n = data.n_samples();
  const std::size_t m = data.n_features();

  const auto probe = draw_probe(n, seed);
  const auto split = split_rows(data, plan.val_fraction, seed);

  auto build = [&](const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), m + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto src = data.features().row(rows[r]);
      auto dst = out.row(r);
      std::copy(src.begin(), src.end(), dst.begin());
      dst[m] = probe[rows[r]];
    }
    return out;
  };
  const Matrix train_x = build(split.train);
  const Matrix val_x = build(split.validation);
  std::vector<double> train_y(split.train.size());
  for (std::size_t r = 0; r < split.train.size(); ++r) train_y[r] = data.target()[split.train[r]];

  const auto model = models::fit(plan.learner, train_x, train_y, data.task(), seed);
  const Matrix phi = models::shap_values(model, val_x);

  std::vector<double> impact(m + 1, 0.0);
  for (std::size_t r = 0; r < phi.rows(); ++r) {
    for (std::size_t j = 0; j <= m; ++j) impact[j] += std::fabs(phi(r, j));
  }
  for (auto& v : impact) v /= static_cast<double>(phi.rows());
  return impact;
}

namespace {

ImpactMatrix run_iterations(const ExplainPlan& plan, const Dataset& data, std::size_t first,
                            std::size_t count) {
  plan.learner.validate();
  Matrix values(count, data.n_features() + 1);
  parallel_for(
      count,
      [&](std::size_t k) {
        const auto row = explain_iteration(plan, data, first + k);
        std::copy(row.begin(), row.end(), values.row(k).begin());
      },
      plan.threads);
  return ImpactMatrix(std::move(values));
}

}  // namespace

ImpactMatrix explain(const ExplainPlan& plan, const Dataset& data) {
  if (plan.iterations == 0) {
    throw Error(ErrorCode::TooFewIterations, "explain needs at least one iteration");
  }
  return run_iterations(plan, data, 1, plan.iterations);
}

ImpactMatrix explain_append(const ImpactMatrix& existing, std::size_t extra_iterations,
                            const ExplainPlan& plan, const Dataset& data) {
  if (existing.iterations() > 0 && existing.n_features() != data.n_features()) {
    throw Error(ErrorCode::DimensionMismatch, "impact matrix does not match the dataset");
  }
  ImpactMatrix combined = existing;
  if (extra_iterations == 0) return combined;
  combined.append(run_iterations(plan, data, existing.iterations() + 1, extra_iterations));
  return combined;
}

}  // namespace powershap

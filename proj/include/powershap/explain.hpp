#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "powershap/domain.hpp"
#include "powershap/models.hpp"

namespace powershap {

struct ExplainPlan {
  std::size_t iterations = 10;
  models::LearnerSpec learner;
  std::uint64_t base_seed = 0;
  double val_fraction = 0.2;
  /// Worker threads (0 = POWERSHAP_THREADS / hardware default). Does not
  /// affect results.
  std::size_t threads = 0;
};

/// Train/validation row indices for one iteration, both ascending.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Shuffled split seeded by `seed`, stratified by class for classification.
/// Throws SplitTooSmall if validation would be empty, training would have
/// fewer than 2 rows, or a class would vanish from training.
SplitIndices split_rows(const Dataset& data, double val_fraction, std::uint64_t seed);

/// Uniform [-1, 1] probe column of length n for the iteration seed.
std::vector<double> draw_probe(std::size_t n, std::uint64_t seed);

/// Runs iterations 1..plan.iterations. Iteration i uses seed i + base_seed to
/// draw the probe and split the rows, fits on the training part with the
/// probe appended as the last column, and records the mean |SHAP| of every
/// column over the validation rows.
ImpactMatrix explain(const ExplainPlan& plan, const Dataset& data);

/// Appends `extra_iterations` rows, continuing the iteration counter after
/// existing.iterations() so no seed repeats. Existing rows are untouched.
ImpactMatrix explain_append(const ImpactMatrix& existing, std::size_t extra_iterations,
                            const ExplainPlan& plan, const Dataset& data);

/// Mean |SHAP| row for a single 1-based iteration index.
std::vector<double> explain_iteration(const ExplainPlan& plan, const Dataset& data,
                                      std::size_t iteration);

}  // namespace powershap

#pragma once

#include <cstdint>

#include "powershap/domain.hpp"
#include "powershap/models.hpp"

namespace powershap {

struct AnalysisOutput {
  FeatureReport report;
  double probe_mean = 0.0;
  /// Per feature: some iteration's impact is strictly above probe_mean.
  std::vector<bool> exceeds_probe;
};

/// Per-feature p-value, effect size against the probe and required
/// iterations. The p-value is the fraction of iterations in which the
/// feature's impact fell below the probe's mean impact.
///
/// Constant impact columns (zero pooled deviation) get an infinite effect
/// size and 2 required iterations when the feature beats the probe mean, and
/// the unattainable marker otherwise.
AnalysisOutput analyze(const ImpactMatrix& values, double alpha, double target_power,
                       PValueStyle style = PValueStyle::Anticonservative);

/// Single explain block of `iterations`; selects p < alpha. Features whose
/// impact never rises above the probe mean are left out even at p = 0, which
/// happens when neither they nor the probe are ever used by the models.
SelectionResult select_fixed(const Dataset& data, const models::LearnerSpec& learner,
                             std::size_t iterations, double alpha, std::uint64_t seed,
                             const PowershapConfig& config = {});

/// Grows the iteration count until every significant feature's required
/// iterations are covered, or max_iterations is reached.
SelectionResult select_automatic(const Dataset& data, const models::LearnerSpec& learner,
                                 const PowershapConfig& config);

/// Repeats automatic mode on the remaining features until a round selects
/// nothing.
SelectionResult select_convergence(const Dataset& data, const models::LearnerSpec& learner,
                                   const PowershapConfig& config);

/// Dispatches on config.mode.
SelectionResult select(const Dataset& data, const models::LearnerSpec& learner,
                       const PowershapConfig& config);

}  // namespace powershap

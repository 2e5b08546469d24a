#include "powershap/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "powershap/errors.hpp"
#include "powershap/explain.hpp"
#include "powershap/stats.hpp"

namespace powershap {

namespace {

constexpr std::size_t kGrowthStep = 10;

ExplainPlan make_plan(const models::LearnerSpec& learner, const PowershapConfig& config,
                      std::size_t iterations) {
  ExplainPlan plan;
  plan.iterations = iterations;
  plan.learner = learner;
  plan.base_seed = config.base_seed;
  plan.val_fraction = config.val_fraction;
  plan.threads = config.threads;
  return plan;
}

// p < alpha, excluding exact ties with the probe: when neither a feature nor
// the probe is ever used, both impacts are 0 and the strict percentile is 0.
std::vector<std::size_t> significant(const AnalysisOutput& analysis, double alpha) {
  const auto& report = analysis.report;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < report.size(); ++j) {
    if (report.p_value[j] < alpha && analysis.exceeds_probe[j]) out.push_back(j);
  }
  return out;
}

SelectionResult finish(const Dataset& data, AnalysisOutput analysis, double alpha,
                       std::size_t iterations, bool truncated) {
  SelectionResult result;
  result.selected = significant(analysis, alpha);
  for (auto j : result.selected) result.selected_names.push_back(data.feature_names()[j]);
  result.report = std::move(analysis.report);
  result.iterations_performed = iterations;
  result.truncated = truncated;
  return result;
}

}  // namespace

AnalysisOutput analyze(const ImpactMatrix& values, double alpha, double target_power,
                       PValueStyle style) {
  if (values.iterations() < 2) {
    throw Error(ErrorCode::TooFewIterations,
                "analysis needs at least 2 iterations, got " + std::to_string(values.iterations()));
  }
  const std::size_t m = values.n_features();
  const auto probe = values.probe_impacts();

  AnalysisOutput out;
  out.probe_mean = stats::mean(probe);
  auto& report = out.report;
  report.p_value.resize(m);
  report.effect_size.resize(m);
  report.required_iterations.resize(m);
  report.mean_impact.resize(m);
  out.exceeds_probe.resize(m);

  for (std::size_t j = 0; j < m; ++j) {
    const auto column = values.feature_column(j);
    const double feature_mean = stats::mean(column);
    report.mean_impact[j] = feature_mean;
    out.exceeds_probe[j] = std::any_of(column.begin(), column.end(),
                                       [&](double v) { return v > out.probe_mean; });
    report.p_value[j] = style == PValueStyle::Anticonservative
                            ? stats::percentile(column, out.probe_mean)
                            : stats::percentile_corrected(column, out.probe_mean);
    try {
      const double d = stats::effect_size(column, probe);
      report.effect_size[j] = d;
      // Power is undefined at the degenerate levels alpha = 0 or 1.
      report.required_iterations[j] =
          alpha > 0.0 && alpha < 1.0
              ? stats::solve_required_iterations({alpha, target_power, d})
              : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroPooledStd) throw;
      const double probe_mean = out.probe_mean;
      if (feature_mean > probe_mean) {
        report.effect_size[j] = std::numeric_limits<double>::infinity();
        report.required_iterations[j] = stats::kMinIterations;
      } else {
        report.effect_size[j] = feature_mean < probe_mean
                                    ? -std::numeric_limits<double>::infinity()
                                    : 0.0;
        report.required_iterations[j] = stats::kUnattainable;
      }
    }
  }
  return out;
}

SelectionResult select_fixed(const Dataset& data, const models::LearnerSpec& learner,
                             std::size_t iterations, double alpha, std::uint64_t seed,
                             const PowershapConfig& config) {
  PowershapConfig cfg = config;
  cfg.mode = SelectionMode::Fixed;
  cfg.fixed_iterations = iterations;
  cfg.alpha = alpha;
  cfg.base_seed = seed;
  cfg.validate();
  const auto values = explain(make_plan(learner, cfg, iterations), data);
  auto analysis = analyze(values, cfg.alpha, cfg.required_power, cfg.p_value_style);
  return finish(data, std::move(analysis), cfg.alpha, iterations, false);
}

SelectionResult select_automatic(const Dataset& data, const models::LearnerSpec& learner,
                                 const PowershapConfig& config) {
  config.validate();
  auto plan = make_plan(learner, config, config.initial_iterations);
  ImpactMatrix values = explain(plan, data);
  std::size_t performed = config.initial_iterations;
  bool truncated = false;

  for (;;) {
    const auto analysis = analyze(values, config.alpha, config.required_power, config.p_value_style);
    // Largest finite demand among currently significant features.
    double demand = 0.0;
    for (auto j : significant(analysis, config.alpha)) {
      const double required = analysis.report.required_iterations[j];
      if (std::isfinite(required)) demand = std::max(demand, required);
    }
    const auto wanted = static_cast<std::size_t>(std::ceil(demand));
    if (wanted <= performed) {
      return finish(data, analysis, config.alpha, performed, truncated);
    }
    if (performed >= config.max_iterations) {
      truncated = true;
      return finish(data, analysis, config.alpha, performed, truncated);
    }
    const std::size_t extra =
        std::min({kGrowthStep, wanted - performed, config.max_iterations - performed});
    values = explain_append(values, extra, plan, data);
    performed += extra;
  }
}

SelectionResult select_convergence(const Dataset& data, const models::LearnerSpec& learner,
                                   const PowershapConfig& config) {
  config.validate();
  const std::size_t m = data.n_features();
  std::vector<std::size_t> remaining(m);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  SelectionResult result;
  result.report.p_value.assign(m, 1.0);
  result.report.effect_size.assign(m, 0.0);
  result.report.required_iterations.assign(m, stats::kUnattainable);
  result.report.mean_impact.assign(m, 0.0);

  while (!remaining.empty()) {
    const Dataset round_data = data.select_features(remaining);
    SelectionResult round = select_automatic(round_data, learner, config);

    RoundRecord record;
    record.features = remaining;
    record.report = round.report;
    record.iterations_performed = round.iterations_performed;
    record.truncated = round.truncated;
    for (auto local : round.selected) record.selected.push_back(remaining[local]);

    // Features keep the statistics of the round that selected them, or of the
    // last round they took part in.
    for (std::size_t local = 0; local < remaining.size(); ++local) {
      const auto j = remaining[local];
      result.report.p_value[j] = round.report.p_value[local];
      result.report.effect_size[j] = round.report.effect_size[local];
      result.report.required_iterations[j] = round.report.required_iterations[local];
      result.report.mean_impact[j] = round.report.mean_impact[local];
    }
    result.iterations_performed += round.iterations_performed;
    result.truncated = result.truncated || round.truncated;
    const bool found = !record.selected.empty();
    result.selected.insert(result.selected.end(), record.selected.begin(), record.selected.end());
    std::vector<std::size_t> next;
    std::set_difference(remaining.begin(), remaining.end(), record.selected.begin(),
                        record.selected.end(), std::back_inserter(next));
    result.rounds.push_back(std::move(record));
    if (!found) break;
    remaining = std::move(next);
  }

  std::sort(result.selected.begin(), result.selected.end());
  for (auto j : result.selected) result.selected_names.push_back(data.feature_names()[j]);
  return result;
}

SelectionResult select(const Dataset& data, const models::LearnerSpec& learner,
                       const PowershapConfig& config) {
  switch (config.mode) {
    case SelectionMode::Fixed:
      return select_fixed(data, learner, config.fixed_iterations, config.alpha, config.base_seed,
                          config);
    case SelectionMode::Automatic:
      return select_automatic(data, learner, config);
    case SelectionMode::Convergence:
      return select_convergence(data, learner, config);
  }
  throw Error(ErrorCode::Internal, "unknown selection mode");
}

}  // namespace powershap

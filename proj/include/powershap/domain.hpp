#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "powershap/matrix.hpp"

namespace powershap {

enum class Task { BinaryClassification, Regression };

std::string task_name(Task task);

/// Validated feature matrix plus target. Only obtainable through
/// validate_dataset, so every instance satisfies the invariants below:
///   n >= 2, m >= 1, all values finite, unique names, and for
///   classification a {0,1} target containing both classes.
class Dataset {
 public:
  const Matrix& features() const noexcept { return features_; }
  const std::vector<double>& target() const noexcept { return target_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  Task task() const noexcept { return task_; }

  std::size_t n_samples() const noexcept { return features_.rows(); }
  std::size_t n_features() const noexcept { return features_.cols(); }

  /// Keeps only the listed columns (in the listed order).
  Dataset select_features(const std::vector<std::size_t>& columns) const;

 private:
  friend Dataset validate_dataset(Matrix, std::vector<double>,
                                  std::vector<std::string>, Task);
  Dataset(Matrix features, std::vector<double> target,
          std::vector<std::string> names, Task task)
      : features_(std::move(features)),
        target_(std::move(target)),
        names_(std::move(names)),
        task_(task) {}

  Matrix features_;
  std::vector<double> target_;
  std::vector<std::string> names_;
  Task task_;
};

/// Throws powershap::Error (EmptyDataset, DimensionMismatch, NonFiniteValue,
/// DuplicateFeatureName, SingleClassTarget, MulticlassTarget).
Dataset validate_dataset(Matrix features, std::vector<double> target,
                         std::vector<std::string> names, Task task);

/// Per-iteration mean |SHAP| values. Row i is iteration i, the last column is
/// the random probe.
class ImpactMatrix {
 public:
  ImpactMatrix() = default;
  /// `values` must have n_features + 1 columns and non-negative entries.
  explicit ImpactMatrix(Matrix values);

  std::size_t iterations() const noexcept { return values_.rows(); }
  std::size_t n_features() const noexcept {
    return values_.cols() == 0 ? 0 : values_.cols() - 1;
  }
  std::size_t probe_column() const noexcept { return n_features(); }

  const Matrix& values() const noexcept { return values_; }
  std::vector<double> feature_column(std::size_t j) const { return values_.column(j); }
  std::vector<double> probe_impacts() const { return values_.column(probe_column()); }

  void append(const ImpactMatrix& more);

  friend bool operator==(const ImpactMatrix&, const ImpactMatrix&) = default;

 private:
  Matrix values_;
};

struct FeatureReport {
  std::vector<double> p_value;
  std::vector<double> effect_size;
  /// +infinity marks "unattainable within the search bracket".
  std::vector<double> required_iterations;
  std::vector<double> mean_impact;

  std::size_t size() const noexcept { return p_value.size(); }
  friend bool operator==(const FeatureReport&, const FeatureReport&) = default;
};

enum class SelectionMode { Fixed, Automatic, Convergence };
enum class PValueStyle { Anticonservative, NorthCorrected };

struct PowershapConfig {
  double alpha = 0.01;
  double required_power = 0.99;
  std::size_t initial_iterations = 10;
  std::size_t max_iterations = 100;
  double val_fraction = 0.2;
  std::uint64_t base_seed = 0;
  SelectionMode mode = SelectionMode::Automatic;
  /// Iteration count for SelectionMode::Fixed.
  std::size_t fixed_iterations = 10;
  PValueStyle p_value_style = PValueStyle::Anticonservative;
  /// Worker threads for the explain iterations (0 = POWERSHAP_THREADS or the
  /// hardware default). Results do not depend on it.
  std::size_t threads = 0;

  /// Throws Error(InvalidConfig) on out-of-range fields.
  void validate() const;
};

struct RoundRecord {
  std::vector<std::size_t> selected;
  FeatureReport report;
  /// Original column index of each report entry in this round.
  std::vector<std::size_t> features;
  std::size_t iterations_performed = 0;
  bool truncated = false;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct SelectionResult {
  /// Original column indices, ascending.
  std::vector<std::size_t> selected;
  std::vector<std::string> selected_names;
  FeatureReport report;
  std::size_t iterations_performed = 0;
  /// Set when the automatic loop stopped at max_iterations with unmet demand.
  bool truncated = false;
  std::vector<RoundRecord> rounds;

  friend bool operator==(const SelectionResult&, const SelectionResult&) = default;
};

std::string mode_name(SelectionMode mode);
std::string p_value_style_name(PValueStyle style);

}  // namespace powershap

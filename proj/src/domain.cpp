#include "powershap/domain.hpp"

#include <cmath>
#include <unordered_set>

#include "powershap/errors.hpp"

namespace powershap {

std::string task_name(Task task) {
  return task == Task::BinaryClassification ? "classification" : "regression";
}

std::string mode_name(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::Fixed: return "fixed";
    case SelectionMode::Automatic: return "automatic";
    case SelectionMode::Convergence: return "convergence";
  }
  return "unknown";
}

std::string p_value_style_name(PValueStyle style) {
  return style == PValueStyle::Anticonservative ? "anticonservative" : "north_corrected";
}

Dataset validate_dataset(Matrix features, std::vector<double> target,
                         std::vector<std::string> names, Task task) {
  const std::size_t n = features.rows();
  const std::size_t m = features.cols();
  if (n < 2 || m < 1) {
    throw Error(ErrorCode::EmptyDataset, "need at least 2 rows and 1 feature, got " +
                                             std::to_string(n) + "x" + std::to_string(m));
  }
  if (target.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "target has " + std::to_string(target.size()) + " entries for " +
                    std::to_string(n) + " rows");
  }
  if (names.size() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(names.size()) + " feature names for " + std::to_string(m) +
                    " columns");
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (!std::isfinite(features(r, c))) {
        throw Error(ErrorCode::NonFiniteValue, "feature '" + names[c] + "'", r, c);
      }
    }
    if (!std::isfinite(target[r])) {
      throw Error(ErrorCode::NonFiniteValue, "target", r);
    }
  }
  std::unordered_set<std::string> seen;
  for (std::size_t c = 0; c < m; ++c) {
    if (!seen.insert(names[c]).second) {
      throw Error(ErrorCode::DuplicateFeatureName, "'" + names[c] + "'", std::nullopt, c);
    }
  }
  if (task == Task::BinaryClassification) {
    std::size_t ones = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (target[r] == 1.0) {
        ++ones;
      } else if (target[r] != 0.0) {
        throw Error(ErrorCode::MulticlassTarget,
                    "classification target must be 0 or 1, found " +
                        std::to_string(target[r]),
                    r);
      }
    }
    if (ones == 0 || ones == n) {
      throw Error(ErrorCode::SingleClassTarget,
                  "target only contains class " + std::to_string(ones == 0 ? 0 : 1));
    }
  }
  return Dataset(std::move(features), std::move(target), std::move(names), task);
}

Dataset Dataset::select_features(const std::vector<std::size_t>& columns) const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (auto c : columns) {
    if (c >= n_features()) {
      throw Error(ErrorCode::DimensionMismatch, "column index out of range", std::nullopt, c);
    }
    names.push_back(names_[c]);
  }
  return Dataset(features_.select_columns(columns), target_, std::move(names), task_);
}

ImpactMatrix::ImpactMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() > 0 && values_.cols() < 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "impact matrix needs at least one feature column plus the probe");
  }
  for (double v : values_.data()) {
    if (!(v >= 0.0)) {
      throw Error(ErrorCode::Internal, "impact values must be non-negative");
    }
  }
}

void ImpactMatrix::append(const ImpactMatrix& more) { values_.append_rows(more.values_); }

void PowershapConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0, 1]");
  if (!(required_power > 0.0 && required_power < 1.0)) fail("required_power must lie in (0, 1)");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) fail("val_fraction must lie in (0, 1)");
  if (mode == SelectionMode::Fixed) {
    if (fixed_iterations < 2) fail("fixed mode needs at least 2 iterations");
  } else {
    if (initial_iterations < 2) fail("initial_iterations must be >= 2");
    if (initial_iterations > max_iterations) fail("initial_iterations exceeds max_iterations");
  }
}

}  // namespace powershap

#pragma once

#include <span>

#include "powershap/models.hpp"

namespace powershap::models {

TreeEnsemble fit_gbt(const LearnerSpec& spec, const Matrix& x, std::span<const double> y,
                     Task task);
LinearModel fit_linear(const LearnerSpec& spec, const Matrix& x, std::span<const double> y,
                       Task task);

/// Cover-weighted mean leaf value of one tree.
double expected_value(const Tree& tree);

/// Adds the path-dependent TreeSHAP attributions of `tree` for `row` to `phi`.
void tree_shap(const Tree& tree, std::span<const double> row, std::span<double> phi);

}  // namespace powershap::models

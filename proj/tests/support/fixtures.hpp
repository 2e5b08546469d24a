#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "powershap/domain.hpp"
#include "powershap/matrix.hpp"
#include "powershap/models.hpp"

namespace fixtures {

powershap::Matrix normal_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

std::vector<std::string> names(std::size_t m);

/// Target y_i = f(row i); classification thresholds f at 0.
powershap::Dataset dataset(const powershap::Matrix& x,
                           const std::function<double(std::span<const double>)>& f,
                           powershap::Task task);

/// Balanced coin-flip target independent of the features.
powershap::Dataset null_classification(std::size_t n, std::size_t m, std::uint64_t seed);

struct TrainedModel {
  powershap::Matrix train;
  powershap::models::FittedModel model;
};

/// GBT trained on a random nonlinear target over m standard normal columns.
TrainedModel random_gbt(std::size_t m, std::uint64_t seed, powershap::Task task,
                        std::size_t n = 300);

}  // namespace fixtures

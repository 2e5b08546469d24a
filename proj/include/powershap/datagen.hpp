#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "powershap/domain.hpp"

namespace powershap::datagen {

struct SimSpec {
  std::size_t n_samples = 5000;
  std::size_t n_features = 20;
  std::size_t n_informative = 2;
  /// Half the side of the hypercube holding the class centroids.
  double class_sep = 1.0;
  /// Gaussian clusters per class (classification only).
  std::size_t clusters_per_class = 1;
  /// Regression noise standard deviation as a fraction of the signal's.
  double noise_ratio = 0.1;
  Task task = Task::BinaryClassification;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidSpec).
  void validate() const;
};

struct SimDataset {
  Dataset data;
  /// informative[j] is true when column j carries signal.
  std::vector<bool> informative;
  /// Regression only: coefficient of each column (0 for noise columns).
  std::vector<double> coefficients;
};

/// Two balanced classes. Informative coordinates are N(0, 1) around cluster
/// centroids on vertices of the hypercube [-class_sep, class_sep]^k; class 1
/// clusters sit on the antipodes of the class 0 vertices so every informative
/// coordinate separates the classes. Noise features are N(0, 1). Columns and
/// rows are shuffled; the mask follows the column shuffle.
SimDataset make_classification(const SimSpec& spec);

/// y = sum_j w_j x_j + noise over the informative columns, all features
/// N(0, 1), |w_j| in [0.5, 1.5] with random sign, noise sd = noise_ratio *
/// sqrt(sum w_j^2).
SimDataset make_regression(const SimSpec& spec);

/// Dispatches on spec.task.
SimDataset make_dataset(const SimSpec& spec);

}  // namespace powershap::datagen

#include "support/fixtures.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "powershap/rng.hpp"

namespace fixtures {

using powershap::Matrix;
using powershap::Rng;
using powershap::Task;

Matrix normal_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) x(r, c) = rng.normal();
  }
  return x;
}

std::vector<std::string> names(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < m; ++j) out.push_back("x" + std::to_string(j));
  return out;
}

powershap::Dataset dataset(const Matrix& x, const std::function<double(std::span<const double>)>& f,
                           Task task) {
  std::vector<double> y(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double v = f(x.row(r));
    y[r] = task == Task::Regression ? v : (v > 0.0 ? 1.0 : 0.0);
  }
  return powershap::validate_dataset(x, std::move(y), names(x.cols()), task);
}

powershap::Dataset null_classification(std::size_t n, std::size_t m, std::uint64_t seed) {
  Matrix x = normal_matrix(n, m, seed);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<double>(i % 2);
  Rng rng(seed ^ 0x5bd1e995u);
  rng.shuffle(std::span<double>(y));
  return powershap::validate_dataset(std::move(x), std::move(y), names(m),
                                     Task::BinaryClassification);
}

TrainedModel random_gbt(std::size_t m, std::uint64_t seed, Task task, std::size_t n) {
  Matrix x = normal_matrix(n, m, seed);
  Rng rng(seed + 17);
  std::vector<double> w(m);
  for (auto& v : w) v = rng.uniform(-1.0, 1.0);
  auto f = [&](std::span<const double> row) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += w[j] * row[j];
    // Interactions so trees use several features per path.
    if (m >= 2) s += row[0] * row[1];
    if (m >= 3) s += std::sin(2.0 * row[2]);
    return s;
  };
  powershap::models::LearnerSpec spec;
  spec.n_estimators = 20 + seed % 20;
  spec.max_depth = 2 + seed % 4;
  spec.min_samples_leaf = 3;
  auto data = dataset(x, f, task);
  auto model = powershap::models::fit(spec, data, seed);
  return {std::move(x), std::move(model)};
}

}  // namespace fixtures

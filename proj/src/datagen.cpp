#include "powershap/datagen.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "powershap/errors.hpp"
#include "powershap/rng.hpp"

namespace powershap::datagen {

namespace {

constexpr std::uint64_t kVertexStream = 10;
constexpr std::uint64_t kSampleStream = 11;
constexpr std::uint64_t kShuffleStream = 12;
constexpr std::uint64_t kWeightStream = 13;

std::vector<std::string> column_names(std::size_t m) {
  std::vector<std::string> names(m);
  for (std::size_t j = 0; j < m; ++j) names[j] = "f" + std::to_string(j);
  return names;
}

struct Permuted {
  Matrix features;
  std::vector<double> target;
  std::vector<bool> mask;
  std::vector<double> coefficients;
};

// Shuffles rows and columns; the mask and coefficients follow the columns.
Permuted permute(const Matrix& x, const std::vector<double>& y, std::size_t k,
                 const std::vector<double>& coefficients, std::uint64_t seed) {
  Rng rng(mix_seed(seed, kShuffleStream));
  std::vector<std::size_t> cols(x.cols());
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(cols));
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(rows));

  Permuted out;
  out.features = x.select_rows(rows).select_columns(cols);
  out.target.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.target[i] = y[rows[i]];
  out.mask.resize(cols.size());
  out.coefficients.assign(cols.size(), 0.0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.mask[j] = cols[j] < k;
    if (!coefficients.empty()) out.coefficients[j] = coefficients[cols[j]];
  }
  return out;
}

}  // namespace

void SimSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (n_samples < 2) fail("n_samples must be at least 2");
  if (n_features < 1) fail("n_features must be at least 1");
  if (n_informative < 1 || n_informative > n_features) {
    fail("n_informative must lie in [1, n_features]");
  }
  if (!(class_sep > 0.0)) fail("class_sep must be positive");
  if (!(noise_ratio >= 0.0)) fail("noise_ratio must be non-negative");
  if (task == Task::BinaryClassification) {
    if (clusters_per_class < 1) fail("clusters_per_class must be at least 1");
    // 2 * clusters distinct vertices must exist among 2^k.
    if (n_informative < 63 &&
        2 * clusters_per_class > (std::uint64_t{1} << n_informative)) {
      fail("not enough hypercube vertices for the requested clusters");
    }
    if (n_samples < 2 * clusters_per_class) fail("need at least one sample per cluster");
  }
}

SimDataset make_classification(const SimSpec& spec) {
  spec.validate();
  if (spec.task != Task::BinaryClassification) {
    throw Error(ErrorCode::InvalidSpec, "make_classification requires a classification spec");
  }
  const std::size_t n = spec.n_samples;
  const std::size_t m = spec.n_features;
  const std::size_t k = spec.n_informative;
  const std::size_t c = spec.clusters_per_class;

  // Class 0 vertices; class 1 uses their antipodes. A vertex is rejected when
  // it or its antipode is already taken.
  Rng vertex_rng(mix_seed(spec.seed, kVertexStream));
  std::set<std::vector<bool>> used;
  std::vector<std::vector<double>> centroids;  // [class 0 clusters..., class 1 clusters...]
  std::vector<std::vector<double>> class0;
  while (class0.size() < c) {
    std::vector<bool> bits(k);
    for (std::size_t d = 0; d < k; ++d) bits[d] = vertex_rng.below(2) == 1;
    std::vector<bool> flipped(k);
    for (std::size_t d = 0; d < k; ++d) flipped[d] = !bits[d];
    if (used.count(bits) || used.count(flipped)) continue;
    used.insert(bits);
    used.insert(flipped);
    std::vector<double> centroid(k);
    for (std::size_t d = 0; d < k; ++d) centroid[d] = bits[d] ? spec.class_sep : -spec.class_sep;
    class0.push_back(std::move(centroid));
  }
  for (const auto& v : class0) centroids.push_back(v);
  for (const auto& v : class0) {
    std::vector<double> anti(k);
    for (std::size_t d = 0; d < k; ++d) anti[d] = -v[d];
    centroids.push_back(std::move(anti));
  }

  Rng rng(mix_seed(spec.seed, kSampleStream));
  Matrix x(n, m);
  std::vector<double> y(n);
  const std::size_t n_clusters = 2 * c;
  for (std::size_t i = 0; i < n; ++i) {
    // Balanced: cluster index cycles, first half of clusters is class 0.
    const std::size_t cluster = (i * n_clusters) / n;
    y[i] = cluster < c ? 0.0 : 1.0;
    for (std::size_t d = 0; d < k; ++d) x(i, d) = centroids[cluster][d] + rng.normal();
    for (std::size_t d = k; d < m; ++d) x(i, d) = rng.normal();
  }

  auto permuted = permute(x, y, k, {}, spec.seed);
  SimDataset out{validate_dataset(std::move(permuted.features), std::move(permuted.target),
                                  column_names(m), Task::BinaryClassification),
                 std::move(permuted.mask),
                 {}};
  return out;
}

SimDataset make_regression(const SimSpec& spec) {
  spec.validate();
  if (spec.task != Task::Regression) {
    throw Error(ErrorCode::InvalidSpec, "make_regression requires a regression spec");
  }
  const std::size_t n = spec.n_samples;
  const std::size_t m = spec.n_features;
  const std::size_t k = spec.n_informative;

  Rng weight_rng(mix_seed(spec.seed, kWeightStream));
  std::vector<double> weights(m, 0.0);
  double signal_var = 0.0;
  for (std::size_t d = 0; d < k; ++d) {
    const double magnitude = weight_rng.uniform(0.5, 1.5);
    weights[d] = weight_rng.below(2) == 1 ? magnitude : -magnitude;
    signal_var += weights[d] * weights[d];
  }
  const double noise_sd = spec.noise_ratio * std::sqrt(signal_var);

  Rng rng(mix_seed(spec.seed, kSampleStream));
  Matrix x(n, m);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double target = 0.0;
    for (std::size_t d = 0; d < m; ++d) {
      x(i, d) = rng.normal();
      target += weights[d] * x(i, d);
    }
    y[i] = target + noise_sd * rng.normal();
  }

  auto permuted = permute(x, y, k, weights, spec.seed);
  return SimDataset{validate_dataset(std::move(permuted.features), std::move(permuted.target),
                                     column_names(m), Task::Regression),
                    std::move(permuted.mask), std::move(permuted.coefficients)};
}

SimDataset make_dataset(const SimSpec& spec) {
  return spec.task == Task::BinaryClassification ? make_classification(spec)
                                                 : make_regression(spec);
}

}  // namespace powershap::datagen

#include <bit>
#include <cmath>

#include "json.hpp"

#include "models_internal.hpp"
#include "powershap/errors.hpp"

namespace powershap::models {

namespace {

constexpr std::size_t kOracleMaxFeatures = 12;

double linear_output(const LinearModel& model, std::span<const double> row) {
  double z = model.intercept;
  for (std::size_t j = 0; j < row.size(); ++j) z += model.weights[j] * row[j];
  return z;
}

void require_columns(const FittedModel& model, const Matrix& rows) {
  if (rows.cols() != model.n_features()) {
    throw Error(ErrorCode::DimensionMismatch,
                "model expects " + std::to_string(model.n_features()) + " features, got " +
                    std::to_string(rows.cols()));
  }
}

// Node weights obtained by routing `background` rows through `tree`.
std::vector<double> background_cover(const Tree& tree, const Matrix& background) {
  std::vector<double> cover(tree.nodes.size(), 0.0);
  for (std::size_t r = 0; r < background.rows(); ++r) {
    const auto row = background.row(r);
    std::size_t k = 0;
    cover[k] += 1.0;
    while (!tree.nodes[k].is_leaf()) {
      const auto& node = tree.nodes[k];
      k = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] < node.threshold
                                       ? node.left
                                       : node.right);
      cover[k] += 1.0;
    }
  }
  return cover;
}

// E[f(x) | x_S] under path-dependent conditioning.
double conditional_expectation(const Tree& tree, const std::vector<double>& cover,
                               std::span<const double> row, std::uint32_t coalition,
                               std::size_t k = 0) {
  const auto& node = tree.nodes[k];
  if (node.is_leaf()) return node.value;
  const auto left = static_cast<std::size_t>(node.left);
  const auto right = static_cast<std::size_t>(node.right);
  if (coalition & (1u << node.feature)) {
    const auto next = row[static_cast<std::size_t>(node.feature)] < node.threshold ? left : right;
    return conditional_expectation(tree, cover, row, coalition, next);
  }
  const double total = cover[left] + cover[right];
  if (total == 0.0) return 0.0;
  double value = 0.0;
  if (cover[left] > 0.0) {
    value += cover[left] / total * conditional_expectation(tree, cover, row, coalition, left);
  }
  if (cover[right] > 0.0) {
    value += cover[right] / total * conditional_expectation(tree, cover, row, coalition, right);
  }
  return value;
}

}  // namespace

std::string learner_name(LearnerKind kind) {
  return kind == LearnerKind::Linear ? "linear" : "gbt";
}

void LearnerSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (kind == LearnerKind::GradientBoostedTrees) {
    if (n_estimators == 0) fail("n_estimators must be positive");
    if (max_depth == 0 || max_depth > 16) fail("max_depth must lie in [1, 16]");
    if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
    if (min_samples_leaf == 0) fail("min_samples_leaf must be positive");
    if (!(leaf_l2 > 0.0)) fail("leaf_l2 must be positive");
  } else if (!(l2_penalty > 0.0)) {
    fail("l2_penalty must be positive");
  }
}

double Tree::predict(std::span<const double> row) const {
  std::size_t k = 0;
  while (!nodes[k].is_leaf()) {
    const auto& node = nodes[k];
    k = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] < node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes[k].value;
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    deepest = std::max(deepest, level[k]);
    if (!nodes[k].is_leaf()) {
      level[static_cast<std::size_t>(nodes[k].left)] = level[k] + 1;
      level[static_cast<std::size_t>(nodes[k].right)] = level[k] + 1;
    }
  }
  return deepest;
}

FittedModel::FittedModel(LinearModel linear, Task task, double base_value)
    : state_(std::move(linear)), task_(task), base_value_(base_value) {
  n_features_ = std::get<LinearModel>(state_).weights.size();
}

FittedModel::FittedModel(TreeEnsemble trees, Task task, double base_value, std::size_t n_features)
    : state_(std::move(trees)), task_(task), base_value_(base_value), n_features_(n_features) {}

double FittedModel::raw_predict(std::span<const double> row) const {
  if (const auto* lin = linear()) return linear_output(*lin, row);
  const auto& ensemble = *trees();
  double z = ensemble.init_score;
  for (const auto& tree : ensemble.trees) z += tree.predict(row);
  return z;
}

std::vector<double> FittedModel::raw_predict(const Matrix& rows) const {
  require_columns(*this, rows);
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) out[r] = raw_predict(rows.row(r));
  return out;
}

FittedModel fit(const LearnerSpec& spec, const Matrix& features, std::span<const double> target,
                Task task, std::uint64_t /*seed*/) {
  spec.validate();
  if (spec.kind == LearnerKind::Linear) {
    LinearModel model = fit_linear(spec, features, target, task);
    const double base = linear_output(model, model.feature_means);
    return FittedModel(std::move(model), task, base);
  }
  TreeEnsemble ensemble = fit_gbt(spec, features, target, task);
  double base = ensemble.init_score;
  for (const auto& tree : ensemble.trees) base += expected_value(tree);
  return FittedModel(std::move(ensemble), task, base, features.cols());
}

FittedModel fit(const LearnerSpec& spec, const Dataset& train, std::uint64_t seed) {
  return fit(spec, train.features(), train.target(), train.task(), seed);
}

Matrix shap_values(const FittedModel& model, const Matrix& eval_rows) {
  require_columns(model, eval_rows);
  Matrix phi(eval_rows.rows(), model.n_features());
  if (const auto* lin = model.linear()) {
    for (std::size_t r = 0; r < eval_rows.rows(); ++r) {
      for (std::size_t j = 0; j < model.n_features(); ++j) {
        phi(r, j) = lin->weights[j] * (eval_rows(r, j) - lin->feature_means[j]);
      }
    }
    return phi;
  }
  const auto& ensemble = *model.trees();
  for (std::size_t r = 0; r < eval_rows.rows(); ++r) {
    for (const auto& tree : ensemble.trees) tree_shap(tree, eval_rows.row(r), phi.row(r));
  }
  return phi;
}

Matrix exact_shapley_oracle(const FittedModel& model, const Matrix& eval_rows,
                            const Matrix& background) {
  require_columns(model, eval_rows);
  require_columns(model, background);
  const std::size_t m = model.n_features();
  if (m > kOracleMaxFeatures) {
    throw Error(ErrorCode::TooManyFeatures, "exact enumeration supports at most " +
                                                std::to_string(kOracleMaxFeatures) +
                                                " features, got " + std::to_string(m));
  }
  if (background.rows() == 0) {
    throw Error(ErrorCode::EmptyDataset, "oracle needs background rows");
  }
  const std::uint32_t n_coalitions = 1u << m;

  // Shapley kernel |S|! (m - |S| - 1)! / m!
  std::vector<double> kernel(m);
  for (std::size_t s = 0; s < m; ++s) {
    kernel[s] = std::exp(std::lgamma(static_cast<double>(s) + 1.0) +
                         std::lgamma(static_cast<double>(m - s)) -
                         std::lgamma(static_cast<double>(m) + 1.0));
  }

  std::vector<std::vector<double>> covers;
  std::vector<double> bg_means(m, 0.0);
  if (const auto* ensemble = model.trees()) {
    for (const auto& tree : ensemble->trees) covers.push_back(background_cover(tree, background));
  } else {
    for (std::size_t r = 0; r < background.rows(); ++r) {
      for (std::size_t j = 0; j < m; ++j) bg_means[j] += background(r, j);
    }
    for (auto& v : bg_means) v /= static_cast<double>(background.rows());
  }

  Matrix phi(eval_rows.rows(), m);
  std::vector<double> value(n_coalitions);
  for (std::size_t r = 0; r < eval_rows.rows(); ++r) {
    const auto row = eval_rows.row(r);
    for (std::uint32_t s = 0; s < n_coalitions; ++s) {
      if (const auto* lin = model.linear()) {
        double z = lin->intercept;
        for (std::size_t j = 0; j < m; ++j) {
          z += lin->weights[j] * ((s & (1u << j)) ? row[j] : bg_means[j]);
        }
        value[s] = z;
      } else {
        const auto& ensemble = *model.trees();
        double z = ensemble.init_score;
        for (std::size_t t = 0; t < ensemble.trees.size(); ++t) {
          z += conditional_expectation(ensemble.trees[t], covers[t], row, s);
        }
        value[s] = z;
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint32_t bit = 1u << j;
      double total = 0.0;
      for (std::uint32_t s = 0; s < n_coalitions; ++s) {
        if (s & bit) continue;
        total += kernel[static_cast<std::size_t>(std::popcount(s))] * (value[s | bit] - value[s]);
      }
      phi(r, j) = total;
    }
  }
  return phi;
}

std::string dump_model_json(const FittedModel& model) {
  nlohmann::json out;
  out["format"] = "powershap-model";
  out["format_version"] = 1;
  out["task"] = task_name(model.task());
  out["n_features"] = model.n_features();
  out["base_value"] = model.base_value();
  if (const auto* lin = model.linear()) {
    out["kind"] = "linear";
    out["intercept"] = lin->intercept;
    out["weights"] = lin->weights;
    out["feature_means"] = lin->feature_means;
  } else {
    const auto& ensemble = *model.trees();
    out["kind"] = "gbt";
    out["init_score"] = ensemble.init_score;
    auto& trees = out["trees"] = nlohmann::json::array();
    for (const auto& tree : ensemble.trees) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& node : tree.nodes) {
        if (node.is_leaf()) {
          nodes.push_back({{"value", node.value}, {"cover", node.cover}});
        } else {
          nodes.push_back({{"feature", node.feature},
                           {"threshold", node.threshold},
                           {"left", node.left},
                           {"right", node.right},
                           {"cover", node.cover}});
        }
      }
      trees.push_back(std::move(nodes));
    }
  }
  return out.dump();
}

}  // namespace powershap::models

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "powershap/domain.hpp"
#include "powershap/matrix.hpp"

namespace powershap::models {

enum class LearnerKind { Linear, GradientBoostedTrees };

struct LearnerSpec {
  LearnerKind kind = LearnerKind::GradientBoostedTrees;
  // Gradient-boosted trees.
  std::size_t n_estimators = 100;
  std::size_t max_depth = 4;
  double learning_rate = 0.1;
  std::size_t min_samples_leaf = 5;
  /// L2 penalty on leaf values; keeps Newton steps bounded for logistic loss.
  double leaf_l2 = 1.0;
  // Linear / logistic.
  double l2_penalty = 1e-6;

  /// Throws Error(InvalidSpec).
  void validate() const;
};

std::string learner_name(LearnerKind kind);

struct TreeNode {
  /// -1 for leaves.
  int feature = -1;
  /// Rows with value < threshold go left.
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  /// Leaf output, already scaled by the learning rate.
  double value = 0.0;
  /// Number of training rows that reached this node.
  double cover = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> row) const;
  std::size_t depth() const;
};

struct TreeEnsemble {
  double init_score = 0.0;
  std::vector<Tree> trees;
};

struct LinearModel {
  double intercept = 0.0;
  std::vector<double> weights;
  /// Training-row means used as the attribution reference point.
  std::vector<double> feature_means;
};

/// Immutable fitted learner. Outputs are raw scores: the prediction for
/// regression and the log-odds for classification.
class FittedModel {
 public:
  FittedModel(LinearModel linear, Task task, double base_value);
  FittedModel(TreeEnsemble trees, Task task, double base_value, std::size_t n_features);

  std::size_t n_features() const noexcept { return n_features_; }
  Task task() const noexcept { return task_; }
  /// Expected raw output over the training rows.
  double base_value() const noexcept { return base_value_; }

  double raw_predict(std::span<const double> row) const;
  std::vector<double> raw_predict(const Matrix& rows) const;

  const LinearModel* linear() const noexcept { return std::get_if<LinearModel>(&state_); }
  const TreeEnsemble* trees() const noexcept { return std::get_if<TreeEnsemble>(&state_); }

 private:
  std::variant<LinearModel, TreeEnsemble> state_;
  Task task_;
  double base_value_;
  std::size_t n_features_;
};

/// Trains on `features`/`target`. `seed` is accepted for interface stability;
/// both learners are deterministic and currently draw no random numbers.
FittedModel fit(const LearnerSpec& spec, const Matrix& features,
                std::span<const double> target, Task task, std::uint64_t seed);
FittedModel fit(const LearnerSpec& spec, const Dataset& train, std::uint64_t seed);

/// Per-row Shapley attributions (rows x n_features). Linear models use the
/// closed form w_j (x_j - mean_j); tree ensembles use path-dependent TreeSHAP.
/// Each row satisfies sum(phi) + base_value == raw_predict(row).
Matrix shap_values(const FittedModel& model, const Matrix& eval_rows);

/// Brute-force Shapley values by enumerating every coalition.
///
/// Trees: the coalition value is the path-dependent conditional expectation,
/// with node weights recomputed by routing `background` through each tree.
/// Passing the training rows reproduces the TreeSHAP conditioning exactly.
/// Linear: the coalition value replaces absent features by their `background`
/// means. Limited to 12 features (TooManyFeatures).
Matrix exact_shapley_oracle(const FittedModel& model, const Matrix& eval_rows,
                            const Matrix& background);

/// JSON dump of a fitted model for debugging; see README for the layout.
std::string dump_model_json(const FittedModel& model);

}  // namespace powershap::models

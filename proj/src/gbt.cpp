#include "models_internal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "powershap/errors.hpp"

namespace powershap::models {

namespace {

constexpr double kMinGain = 1e-12;
constexpr double kMinHessian = 1e-16;

struct SplitCandidate {
  double gain = kMinGain;
  int feature = -1;
  double threshold = 0.0;
};

struct NodeStats {
  double grad = 0.0;
  double hess = 0.0;
  std::size_t count = 0;
};

double split_threshold(double below, double above) {
  const double mid = below + 0.5 * (above - below);
  // Guarantee below < mid <= above so "value < threshold" separates them.
  return below < mid ? mid : above;
}

double score(double grad, double hess, double l2) { return grad * grad / (hess + l2); }

// Column-major training view with per-feature row orderings, shared by every
// tree of one fit.
class SortedColumns {
 public:
  explicit SortedColumns(const Matrix& x) : n_(x.rows()), m_(x.cols()) {
    values_.resize(n_ * m_);
    order_.resize(n_ * m_);
    for (std::size_t j = 0; j < m_; ++j) {
      double* col = values_.data() + j * n_;
      for (std::size_t i = 0; i < n_; ++i) col[i] = x(i, j);
      auto* ord = order_.data() + j * n_;
      std::iota(ord, ord + n_, std::uint32_t{0});
      std::stable_sort(ord, ord + n_,
                       [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
  }

  std::span<const double> column(std::size_t j) const { return {values_.data() + j * n_, n_}; }
  std::span<const std::uint32_t> order(std::size_t j) const {
    return {order_.data() + j * n_, n_};
  }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<double> values_;
  std::vector<std::uint32_t> order_;
};

// Grows one depth-limited tree level by level with exact greedy splits.
Tree grow_tree(const SortedColumns& columns, std::size_t n_features,
               std::span<const double> grad, std::span<const double> hess,
               const LearnerSpec& spec, std::vector<int>& node_of) {
  const std::size_t n = grad.size();
  Tree tree;
  tree.nodes.push_back(TreeNode{});
  std::fill(node_of.begin(), node_of.end(), 0);

  std::vector<NodeStats> stats(1);
  for (std::size_t i = 0; i < n; ++i) {
    stats[0].grad += grad[i];
    stats[0].hess += hess[i];
    ++stats[0].count;
  }
  tree.nodes[0].cover = static_cast<double>(n);

  std::vector<int> active{0};
  // slot_of[node] = position of node in `active`, or -1.
  std::vector<int> slot_of(1, 0);

  for (std::size_t depth = 0; depth < spec.max_depth && !active.empty(); ++depth) {
    const std::size_t n_active = active.size();
    std::vector<SplitCandidate> best(n_active);
    std::vector<NodeStats> left(n_active);
    std::vector<double> last_value(n_active);

    for (std::size_t j = 0; j < n_features; ++j) {
      std::fill(left.begin(), left.end(), NodeStats{});
      const auto values = columns.column(j);
      for (std::uint32_t row : columns.order(j)) {
        const int slot = slot_of[static_cast<std::size_t>(node_of[row])];
        if (slot < 0) continue;
        auto& acc = left[static_cast<std::size_t>(slot)];
        const double v = values[row];
        if (acc.count > 0 && v > last_value[static_cast<std::size_t>(slot)]) {
          const auto& total = stats[static_cast<std::size_t>(active[static_cast<std::size_t>(slot)])];
          const std::size_t right_count = total.count - acc.count;
          if (acc.count >= spec.min_samples_leaf && right_count >= spec.min_samples_leaf) {
            const double gain = score(acc.grad, acc.hess, spec.leaf_l2) +
                                score(total.grad - acc.grad, total.hess - acc.hess, spec.leaf_l2) -
                                score(total.grad, total.hess, spec.leaf_l2);
            auto& cand = best[static_cast<std::size_t>(slot)];
            if (gain > cand.gain) {
              cand.gain = gain;
              cand.feature = static_cast<int>(j);
              cand.threshold = split_threshold(last_value[static_cast<std::size_t>(slot)], v);
            }
          }
        }
        acc.grad += grad[row];
        acc.hess += hess[row];
        ++acc.count;
        last_value[static_cast<std::size_t>(slot)] = v;
      }
    }

    std::vector<int> next_active;
    for (std::size_t s = 0; s < n_active; ++s) {
      const int node = active[s];
      slot_of[static_cast<std::size_t>(node)] = -1;
      if (best[s].feature < 0) continue;
      const int l = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(TreeNode{});
      tree.nodes.push_back(TreeNode{});
      auto& parent = tree.nodes[static_cast<std::size_t>(node)];
      parent.feature = best[s].feature;
      parent.threshold = best[s].threshold;
      parent.left = l;
      parent.right = l + 1;
      stats.resize(tree.nodes.size());
      slot_of.resize(tree.nodes.size(), -1);
      next_active.push_back(l);
      next_active.push_back(l + 1);
    }
    if (next_active.empty()) break;

    for (std::size_t i = 0; i < n; ++i) {
      const auto& node = tree.nodes[static_cast<std::size_t>(node_of[i])];
      if (node.is_leaf()) continue;
      const double v = columns.column(static_cast<std::size_t>(node.feature))[i];
      const int child = v < node.threshold ? node.left : node.right;
      node_of[i] = child;
      auto& st = stats[static_cast<std::size_t>(child)];
      st.grad += grad[i];
      st.hess += hess[i];
      ++st.count;
    }
    for (int c : next_active) {
      tree.nodes[static_cast<std::size_t>(c)].cover =
          static_cast<double>(stats[static_cast<std::size_t>(c)].count);
    }
    if (depth + 1 < spec.max_depth) {
      for (std::size_t s = 0; s < next_active.size(); ++s) {
        slot_of[static_cast<std::size_t>(next_active[s])] = static_cast<int>(s);
      }
    }
    active = std::move(next_active);
  }

  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    auto& node = tree.nodes[k];
    if (!node.is_leaf()) continue;
    node.value = -spec.learning_rate * stats[k].grad / (stats[k].hess + spec.leaf_l2);
  }
  return tree;
}

}  // namespace

TreeEnsemble fit_gbt(const LearnerSpec& spec, const Matrix& x, std::span<const double> y,
                     Task task) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n == 0 || y.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "training rows and target disagree");
  }

  std::vector<double> weight(n, 1.0);
  TreeEnsemble model;
  if (task == Task::Regression) {
    model.init_score = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  } else {
    const double ones = std::count(y.begin(), y.end(), 1.0);
    const double zeros = static_cast<double>(n) - ones;
    if (ones == 0.0 || zeros == 0.0) {
      throw Error(ErrorCode::DegenerateTraining, "classification training split has one class");
    }
    // Inverse-frequency class weights.
    const double w1 = static_cast<double>(n) / (2.0 * ones);
    const double w0 = static_cast<double>(n) / (2.0 * zeros);
    for (std::size_t i = 0; i < n; ++i) weight[i] = y[i] == 1.0 ? w1 : w0;
    model.init_score = std::log((w1 * ones) / (w0 * zeros));
  }

  const SortedColumns columns(x);
  std::vector<double> pred(n, model.init_score);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  std::vector<int> node_of(n);
  model.trees.reserve(spec.n_estimators);

  for (std::size_t t = 0; t < spec.n_estimators; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (task == Task::Regression) {
        grad[i] = pred[i] - y[i];
        hess[i] = 1.0;
      } else {
        const double p = 1.0 / (1.0 + std::exp(-pred[i]));
        grad[i] = weight[i] * (p - y[i]);
        hess[i] = std::max(weight[i] * p * (1.0 - p), kMinHessian);
      }
    }
    Tree tree = grow_tree(columns, m, grad, hess, spec, node_of);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] += tree.nodes[static_cast<std::size_t>(node_of[i])].value;
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double expected_value(const Tree& tree) {
  const double root_cover = tree.nodes.front().cover;
  double total = 0.0;
  for (const auto& node : tree.nodes) {
    if (node.is_leaf()) total += node.cover / root_cover * node.value;
  }
  return total;
}

}  // namespace powershap::models

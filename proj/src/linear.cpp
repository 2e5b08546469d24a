#include <Eigen/Dense>
#include <cmath>

#include "models_internal.hpp"
#include "powershap/errors.hpp"

namespace powershap::models {

namespace {

constexpr int kMaxNewtonSteps = 100;
constexpr double kNewtonTolerance = 1e-10;

Eigen::MatrixXd centered_design(const Matrix& x, const std::vector<double>& means) {
  Eigen::MatrixXd design(static_cast<Eigen::Index>(x.rows()), static_cast<Eigen::Index>(x.cols()));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x(i, j) - means[j];
    }
  }
  return design;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateTraining, "normal equations are not positive definite");
  }
  return ldlt.solve(b);
}

double log1p_exp(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

LinearModel fit_linear(const LearnerSpec& spec, const Matrix& x, std::span<const double> y,
                       Task task) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n == 0 || y.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "training rows and target disagree");
  }
  LinearModel model;
  model.feature_means.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) model.feature_means[j] += x(i, j);
  }
  for (auto& mu : model.feature_means) mu /= static_cast<double>(n);

  const Eigen::MatrixXd design = centered_design(x, model.feature_means);
  const Eigen::Map<const Eigen::VectorXd> target(y.data(), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd ridge =
      spec.l2_penalty * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));

  // Parameterised as raw = offset + w . (x - mean); the offset is unpenalised.
  double offset = 0.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));

  if (task == Task::Regression) {
    offset = target.mean();
    const Eigen::VectorXd centered = target.array() - offset;
    w = solve_spd(design.transpose() * design + ridge, design.transpose() * centered);
  } else {
    const double ones = target.sum();
    const double zeros = static_cast<double>(n) - ones;
    const double w1 = static_cast<double>(n) / (2.0 * ones);
    const double w0 = static_cast<double>(n) / (2.0 * zeros);
    Eigen::VectorXd weight(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < weight.size(); ++i) weight(i) = target(i) == 1.0 ? w1 : w0;

    auto objective = [&](double b, const Eigen::VectorXd& coef) {
      const Eigen::VectorXd z = (design * coef).array() + b;
      double loss = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        loss += weight(i) * (log1p_exp(z(i)) - target(i) * z(i));
      }
      return loss + 0.5 * spec.l2_penalty * coef.squaredNorm();
    };

    const auto p = static_cast<Eigen::Index>(m) + 1;
    double current = objective(offset, w);
    for (int step = 0; step < kMaxNewtonSteps; ++step) {
      const Eigen::VectorXd z = (design * w).array() + offset;
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(p, p);
      Eigen::VectorXd row(p);
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double prob = 1.0 / (1.0 + std::exp(-z(i)));
        row(0) = 1.0;
        row.tail(p - 1) = design.row(i).transpose();
        grad += weight(i) * (prob - target(i)) * row;
        hess.selfadjointView<Eigen::Lower>().rankUpdate(row, weight(i) * prob * (1.0 - prob));
      }
      hess = hess.selfadjointView<Eigen::Lower>();
      grad.tail(p - 1) += spec.l2_penalty * w;
      hess.bottomRightCorner(p - 1, p - 1) += spec.l2_penalty * Eigen::MatrixXd::Identity(p - 1, p - 1);
      const Eigen::VectorXd delta = solve_spd(hess, grad);

      // Backtracking keeps the iteration monotone on near-separable data.
      double scale = 1.0;
      double next = current;
      for (int halving = 0; halving < 30; ++halving) {
        next = objective(offset - scale * delta(0), w - scale * delta.tail(p - 1));
        if (next <= current) break;
        scale *= 0.5;
      }
      if (next > current) break;
      offset -= scale * delta(0);
      w -= scale * delta.tail(p - 1);
      const bool converged = scale * delta.cwiseAbs().maxCoeff() < kNewtonTolerance;
      current = next;
      if (converged) break;
    }
  }

  model.weights.assign(w.data(), w.data() + w.size());
  model.intercept = offset;
  for (std::size_t j = 0; j < m; ++j) model.intercept -= model.weights[j] * model.feature_means[j];
  return model;
}

}  // namespace powershap::models

#pragma once

#include <functional>
#include <limits>
#include <span>

namespace powershap::stats {

/// Marker returned by solve_required_iterations when the target power cannot
/// be reached inside the search bracket.
inline constexpr double kUnattainable = std::numeric_limits<double>::infinity();

inline constexpr double kMinIterations = 2.0;
inline constexpr double kMaxIterations = 10000.0;

/// Fraction of entries of `s` strictly below `x`.
double percentile(std::span<const double> s, double x);

/// (1 + #{s_i < x}) / (|s| + 1), the unbiased empirical p-value.
double percentile_corrected(std::span<const double> s, double x);

double mean(std::span<const double> s);
/// Sample variance, denominator (n - 1).
double sample_variance(std::span<const double> s);

/// sqrt((var(s1) + var(s2)) / 2).
double pooled_std(std::span<const double> s1, std::span<const double> s2);

/// Cohen's d: (mean(s1) - mean(s2)) / pooled_std. Throws ZeroPooledStd when
/// both samples are constant.
double effect_size(std::span<const double> s1, std::span<const double> s2);

double normal_cdf(double x);

/// Regularized incomplete beta I_x(a, b). `y` must equal 1 - x; passing it
/// separately keeps precision when x is close to 1.
double incomplete_beta(double a, double b, double x, double y);

double central_t_cdf(double x, double df);
double central_t_ppf(double p, double df);

/// P[T <= x] for T = (Z + nc) / sqrt(chi2_df / df).
double noncentral_t_cdf(double x, double df, double nc);

/// Power of the one-tailed one-sample t-test with `iterations` samples at
/// level `alpha` and standardized effect `d`.
///
/// The test rejects in the lower tail of the central t (critical value
/// F_CT^-1(alpha, I - 1)). The statistic under the alternative is the
/// noncentral t with noncentrality -sqrt(I) * d: a positive d means the
/// feature's impact exceeds the probe's, which pushes the probe-minus-feature
/// statistic downwards. Both distributions use I - 1 degrees of freedom.
/// Power therefore equals alpha at d = 0 and grows with d and with I.
double tt_test_power(double alpha, double iterations, double d);

struct PowerQuery {
  double alpha = 0.01;
  double target_power = 0.99;
  double effect_size = 0.0;
};

/// Smallest real I in [kMinIterations, kMaxIterations] whose power reaches
/// the target. Returns kMinIterations when already met there and
/// kUnattainable when not met at kMaxIterations.
double solve_required_iterations(const PowerQuery& q);

struct RootResult {
  /// Endpoint of the final bracket where f >= 0.
  double upper;
  /// Endpoint of the final bracket where f < 0, or the root itself when f
  /// hit exactly zero (then lower == upper).
  double lower;
  int evaluations;
};

/// Brent's method on a sign-changing bracket [a, b]. Tracks the bracket so the
/// caller can pick the side it needs. Throws NoRootBracket if f(a), f(b) do
/// not straddle zero.
RootResult brent_root(const std::function<double(double)>& f, double a, double b,
                      double rel_tol, double abs_tol, int max_evaluations = 200);

}  // namespace powershap::stats

#include "powershap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "powershap/errors.hpp"

namespace powershap::stats {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
// Absolute tolerance of the noncentral t series.
constexpr double kSeriesTolerance = 1e-12;
constexpr long kSeriesMaxTerms = 1'000'000;

void require_non_empty(std::span<const double> s) {
  if (s.empty()) throw Error(ErrorCode::EmptyVector, "sample vector is empty");
}

void require_df(double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw Error(ErrorCode::InvalidDf, "degrees of freedom must be positive and finite, got " +
                                          std::to_string(df));
  }
}

std::size_t count_below(std::span<const double> s, double x) {
  std::size_t hits = 0;
  for (double v : s) {
    if (x > v) ++hits;
  }
  return hits;
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  constexpr int kMaxSteps = 100000;
  for (int m = 1; m <= kMaxSteps; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 4.0 * kEps) return h;
  }
  throw Error(ErrorCode::SeriesNonConvergence, "incomplete beta continued fraction");
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Upper tail P[T > t] of the central t for t >= 0.
double t_upper_tail(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  // x = df / (df + t^2), computed together with its complement.
  const double x = df / (df + t2);
  const double y = t2 / (df + t2);
  return 0.5 * incomplete_beta(0.5 * df, 0.5, x, y);
}

// Benton & Krishnamoorthy series for P[T <= t], t >= 0, summed outwards
// from the Poisson mode so large noncentralities stay accurate.
double noncentral_lower(double t, double df, double delta) {
  const double t2 = t * t;
  const double x = t2 / (t2 + df);
  const double y = df / (t2 + df);
  const double base = normal_cdf(-delta);
  if (!(x > 0.0)) return base;

  const double lambda = 0.5 * delta * delta;
  const double b = 0.5 * df;
  const double k = std::floor(lambda);
  const double log_pk = lambda > 0.0 ? -lambda + k * std::log(lambda) - std::lgamma(k + 1.0) : 0.0;
  const double pk = std::exp(log_pk);
  const double qk =
      pk * delta * std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 1.5)) / std::numbers::sqrt2;

  const double a1 = k + 0.5;
  const double a2 = k + 1.0;
  const double ix1 = incomplete_beta(a1, b, x, y);
  const double ix2 = incomplete_beta(a2, b, x, y);
  const double log_x = std::log(x);
  const double log_y = std::log(y);
  auto step_term = [&](double a) {
    // x^a y^b / (a B(a, b)) = I_x(a, b) - I_x(a + 1, b)
    return std::exp(a * log_x + b * log_y - std::log(a) - log_beta(a, b));
  };
  const double g1 = step_term(a1);
  const double g2 = step_term(a2);

  double sum = 0.0;
  long terms = 0;

  // Forward from the mode.
  {
    double p = pk, q = qk, i1 = ix1, i2 = ix2, s1 = g1, s2 = g2, c1 = a1, c2 = a2;
    for (double j = k;; j += 1.0) {
      sum += p * i1 + q * i2;
      i1 = std::max(0.0, i1 - s1);
      i2 = std::max(0.0, i2 - s2);
      s1 *= x * (c1 + b) / (c1 + 1.0);
      s2 *= x * (c2 + b) / (c2 + 1.0);
      c1 += 1.0;
      c2 += 1.0;
      p *= lambda / (j + 1.0);
      q *= lambda / (j + 1.5);
      // Remaining Poisson mass past j+1 is geometric-bounded since j+2 > lambda;
      // |Q_i| <= P_i on this side of the mode.
      const double tail = p / (1.0 - lambda / (j + 2.0));
      if (2.0 * tail * std::max(i1, i2) < kSeriesTolerance) break;
      if (++terms > kSeriesMaxTerms) {
        throw Error(ErrorCode::SeriesNonConvergence, "noncentral t forward series");
      }
    }
  }

  // Backward from the mode towards j = 0.
  {
    double p = pk, q = qk, i1 = ix1, i2 = ix2, s1 = g1, s2 = g2, c1 = a1, c2 = a2;
    for (double j = k - 1.0; j >= 0.0; j -= 1.0) {
      s1 *= c1 / ((c1 - 1.0 + b) * x);
      s2 *= c2 / ((c2 - 1.0 + b) * x);
      c1 -= 1.0;
      c2 -= 1.0;
      i1 = std::min(1.0, i1 + s1);
      i2 = std::min(1.0, i2 + s2);
      p *= (j + 1.0) / lambda;
      q *= (j + 1.5) / lambda;
      sum += p * i1 + q * i2;
      if (p + std::fabs(q) < 1e-3 * kSeriesTolerance) break;
      if (++terms > kSeriesMaxTerms) {
        throw Error(ErrorCode::SeriesNonConvergence, "noncentral t backward series");
      }
    }
  }

  return base + 0.5 * sum;
}

}  // namespace

double percentile(std::span<const double> s, double x) {
  require_non_empty(s);
  return static_cast<double>(count_below(s, x)) / static_cast<double>(s.size());
}

double percentile_corrected(std::span<const double> s, double x) {
  require_non_empty(s);
  return (1.0 + static_cast<double>(count_below(s, x))) / (static_cast<double>(s.size()) + 1.0);
}

double mean(std::span<const double> s) {
  require_non_empty(s);
  double total = 0.0;
  for (double v : s) total += v;
  return total / static_cast<double>(s.size());
}

double sample_variance(std::span<const double> s) {
  if (s.size() < 2) {
    throw Error(ErrorCode::TooFewSamples, "variance needs at least 2 samples");
  }
  const double mu = mean(s);
  double ss = 0.0;
  for (double v : s) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(s.size() - 1);
}

double pooled_std(std::span<const double> s1, std::span<const double> s2) {
  return std::sqrt(0.5 * (sample_variance(s1) + sample_variance(s2)));
}

double effect_size(std::span<const double> s1, std::span<const double> s2) {
  const double pooled = pooled_std(s1, s2);
  if (pooled == 0.0) {
    throw Error(ErrorCode::ZeroPooledStd, "both impact samples are constant");
  }
  return (mean(s1) - mean(s2)) / pooled;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(y) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, y) / b;
}

double central_t_cdf(double x, double df) {
  require_df(df);
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  const double tail = t_upper_tail(std::fabs(x), df);
  return x >= 0.0 ? 1.0 - tail : tail;
}

double central_t_ppf(double p, double df) {
  require_df(df);
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidProbability,
                "quantile probability must lie in (0, 1), got " + std::to_string(p));
  }
  if (p == 0.5) return 0.0;
  const double tail = std::min(p, 1.0 - p);
  // Solve upper_tail(t) = tail for t >= 0; upper_tail is decreasing.
  auto f = [&](double t) { return tail - t_upper_tail(t, df); };
  double hi = 1.0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorCode::NoRootBracket, "t quantile bracket");
  }
  const auto root = brent_root(f, 0.0, hi, 4.0 * kEps, 1e-300, 400);
  const double t = 0.5 * (root.upper + root.lower);
  return p < 0.5 ? -t : t;
}

double noncentral_t_cdf(double x, double df, double nc) {
  require_df(df);
  if (std::isnan(x) || std::isnan(nc)) return std::numeric_limits<double>::quiet_NaN();
  if (nc == 0.0) return central_t_cdf(x, df);
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  const double value = x >= 0.0 ? noncentral_lower(x, df, nc) : 1.0 - noncentral_lower(-x, df, -nc);
  return std::clamp(value, 0.0, 1.0);
}

double tt_test_power(double alpha, double iterations, double d) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidProbability, "alpha must lie in (0, 1)");
  }
  if (!(iterations >= 2.0)) {
    throw Error(ErrorCode::TooFewIterations, "power needs at least 2 iterations");
  }
  const double df = iterations - 1.0;
  const double critical = central_t_ppf(alpha, df);
  return noncentral_t_cdf(critical, df, -std::sqrt(iterations) * d);
}

double solve_required_iterations(const PowerQuery& q) {
  if (!std::isfinite(q.effect_size)) {
    throw Error(ErrorCode::InvalidConfig, "effect size must be finite");
  }
  if (!(q.target_power > 0.0 && q.target_power < 1.0)) {
    throw Error(ErrorCode::InvalidProbability, "target power must lie in (0, 1)");
  }
  auto gap = [&](double iterations) {
    return tt_test_power(q.alpha, iterations, q.effect_size) - q.target_power;
  };
  if (gap(kMinIterations) >= 0.0) return kMinIterations;
  if (gap(kMaxIterations) < 0.0) return kUnattainable;
  return brent_root(gap, kMinIterations, kMaxIterations, 1e-6, 0.0).upper;
}

RootResult brent_root(const std::function<double(double)>& f, double a, double b,
                      double rel_tol, double abs_tol, int max_evaluations) {
  double fa = f(a);
  double fb = f(b);
  int evaluations = 2;
  auto finish = [&](double x1, double f1, double x2) {
    return f1 >= 0.0 ? RootResult{x1, x2, evaluations} : RootResult{x2, x1, evaluations};
  };
  if (fa == 0.0) return RootResult{a, a, evaluations};
  if (fb == 0.0) return RootResult{b, b, evaluations};
  if ((fa > 0.0) == (fb > 0.0)) {
    throw Error(ErrorCode::NoRootBracket, "function does not change sign on [" +
                                              std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  // b is the current best estimate, c the opposite-signed bracket end.
  double c = a, fc = fa;
  double d = b - a, e = d;
  while (evaluations < max_evaluations) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * kEps * std::fabs(b) + 0.5 * (abs_tol + rel_tol * std::fabs(b));
    const double half = 0.5 * (c - b);
    if (fb == 0.0) return RootResult{b, b, evaluations};
    if (std::fabs(half) <= tol) return finish(b, fb, c);
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * half * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * half * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * half * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = half;
        e = d;
      }
    } else {
      d = half;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (half > 0.0 ? tol : -tol);
    fb = f(b);
    ++evaluations;
  }
  throw Error(ErrorCode::SeriesNonConvergence, "root search exceeded its evaluation budget");
}

}  // namespace powershap::stats

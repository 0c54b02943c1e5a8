#pragma once

// Shared statistics: order statistics, regression, distribution distances,
// quadrature, and numeric CDF oracles used throughout the experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rmt/rng.hpp"

namespace rmt {

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  const size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
  return 0.5 * (v[n / 2 - 1] + hi);
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need >= 2 samples");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double stddev(const std::vector<double>& v) { return std::sqrt(variance(v)); }

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = a + b x; optional weights.
inline RegressionFit linear_fit(const std::vector<double>& x,
                                const std::vector<double>& y,
                                const std::vector<double>& w = {}) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("linear_fit: bad input");
  std::vector<double> ww = w.empty() ? std::vector<double>(n, 1.0) : w;
  if (ww.size() != n) throw std::invalid_argument("linear_fit: weight size");
  double sw = 0, sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sw += ww[i];
    sx += ww[i] * x[i];
    sy += ww[i] * y[i];
  }
  const double xb = sx / sw, yb = sy / sw;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += ww[i] * (x[i] - xb) * (x[i] - xb);
    sxy += ww[i] * (x[i] - xb) * (y[i] - yb);
  }
  if (sxx <= 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  RegressionFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = yb - fit.slope * xb;
  if (n > 2) {
    double rss = 0;
    for (size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += ww[i] * r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
  }
  return fit;
}

/// Kolmogorov distance of a sample against a reference CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

/// Two-sample Kolmogorov distance (symmetric in its arguments).
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Binned L1 distance between a sample's density histogram and a reference pdf,
/// integrated over [lo, hi]: sum_b |count_b/n - integral_b pdf|.
inline double l1_binned(const std::vector<double>& sample, double lo, double hi,
                        int bins, const std::function<double(double)>& pdf) {
  if (sample.empty() || bins < 1 || !(hi > lo))
    throw std::invalid_argument("l1_binned: bad input");
  std::vector<double> counts(bins, 0.0);
  const double w = (hi - lo) / bins;
  double inside = 0;
  for (double x : sample) {
    if (x < lo || x >= hi) continue;
    counts[static_cast<size_t>((x - lo) / w)] += 1.0;
    inside += 1.0;
  }
  const double n = static_cast<double>(sample.size());
  double d = (n - inside) / n;  // mass the reference cannot match outside the range
  for (int b = 0; b < bins; ++b) {
    // Simpson on the cell is plenty for smooth references.
    const double a = lo + b * w;
    const double p = w / 6.0 * (pdf(a) + 4.0 * pdf(a + 0.5 * w) + pdf(a + w));
    d += std::abs(counts[b] / n - p);
  }
  return d;
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40) {
  struct Rec {
    static double simpson(const std::function<double(double)>& f, double a, double fa,
                          double b, double fb, double fm) {
      return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    static double go(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double fm, double whole, double tol,
                     int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = simpson(f, a, fa, m, fm, flm);
      const double right = simpson(f, m, fm, b, fb, frm);
      if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return go(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
             go(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
    }
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = Rec::simpson(f, a, fa, b, fb, fm);
  return Rec::go(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

/// Tabulated CDF of an (unnormalized) pdf on [0, x_max]; normalizes to 1.
/// Used as an oracle for reference gap laws that lack closed-form CDFs.
class NumericCdf {
 public:
  NumericCdf(const std::function<double(double)>& pdf, double x_lo, double x_hi,
             int n = 4096)
      : lo_(x_lo), hi_(x_hi), cdf_(static_cast<size_t>(n) + 1, 0.0) {
    if (n < 8 || !(x_hi > x_lo)) throw std::invalid_argument("NumericCdf: bad input");
    const double h = (x_hi - x_lo) / n;
    double acc = 0.0;
    double fprev = pdf(x_lo);
    for (int i = 1; i <= n; ++i) {
      const double x = x_lo + i * h;
      const double fm = pdf(x - 0.5 * h);
      const double fx = pdf(x);
      acc += h / 6.0 * (fprev + 4.0 * fm + fx);
      cdf_[static_cast<size_t>(i)] = acc;
      fprev = fx;
    }
    if (!(acc > 0)) throw std::invalid_argument("NumericCdf: zero mass");
    for (auto& c : cdf_) c /= acc;
  }

  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const double t = (x - lo_) / (hi_ - lo_) * (cdf_.size() - 1);
    const size_t i = std::min(static_cast<size_t>(t), cdf_.size() - 2);
    const double frac = t - static_cast<double>(i);
    return cdf_[i] * (1.0 - frac) + cdf_[i + 1] * frac;
  }

  /// Inverse CDF by bisection; handy for drawing oracle samples.
  double inverse(double u) const {
    double a = lo_, b = hi_;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      ((*this)(m) < u ? a : b) = m;
    }
    return 0.5 * (a + b);
  }

 private:
  double lo_, hi_;
  std::vector<double> cdf_;
};

struct BootstrapCi {
  double value = 0.0;
  double radius = 0.0;  // half-width of the central 90% resampling interval
};

/// Nonparametric bootstrap of a sample statistic (default 200 resamples).
inline BootstrapCi bootstrap(const std::vector<double>& sample,
                             const std::function<double(const std::vector<double>&)>& stat,
                             CounterRng& rng, int resamples = 200) {
  if (sample.empty()) throw std::invalid_argument("bootstrap: empty sample");
  std::vector<double> vals(resamples);
  std::vector<double> re(sample.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& x : re)
      x = sample[static_cast<size_t>(rng.uniform() * sample.size())];
    vals[r] = stat(re);
  }
  std::sort(vals.begin(), vals.end());
  const auto q = [&](double p) {
    const double t = p * (vals.size() - 1);
    const size_t i = static_cast<size_t>(t);
    const double f = t - i;
    return i + 1 < vals.size() ? vals[i] * (1 - f) + vals[i + 1] * f : vals.back();
  };
  BootstrapCi ci;
  ci.value = stat(sample);
  ci.radius = 0.5 * (q(0.95) - q(0.05));
  return ci;
}

}  // namespace rmt

#pragma once

// Unfolding, reference laws (Wigner surmise, sine kernel), pair-correlation
// estimation, and distribution-distance reports.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmt/semicircle.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stats.hpp"

namespace rmt {

/// Unfolded nearest-neighbour gaps restricted to a bulk index window.
struct GapSample {
  std::vector<double> gaps;  // g_k = N rho(gamma_k) (lambda_{k+1} - lambda_k)
  int first = 0, last = 0;   // index window [first, last)
  std::string source;

  double mean_gap() const { return mean(gaps); }
};

inline constexpr double kEdgeExclusion = 0.1;  // bulk windows stay inside [aN, (1-a)N]

/// Gaps scaled by N rho(gamma_k); the window must stay clear of the edge
/// bands (fraction kEdgeExclusion on both sides).
template <class Model>
GapSample unfold(const SpectralData& S, const Model& model, int first, int last) {
  const int N = S.dim();
  if (first < 0 || last > N - 1 || first >= last)
    throw std::invalid_argument("unfold: bad window");
  const int lo_band = static_cast<int>(kEdgeExclusion * N);
  const int hi_band = N - lo_band;
  if (first < lo_band || last > hi_band)
    throw std::invalid_argument("unfold: window touches the edge bands");
  GapSample out;
  out.first = first;
  out.last = last;
  out.gaps.reserve(static_cast<size_t>(last - first));
  for (int k = first; k < last; ++k) {
    const double gamma_k = model.gamma(k + 1, N);  // 1-based classical index
    const double rho = model.rho(gamma_k);
    out.gaps.push_back(N * rho * (S.eigenvalues[k + 1] - S.eigenvalues[k]));
  }
  return out;
}

/// Default bulk window for size N.
inline std::pair<int, int> bulk_window(int N) {
  const int lo = static_cast<int>(kEdgeExclusion * N);
  return {lo, N - lo - 1};
}

/// Unfolded positions N n(lambda_k) for bulk indices; unit mean spacing.
template <class Model>
std::vector<double> unfolded_positions(const SpectralData& S, const Model& model,
                                       int first, int last) {
  std::vector<double> x;
  x.reserve(static_cast<size_t>(last - first));
  for (int k = first; k < last; ++k)
    x.push_back(S.dim() * model.counting(S.eigenvalues[k]));
  return x;
}

// ---- reference laws ---------------------------------------------------------

/// Wigner surmise density (pi s / 2) exp(-pi s^2 / 4).
inline double surmise_pdf(double s) {
  if (s < 0.0) return 0.0;
  return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
}

inline double surmise_cdf(double s) {
  if (s <= 0.0) return 0.0;
  return 1.0 - std::exp(-0.25 * M_PI * s * s);
}

/// Sine kernel K(r) = sin(pi r)/(pi r), K(0) = 1.
inline double sine_kernel(double r) {
  const double x = M_PI * r;
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

/// n-point correlation det(K(a_i - a_j)) of the determinantal sine process.
inline double npoint_correlation(const std::vector<double>& alpha) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = sine_kernel(alpha[i] - alpha[j]);
  return K.determinant();
}

/// Two-point reference 1 - K(r)^2 of the unitary symmetry class.
inline double pair_correlation_reference(double r) {
  const double k = sine_kernel(r);
  return 1.0 - k * k;
}

// ---- estimators -------------------------------------------------------------

struct CorrelationCurve {
  std::vector<double> r;
  std::vector<double> value;
  long pair_count = 0;
};

/// Box-kernel estimate of the two-point function of unfolded point sets.
/// Anchors are restricted so the probe interval stays inside each window,
/// which keeps the estimator unbiased at unit intensity.
inline CorrelationCurve pair_correlation(const std::vector<std::vector<double>>& sets,
                                         double r_max = 3.0, double dr = 0.1) {
  if (sets.empty()) throw std::invalid_argument("pair_correlation: no input");
  const int bins = static_cast<int>(std::round(r_max / dr));
  CorrelationCurve out;
  out.r.resize(bins);
  out.value.assign(bins, 0.0);
  for (int b = 0; b < bins; ++b) out.r[b] = (b + 0.5) * dr;
  double anchors = 0.0;
  for (const auto& set : sets) {
    if (set.size() < 4) continue;
    const double hi = set.back();
    for (size_t i = 0; i < set.size(); ++i) {
      if (set[i] > hi - r_max) break;  // sets are sorted
      anchors += 1.0;
      for (size_t j = i + 1; j < set.size(); ++j) {
        const double d = set[j] - set[i];
        if (d >= r_max) break;
        out.value[static_cast<size_t>(d / dr)] += 1.0;
        ++out.pair_count;
      }
    }
  }
  if (anchors < 1.0) throw std::invalid_argument("pair_correlation: too few points");
  for (auto& v : out.value) v /= anchors * dr;
  return out;
}

/// Mean absolute deviation of a curve from a reference over its r-range.
inline double curve_l1(const CorrelationCurve& c,
                       const std::function<double(double)>& ref) {
  double acc = 0.0;
  for (size_t b = 0; b < c.r.size(); ++b) acc += std::abs(c.value[b] - ref(c.r[b]));
  return acc / static_cast<double>(c.r.size());
}

// ---- distances --------------------------------------------------------------

struct ComparisonReport {
  double ks = 0.0;
  double l1 = 0.0;
  double mean_delta = 0.0;
  double var_delta = 0.0;
  size_t count = 0;
  double ks_ci = 0.0;  // bootstrap half-widths, 200 resamples
  double l1_ci = 0.0;
};

/// Sample against a reference law given by its cdf and pdf.
inline ComparisonReport distribution_distance(const GapSample& sample,
                                              const std::function<double(double)>& cdf,
                                              const std::function<double(double)>& pdf,
                                              uint64_t seed = 12345) {
  if (sample.gaps.empty()) throw std::invalid_argument("distribution_distance: empty");
  const auto& g = sample.gaps;
  ComparisonReport rep;
  rep.count = g.size();
  rep.ks = ks_statistic(g, cdf);
  const double hi = *std::max_element(g.begin(), g.end()) + 1e-9;
  rep.l1 = l1_binned(g, 0.0, hi, 40, pdf);
  // reference moments by quadrature
  const double ref_mean = integrate([&](double s) { return s * pdf(s); }, 0.0, hi + 10.0);
  const double ref_m2 = integrate([&](double s) { return s * s * pdf(s); }, 0.0, hi + 10.0);
  rep.mean_delta = mean(g) - ref_mean;
  rep.var_delta = variance(g) - (ref_m2 - ref_mean * ref_mean);
  CounterRng rng(seed, 0xb007);
  rep.ks_ci = bootstrap(g, [&](const std::vector<double>& v) {
                return ks_statistic(v, cdf);
              }, rng).radius;
  rep.l1_ci = bootstrap(g, [&](const std::vector<double>& v) {
                return l1_binned(v, 0.0, hi, 40, pdf);
              }, rng).radius;
  return rep;
}

/// Two-sample mode; symmetric in its arguments.
inline ComparisonReport distribution_distance(const std::vector<double>& a,
                                              const std::vector<double>& b,
                                              uint64_t seed = 12345) {
  if (a.empty() || b.empty()) throw std::invalid_argument("distribution_distance: empty");
  ComparisonReport rep;
  rep.count = a.size() + b.size();
  rep.ks = ks_two_sample(a, b);
  const double hi = std::max(*std::max_element(a.begin(), a.end()),
                             *std::max_element(b.begin(), b.end())) + 1e-9;
  // binned L1 between the two empirical densities
  const int bins = 40;
  std::vector<double> ca(bins, 0.0), cb(bins, 0.0);
  for (double x : a)
    if (x >= 0 && x < hi) ca[static_cast<size_t>(x / hi * bins)] += 1.0 / a.size();
  for (double x : b)
    if (x >= 0 && x < hi) cb[static_cast<size_t>(x / hi * bins)] += 1.0 / b.size();
  for (int k = 0; k < bins; ++k) rep.l1 += std::abs(ca[k] - cb[k]);
  rep.mean_delta = mean(a) - mean(b);
  rep.var_delta = variance(a) - variance(b);
  CounterRng rng(seed, 0xb007);
  // bootstrap the KS by resampling the first argument against the second
  rep.ks_ci = bootstrap(a, [&](const std::vector<double>& v) {
                return ks_two_sample(v, b);
              }, rng).radius;
  return rep;
}

}  // namespace rmt

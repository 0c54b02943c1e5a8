#pragma once

// Beta-ensembles for general beta > 0: the Gibbs measure with Hamiltonian
//   H(x) = sum_k V(x_k)/2 - (1/N) sum_{i<j} log(x_j - x_i),
// its equilibrium density, exact Gaussian-beta sampling via the tridiagonal
// model, coordinate-wise Metropolis sampling for convex V, and the locally
// conditioned measures with boundary configuration y.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmt/rng.hpp"
#include "rmt/semicircle.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stats.hpp"

namespace rmt {

struct Potential {
  std::string tag = "quadratic";
  std::vector<double> coeffs = {0.0, 0.0, 0.5};  // c0 + c1 x + c2 x^2 + ...
  double inf_d2V = 1.0;

  double V(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  double dV(double x) const {
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 1;) acc = acc * x + coeffs[k] * k;
    return acc;
  }
  double d2V(double x) const {
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 2;)
      acc = acc * x + coeffs[k] * static_cast<double>(k) * (k - 1);
    return acc;
  }

  bool even() const {
    for (size_t k = 1; k < coeffs.size(); k += 2)
      if (coeffs[k] != 0.0) return false;
    return true;
  }

  static Potential quadratic() { return Potential{}; }

  static Potential quartic() {
    Potential p;
    p.tag = "quartic";
    p.coeffs = {0.0, 0.0, 0.5, 0.0, 0.25};  // x^2/2 + x^4/4
    p.inf_d2V = 1.0;
    return p;
  }

  static Potential custom_polynomial(std::vector<double> coeffs) {
    Potential p;
    p.tag = "custom-polynomial";
    p.coeffs = std::move(coeffs);
    // record a grid lower bound for V'' (exact enough for convexity checks)
    double lo = std::numeric_limits<double>::infinity();
    for (int i = -4000; i <= 4000; ++i) lo = std::min(lo, p.d2V(i * 0.005));
    p.inf_d2V = lo;
    return p;
  }
};

struct BetaSpec {
  int N = 8;
  double beta = 2.0;
  Potential V;

  void validate() const {
    if (N < 1) throw std::invalid_argument("BetaSpec: N >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("BetaSpec: beta > 0");
  }

  /// log of the (unnormalized) Gibbs density on ordered configurations.
  double log_density(const Eigen::VectorXd& x) const {
    double lp = 0.0;
    for (int i = 0; i < N; ++i) lp -= 0.5 * beta * N * V.V(x[i]);
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) lp += beta * std::log(x[j] - x[i]);
    return lp;
  }
};

// ---- equilibrium density ----------------------------------------------------

class EquilibriumModel {
 public:
  double A = -2.0, B = 2.0;
  bool analytic_semicircle = true;

  double rho(double x) const {
    if (analytic_semicircle) return SemicircleModel::density(x);
    if (x <= A || x >= B) return 0.0;
    const double t = (x - lo_) / w_ - 0.5;
    const auto i = static_cast<long>(std::floor(t));
    if (i < 0) return nu_.front();
    if (i + 1 >= static_cast<long>(nu_.size())) return nu_.back();
    const double f = t - static_cast<double>(i);
    return nu_[static_cast<size_t>(i)] * (1.0 - f) + nu_[static_cast<size_t>(i) + 1] * f;
  }

  double counting(double E) const {
    if (analytic_semicircle) return SemicircleModel::counting(E);
    if (E <= A) return 0.0;
    if (E >= B) return 1.0;
    const double t = (E - lo_) / w_;
    const auto i = std::min(static_cast<size_t>(t), nu_.size() - 1);
    const double f = t - static_cast<double>(i);
    return cum_[i] + nu_[i] * f * w_;
  }

  double gamma(long j, long N) const {
    if (analytic_semicircle) return SemicircleModel::classical_location(j, N);
    if (j < 1 || j > N) throw std::invalid_argument("gamma: 1 <= j <= N");
    const double target = static_cast<double>(j) / static_cast<double>(N);
    double lo = A, hi = B;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (counting(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double rho_at_gamma(long j, long N) const { return rho(gamma(j, N)); }
  double lower() const { return A; }
  double upper() const { return B; }

  // grid data (numeric case)
  double lo_ = 0.0, w_ = 0.0;
  std::vector<double> nu_;   // density at cell midpoints
  std::vector<double> cum_;  // cumulative mass up to each cell's left edge
};

namespace detail {

/// Cell-averaged log kernel: K_ij = log w + F(|i-j|) where
/// F(k) = int (1-|d|) log(k+d) dd over [-1,1], F(0) = -3/2 exactly.
inline std::vector<double> log_kernel_offsets(int n) {
  std::vector<double> F(static_cast<size_t>(n), 0.0);
  F[0] = -1.5;
  for (int k = 1; k < n; ++k)
    F[static_cast<size_t>(k)] = integrate(
        [k](double d) { return (1.0 - std::abs(d)) * std::log(k + d); }, -1.0, 1.0,
        1e-12);
  return F;
}

struct EquilibriumGridSolution {
  double lo = 0.0, w = 0.0;
  std::vector<double> nu;
};

/// Minimizes I(nu) = int V nu - iint log|t-s| nu nu over probability densities
/// on an n-cell grid, by active-set solution of the KKT system. Convex V with
/// single-interval support is assumed.
inline EquilibriumGridSolution solve_equilibrium_grid(const Potential& V, double lo,
                                                      double hi, int n) {
  const double w = (hi - lo) / n;
  std::vector<double> t(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<size_t>(i)] = lo + (i + 0.5) * w;
  const auto F = log_kernel_offsets(n);
  const double logw = std::log(w);
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = logw + F[static_cast<size_t>(std::abs(i - j))];

  std::vector<char> active(static_cast<size_t>(n), 1);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(n);
  for (int pass = 0; pass < 100; ++pass) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (active[static_cast<size_t>(i)]) idx.push_back(i);
    const int m = static_cast<int>(idx.size());
    if (m == 0) throw std::runtime_error("equilibrium_model: empty active set");
    Eigen::MatrixXd M(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) M(a, b) = 2.0 * w * K(idx[a], idx[b]);
      M(a, m) = 1.0;
      M(m, a) = w;
      rhs[a] = V.V(t[static_cast<size_t>(idx[a])]);
    }
    M(m, m) = 0.0;
    rhs[m] = 1.0;
    Eigen::VectorXd sol = M.partialPivLu().solve(rhs);
    const double lambda = sol[m];

    bool dropped = false;
    nu.setZero();
    for (int a = 0; a < m; ++a) {
      if (sol[a] < 0.0) {
        active[static_cast<size_t>(idx[a])] = 0;
        dropped = true;
      } else {
        nu[idx[a]] = sol[a];
      }
    }
    if (dropped) continue;

    // off-support optimality: V - 2 w K nu >= lambda
    bool added = false;
    for (int i = 0; i < n; ++i) {
      if (active[static_cast<size_t>(i)]) continue;
      const double g = V.V(t[static_cast<size_t>(i)]) - 2.0 * w * K.row(i).dot(nu);
      if (g < lambda - 1e-10) {
        active[static_cast<size_t>(i)] = 1;
        added = true;
      }
    }
    if (!added) {
      EquilibriumGridSolution out;
      out.lo = lo;
      out.w = w;
      out.nu.assign(nu.data(), nu.data() + n);
      return out;
    }
  }
  throw std::runtime_error("equilibrium_model: active-set iteration did not converge");
}

}  // namespace detail

/// Equilibrium density of the log-gas with external potential V. The
/// quadratic potential returns the closed-form semicircle; other convex
/// potentials are solved on a grid (first on a wide interval to locate the
/// support, then re-gridded tightly around it).
inline EquilibriumModel equilibrium_model(const Potential& V, int n = 512,
                                          double wide = 3.5) {
  if (V.tag == "quadratic" && V.coeffs == std::vector<double>{0.0, 0.0, 0.5}) {
    EquilibriumModel m;
    m.analytic_semicircle = true;
    return m;
  }
  if (V.inf_d2V <= 0.0)
    throw std::invalid_argument("equilibrium_model: convex potential required");

  auto sol = detail::solve_equilibrium_grid(V, -wide, wide, n);
  // locate support and re-solve on a snug interval for resolution
  int first = -1, last = -1;
  for (int i = 0; i < n; ++i)
    if (sol.nu[static_cast<size_t>(i)] > 0.0) {
      if (first < 0) first = i;
      last = i;
    }
  const double pad = 2.0 * sol.w;
  const double lo = sol.lo + first * sol.w - pad;
  const double hi = sol.lo + (last + 1) * sol.w + pad;
  sol = detail::solve_equilibrium_grid(V, lo, hi, n);

  EquilibriumModel m;
  m.analytic_semicircle = false;
  m.lo_ = sol.lo;
  m.w_ = sol.w;
  m.nu_ = sol.nu;
  if (V.even()) {
    for (int i = 0; i < n / 2; ++i) {
      const double avg = 0.5 * (m.nu_[static_cast<size_t>(i)] +
                                m.nu_[static_cast<size_t>(n - 1 - i)]);
      m.nu_[static_cast<size_t>(i)] = avg;
      m.nu_[static_cast<size_t>(n - 1 - i)] = avg;
    }
  }
  // exact unit mass on the grid
  double mass = 0.0;
  for (double v : m.nu_) mass += v * m.w_;
  for (auto& v : m.nu_) v /= mass;
  m.cum_.assign(m.nu_.size() + 1, 0.0);
  for (size_t i = 0; i < m.nu_.size(); ++i)
    m.cum_[i + 1] = m.cum_[i] + m.nu_[i] * m.w_;
  m.cum_.pop_back();
  int first2 = -1, last2 = -1;
  for (int i = 0; i < n; ++i)
    if (m.nu_[static_cast<size_t>(i)] > 0.0) {
      if (first2 < 0) first2 = i;
      last2 = i;
    }
  m.A = m.lo_ + first2 * m.w_;
  m.B = m.lo_ + (last2 + 1) * m.w_;
  return m;
}

/// sup over the interior (10% in from each edge) of the equilibrium-equation
/// residual | V'(t)/2 - PV int rho(s)/(t-s) ds |, with the principal value
/// evaluated by exact integration of the piecewise-constant density.
inline double equilibrium_residual(const EquilibriumModel& m, const Potential& V) {
  if (m.analytic_semicircle) return 0.0;
  const int n = static_cast<int>(m.nu_.size());
  const double margin = 0.1 * (m.B - m.A);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ti = m.lo_ + (i + 0.5) * m.w_;
    if (ti < m.A + margin || ti > m.B - margin) continue;
    double pv = 0.0;
    for (int j = 0; j < n; ++j) {
      if (m.nu_[static_cast<size_t>(j)] == 0.0) continue;
      const double a = m.lo_ + j * m.w_, b = a + m.w_;
      pv += m.nu_[static_cast<size_t>(j)] * std::log(std::abs(ti - a) / std::abs(ti - b));
    }
    worst = std::max(worst, std::abs(0.5 * V.dV(ti) - pv));
  }
  return worst;
}

// ---- exact Gaussian-beta sampling -------------------------------------------

/// Eigenvalues distributed as the Gaussian beta-ensemble (V = x^2/2) via the
/// symmetric tridiagonal random model of the cited construction, rescaled so
/// the spectrum concentrates on [-2,2]. Validated against the Metropolis
/// sampler (the cross-check is the ground truth for the construction).
inline SpectralData tridiagonal_sample(int N, double beta, uint64_t seed) {
  if (N < 1 || !(beta > 0.0)) throw std::invalid_argument("tridiagonal_sample: bad args");
  CounterRng rng(seed, 0x7d1);
  Eigen::VectorXd diag(N), sub(std::max(N - 1, 0));
  for (int i = 0; i < N; ++i) diag[i] = rng.normal();
  for (int i = 0; i < N - 1; ++i)
    sub[i] = rng.chi(beta * static_cast<double>(N - 1 - i)) / std::sqrt(2.0);
  SpectralData out;
  if (N == 1) {
    out.eigenvalues = diag;
  } else {
    out.eigenvalues = tridiagonal_eigenvalues(diag, sub);
  }
  out.eigenvalues *= std::sqrt(2.0 / (beta * static_cast<double>(N)));
  return out;
}

// ---- Metropolis samplers ----------------------------------------------------

inline double metropolis_acceptance(double lp_from, double lp_to) {
  return std::min(1.0, std::exp(lp_to - lp_from));
}

struct McmcRun {
  std::vector<Eigen::VectorXd> configs;
  double acceptance = 0.0;
  double autocorr_time = 1.0;  // integrated, of the top coordinate
  double proposal_scale = 0.0;
};

namespace detail {

inline double integrated_autocorr(const std::vector<double>& series) {
  const size_t n = series.size();
  if (n < 16) return 1.0;
  const double mu = mean(series);
  double var = 0.0;
  for (double x : series) var += (x - mu) * (x - mu);
  var /= static_cast<double>(n);
  if (var <= 0.0) return 1.0;
  double tau = 1.0;
  for (size_t lag = 1; lag < n / 4; ++lag) {
    double c = 0.0;
    for (size_t i = 0; i + lag < n; ++i) c += (series[i] - mu) * (series[i + lag] - mu);
    c /= var * static_cast<double>(n - lag);
    if (c < 0.02) break;
    tau += 2.0 * c;
  }
  return tau;
}

// Coordinate-wise random-walk Metropolis on ordered configurations. The
// delta log-density callback sees (index, old value, new value); proposals
// breaking the ordering (or leaving the allowed box) are rejected outright.
template <class DeltaLp>
McmcRun metropolis_ordered(Eigen::VectorXd x, double box_lo, double box_hi,
                           long retained, long burnin_sweeps, int thinning,
                           double scale0, uint64_t seed, DeltaLp&& delta_lp) {
  const int n = static_cast<int>(x.size());
  CounterRng rng(seed, 0x3c3c);
  double scale = scale0;
  McmcRun out;
  out.configs.reserve(static_cast<size_t>(retained));
  long accepted = 0, proposed = 0;
  long adapt_acc = 0, adapt_prop = 0;
  const long total_sweeps = burnin_sweeps + retained * thinning;
  std::vector<double> top_series;
  top_series.reserve(static_cast<size_t>(retained));
  for (long sweep = 0; sweep < total_sweeps; ++sweep) {
    const bool burning = sweep < burnin_sweeps;
    for (int i = 0; i < n; ++i) {
      const double prop = x[i] + scale * rng.normal();
      ++adapt_prop;
      if (!burning) ++proposed;
      const double lo = i > 0 ? x[i - 1] : box_lo;
      const double hi = i + 1 < n ? x[i + 1] : box_hi;
      if (!(prop > lo && prop < hi)) continue;
      const double dlp = delta_lp(i, x[i], prop);
      if (dlp >= 0.0 || rng.uniform_pos() < std::exp(dlp)) {
        x[i] = prop;
        ++adapt_acc;
        if (!burning) ++accepted;
      }
    }
    if (burning && (sweep + 1) % 50 == 0) {
      const double rate = static_cast<double>(adapt_acc) / static_cast<double>(adapt_prop);
      scale *= std::exp(0.5 * (rate - 0.35));  // aim for 30-40% acceptance
      adapt_acc = adapt_prop = 0;
    }
    if (!burning && (sweep - burnin_sweeps) % thinning == 0 &&
        static_cast<long>(out.configs.size()) < retained) {
      out.configs.push_back(x);
      top_series.push_back(x[n - 1]);
    }
  }
  out.acceptance = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
  out.autocorr_time = integrated_autocorr(top_series);
  out.proposal_scale = scale;
  return out;
}

}  // namespace detail

/// Metropolis sampler targeting the full gas measure. Returns `retained`
/// ordered configurations after `burnin_sweeps` sweeps, one every `thinning`
/// sweeps.
inline McmcRun mcmc_sample(const BetaSpec& spec, long retained, long burnin_sweeps,
                           int thinning, uint64_t seed) {
  spec.validate();
  if (spec.V.inf_d2V <= 0.0)
    throw std::invalid_argument("mcmc_sample: convex potential required");
  const int N = spec.N;
  const auto model = equilibrium_model(spec.V);
  Eigen::VectorXd x(N);
  for (int j = 0; j < N; ++j) x[j] = model.gamma(j + 1, N + 1);
  const double bN = spec.beta * N;
  auto delta_lp = [&](int i, double oldv, double newv) {
    double d = -0.5 * bN * (spec.V.V(newv) - spec.V.V(oldv));
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      d += spec.beta * (std::log(std::abs(newv - x[j])) - std::log(std::abs(oldv - x[j])));
    }
    return d;
  };
  const double spacing = (model.upper() - model.lower()) / N;
  return detail::metropolis_ordered(x, -1e30, 1e30, retained, burnin_sweeps, thinning,
                                    2.0 * spacing, seed, delta_lp);
}

// ---- locally conditioned measures -------------------------------------------

/// Safety constant of the conditioned-potential curvature bound
/// V_y''(x) >= inf V'' + c / d(x); calibrated once on classical-location
/// boundary data (N = 200, K = 4, quadratic V) and frozen.
inline constexpr double kCurvatureC = 0.5;

struct ConditionalSpec {
  int N = 0;
  int L = 0, K = 0;  // window I = [L-K, L+K], 1-based
  std::vector<double> y_lower;  // indices 1 .. L-K-1
  std::vector<double> y_upper;  // indices L+K+1 .. N
  double xi = 1.0;              // good-set exponent
  double edge_alpha = 0.1;      // good-set bulk band parameter

  int window_size() const { return 2 * K + 1; }
  double J_lo() const { return y_lower.back(); }
  double J_hi() const { return y_upper.front(); }
  double J_len() const { return J_hi() - J_lo(); }
  double ybar() const { return 0.5 * (J_lo() + J_hi()); }

  /// Equidistant labels alpha_j for j in [L-K, L+K] (1-based j).
  double alpha_point(int j) const {
    return ybar() + (static_cast<double>(j - L) / (window_size() + 1)) * J_len();
  }

  double dist_to_boundary(double x) const {
    return std::min(x - J_lo(), J_hi() - x);
  }

  double Vy(double x, const Potential& V) const {
    double acc = V.V(x);
    for (double y : y_lower) acc -= 2.0 / N * std::log(std::abs(x - y));
    for (double y : y_upper) acc -= 2.0 / N * std::log(std::abs(x - y));
    return acc;
  }
  double dVy(double x, const Potential& V) const {
    double acc = V.dV(x);
    for (double y : y_lower) acc -= 2.0 / N / (x - y);
    for (double y : y_upper) acc -= 2.0 / N / (x - y);
    return acc;
  }
  double d2Vy(double x, const Potential& V) const {
    double acc = V.d2V(x);
    for (double y : y_lower) acc += 2.0 / N / ((x - y) * (x - y));
    for (double y : y_upper) acc += 2.0 / N / ((x - y) * (x - y));
    return acc;
  }

  /// min over a grid of V_y''(x) - inf V'' - c/d(x); nonnegative for good y.
  double curvature_margin(const Potential& V, double c = kCurvatureC,
                          int grid = 1000) const {
    double worst = std::numeric_limits<double>::infinity();
    for (int g = 1; g < grid; ++g) {
      const double x = J_lo() + J_len() * g / grid;
      worst = std::min(worst, d2Vy(x, V) - V.inf_d2V - c / dist_to_boundary(x));
    }
    return worst;
  }

  void validate() const {
    if (y_lower.empty() || y_upper.empty())
      throw std::invalid_argument("ConditionalSpec: window must be interior");
    if (!(J_hi() > J_lo())) throw std::invalid_argument("ConditionalSpec: empty J");
    for (size_t i = 0; i + 1 < y_lower.size(); ++i)
      if (!(y_lower[i] < y_lower[i + 1]))
        throw std::invalid_argument("ConditionalSpec: y must be strictly ordered");
    for (size_t i = 0; i + 1 < y_upper.size(); ++i)
      if (!(y_upper[i] < y_upper[i + 1]))
        throw std::invalid_argument("ConditionalSpec: y must be strictly ordered");
  }
};

/// Conditions a full ordered configuration on everything outside the window
/// I = [L-K, L+K] (1-based).
inline ConditionalSpec condition_on(const Eigen::VectorXd& lambda, int L, int K,
                                    double xi = 1.0, double edge_alpha = 0.1) {
  const int N = static_cast<int>(lambda.size());
  if (K < 0 || L - K < 2 || L + K > N - 1)
    throw std::invalid_argument("condition_on: window must be strictly interior");
  ConditionalSpec cond;
  cond.N = N;
  cond.L = L;
  cond.K = K;
  cond.xi = xi;
  cond.edge_alpha = edge_alpha;
  for (int j = 1; j <= L - K - 1; ++j) cond.y_lower.push_back(lambda[j - 1]);
  for (int j = L + K + 1; j <= N; ++j) cond.y_upper.push_back(lambda[j - 1]);
  cond.validate();
  return cond;
}

struct GoodSetResult {
  bool good = false;
  double worst_margin = 0.0;  // max |y_k - gamma_k| / bound_k; good iff <= 1
  int worst_index = 0;
};

/// Checks the three rigidity bands of the good-boundary set: |y_k - gamma_k|
/// within K^xi/N in the bulk, N^{-4/15} K^xi in the wide band, and 1 globally.
template <class Model>
GoodSetResult good_set_check(const ConditionalSpec& cond, const Model& model) {
  const int N = cond.N;
  const double Kxi = std::pow(static_cast<double>(std::max(cond.K, 1)), cond.xi);
  const double bulk_lo = cond.edge_alpha * N, bulk_hi = (1.0 - cond.edge_alpha) * N;
  const double mid_lo = std::pow(N, 0.6) * Kxi, mid_hi = N - mid_lo;
  GoodSetResult res;
  auto visit = [&](int k, double yk) {
    const double dev = std::abs(yk - model.gamma(k, N));
    double bound = 1.0;
    if (k >= bulk_lo && k <= bulk_hi) bound = std::min(bound, Kxi / N);
    else if (k >= mid_lo && k <= mid_hi) bound = std::min(bound, std::pow(N, -4.0 / 15.0) * Kxi);
    const double margin = dev / bound;
    if (margin > res.worst_margin) {
      res.worst_margin = margin;
      res.worst_index = k;
    }
  };
  for (size_t i = 0; i < cond.y_lower.size(); ++i)
    visit(static_cast<int>(i) + 1, cond.y_lower[i]);
  const int up0 = cond.L + cond.K + 1;
  for (size_t i = 0; i < cond.y_upper.size(); ++i)
    visit(up0 + static_cast<int>(i), cond.y_upper[i]);
  res.good = res.worst_margin <= 1.0;
  return res;
}

/// Metropolis chain on the interior points of the conditioned measure; moves
/// are confined to the configuration interval J and ordering is enforced.
inline McmcRun conditional_sampler(const BetaSpec& spec, const ConditionalSpec& cond,
                                   long retained, long burnin_sweeps, int thinning,
                                   uint64_t seed) {
  spec.validate();
  cond.validate();
  if (spec.N != cond.N) throw std::invalid_argument("conditional_sampler: N mismatch");
  const int K2 = cond.window_size();
  Eigen::VectorXd x(K2);
  for (int a = 0; a < K2; ++a) x[a] = cond.alpha_point(cond.L - cond.K + a);
  const double bN = spec.beta * spec.N;
  auto delta_lp = [&spec, &cond, &x, bN](int i, double oldv, double newv) {
    double d = -0.5 * bN * (spec.V.V(newv) - spec.V.V(oldv));
    for (double y : cond.y_lower)
      d += spec.beta * (std::log(newv - y) - std::log(oldv - y));
    for (double y : cond.y_upper)
      d += spec.beta * (std::log(y - newv) - std::log(y - oldv));
    for (int j = 0; j < static_cast<int>(x.size()); ++j) {
      if (j == i) continue;
      d += spec.beta * (std::log(std::abs(newv - x[j])) - std::log(std::abs(oldv - x[j])));
    }
    return d;
  };
  const double scale0 = 0.5 * cond.J_len() / (K2 + 1);
  return detail::metropolis_ordered(x, cond.J_lo(), cond.J_hi(), retained,
                                    burnin_sweeps, thinning, scale0, seed, delta_lp);
}

/// Exact density of the window-size-one conditioned measure, up to
/// normalization: exp(-beta N V_y(x) / 2) on J. Quadrature against this is
/// the oracle for the conditional sampler.
inline std::function<double(double)> conditional_k1_density(const BetaSpec& spec,
                                                            const ConditionalSpec& cond) {
  // exponent shifted by its value at the midpoint so quadrature never
  // underflows at beta N of a few hundred
  const double shift = cond.Vy(cond.ybar(), spec.V);
  return [spec, cond, shift](double x) {
    if (x <= cond.J_lo() || x >= cond.J_hi()) return 0.0;
    return std::exp(-0.5 * spec.beta * spec.N * (cond.Vy(x, spec.V) - shift));
  };
}

}  // namespace rmt

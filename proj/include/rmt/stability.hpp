#pragma once

// Stability parameters of the self-consistent equation: the inf-to-inf norms
// Gamma(z) of B = (1 - m(z)^2 S)^{-1} and GammaTilde(z) of B restricted to
// the subspace orthogonal to constants, the eta thresholds, and the random
// control parameters (Lambda, Theta, Pi, v_i).

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rmt/ensemble.hpp"
#include "rmt/semicircle.hpp"
#include "rmt/spectral.hpp"

namespace rmt {

namespace detail {

// min over c in C of sum_j |b_j - c|: the geometric median cost of the row.
// This equals sup{ |<b, v>| : ||v||_inf <= 1, sum v = 0 }, which is how the
// inf-to-inf norm restricted to the orthogonal complement of constants is
// evaluated row by row. Weiszfeld iteration with an atom-optimality check.
inline double min_shifted_abs_row_sum(const Eigen::VectorXcd& b) {
  const int n = static_cast<int>(b.size());
  if (n == 0) return 0.0;
  if (n == 1) return 0.0;  // c = b_0
  auto cost = [&](std::complex<double> c) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::abs(b[j] - c);
    return s;
  };
  // Atom optimality: c = b_k is optimal iff |sum_{j!=k} unit(b_j - b_k)| <= 1
  // (counting multiplicity of coincident atoms on the left side as 0).
  auto atom_optimal = [&](std::complex<double> c) {
    std::complex<double> g = 0.0;
    int coincident = 0;
    for (int j = 0; j < n; ++j) {
      const std::complex<double> d = b[j] - c;
      const double r = std::abs(d);
      if (r < 1e-15) { ++coincident; continue; }
      g += d / r;
    }
    return std::abs(g) <= static_cast<double>(coincident) + 1e-12;
  };
  std::complex<double> c = b.sum() / static_cast<double>(n);
  double prev = cost(c);
  for (int it = 0; it < 500; ++it) {
    std::complex<double> num = 0.0;
    double den = 0.0;
    bool on_atom = false;
    for (int j = 0; j < n; ++j) {
      const double r = std::abs(b[j] - c);
      if (r < 1e-15) { on_atom = true; continue; }
      num += b[j] / r;
      den += 1.0 / r;
    }
    if (on_atom && atom_optimal(c)) break;
    if (den == 0.0) break;
    const std::complex<double> next = num / den;
    const double cur = cost(next);
    if (!(cur < prev - 1e-15 * (1.0 + prev))) { c = next; break; }
    c = next;
    prev = cur;
  }
  // Polish against every atom; the optimum frequently sits on one.
  double best = cost(c);
  for (int j = 0; j < n; ++j) best = std::min(best, cost(b[j]));
  return best;
}

}  // namespace detail

struct GammaPair {
  double Gamma = 0.0;
  double GammaTilde = 0.0;
};

/// Dense route: invert 1 - m^2 S explicitly and take row norms. Throws if
/// 1 - m^2 S is numerically singular (reported, never masked).
inline GammaPair stability_gamma_dense(const Eigen::MatrixXd& S,
                                       std::complex<double> z) {
  const int N = static_cast<int>(S.rows());
  const std::complex<double> m2 = [&] {
    const auto m = SemicircleModel::stieltjes(z);
    return m * m;
  }();
  Eigen::MatrixXcd A = (-m2) * S.cast<std::complex<double>>();
  A.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  Eigen::MatrixXcd B = lu.inverse();
  const double residual = (A * B - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
  if (!(residual < 1e-6))
    throw std::runtime_error("stability_gamma: 1 - m^2 S is numerically singular");
  GammaPair out;
  for (int i = 0; i < N; ++i) {
    out.Gamma = std::max(out.Gamma, B.row(i).cwiseAbs().sum());
    out.GammaTilde =
        std::max(out.GammaTilde, detail::min_shifted_abs_row_sum(B.row(i).transpose()));
  }
  return out;
}

/// Gamma / GammaTilde for a variance profile. Flat profiles use the exact
/// rank-one formula B = I + m^2/(1-m^2) S; other profiles invert densely.
inline GammaPair stability_gamma(const VarianceProfile& S, std::complex<double> z) {
  if (S.kind() == ProfileKind::Flat) {
    const auto m = SemicircleModel::stieltjes(z);
    const std::complex<double> m2 = m * m;
    const std::complex<double> c = m2 / (1.0 - m2) / static_cast<double>(S.N());
    GammaPair out;
    out.Gamma = std::abs(1.0 + c) + static_cast<double>(S.N() - 1) * std::abs(c);
    // Row atoms are {1 + c, c, ..., c}; shifting by c leaves exactly 1.
    out.GammaTilde = S.N() > 1 ? 1.0 : 0.0;
    return out;
  }
  return stability_gamma_dense(S.dense(), z);
}

struct EtaThresholds {
  double eta_tilde = 10.0;  // threshold built from GammaTilde
  double eta = 10.0;        // threshold built from Gamma
  double grid_ratio = 1.05;
};

/// Smallest eta on a geometric grid (ratio 1.05 over [1e-6, 10]) such that
///   1/(M eta') <= min( M^-g / Gamma^3, M^-2g / (Gamma^4 Im m) )
/// holds for every grid point eta' in [eta, 10]; once with GammaTilde and
/// once with Gamma. Returns 10 when never satisfied.
inline EtaThresholds eta_thresholds(const VarianceProfile& S, double E,
                                    double gamma_exp) {
  if (std::abs(E) > 10.0) throw std::invalid_argument("eta_thresholds: |E| <= 10");
  if (!(gamma_exp > 0.0) || gamma_exp > 0.1)
    throw std::invalid_argument("eta_thresholds: gamma in (0, 0.1]");
  const double M = S.M();
  std::vector<double> grid;
  for (double eta = 1e-6; eta <= 10.0 * (1.0 + 1e-12); eta *= 1.05) grid.push_back(eta);
  if (grid.back() < 10.0) grid.push_back(10.0);
  EtaThresholds out;
  bool ok_tilde = true, ok_full = true;
  out.eta_tilde = std::numeric_limits<double>::quiet_NaN();
  out.eta = std::numeric_limits<double>::quiet_NaN();
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    const double eta = *it;
    const std::complex<double> z(E, eta);
    const auto gp = stability_gamma(S, z);
    const double im_m = SemicircleModel::stieltjes(z).imag();
    auto holds = [&](double G) {
      const double bound = std::min(std::pow(M, -gamma_exp) / (G * G * G),
                                    std::pow(M, -2.0 * gamma_exp) / (G * G * G * G * im_m));
      return 1.0 / (M * eta) <= bound;
    };
    ok_tilde = ok_tilde && holds(gp.GammaTilde);
    ok_full = ok_full && holds(gp.Gamma);
    if (ok_tilde) out.eta_tilde = eta;
    if (ok_full) out.eta = eta;
  }
  if (std::isnan(out.eta_tilde)) out.eta_tilde = 10.0;
  if (std::isnan(out.eta)) out.eta = 10.0;
  return out;
}

/// Fundamental control parameter Pi(z) = sqrt(Im m / (M eta)) + 1/(M eta).
inline double control_pi(double M, std::complex<double> z) {
  const double im_m = SemicircleModel::stieltjes(z).imag();
  const double me = M * z.imag();
  return std::sqrt(im_m / me) + 1.0 / me;
}

struct StabilityParams {
  double Lambda_o = 0.0;   // max off-diagonal |G_ij|
  double Lambda_d = 0.0;   // max |G_ii - m|
  double Lambda = 0.0;     // max of the two
  double Theta_dev = 0.0;  // |m_N - m|
  double Pi = 0.0;
  Eigen::VectorXcd v;      // per-index deviations G_ii - m
  std::complex<double> v_avg{0.0, 0.0};
};

/// Random control parameters of a full-mode resolvent.
inline StabilityParams control_params(const ResolventData& R, const VarianceProfile& S) {
  if (!R.full) throw std::invalid_argument("control_params: full resolvent required");
  const int N = static_cast<int>(R.G.rows());
  const auto m = SemicircleModel::stieltjes(R.z);
  StabilityParams out;
  out.v.resize(N);
  for (int i = 0; i < N; ++i) {
    out.v[i] = R.G(i, i) - m;
    out.Lambda_d = std::max(out.Lambda_d, std::abs(out.v[i]));
    for (int j = 0; j < N; ++j)
      if (j != i) out.Lambda_o = std::max(out.Lambda_o, std::abs(R.G(i, j)));
  }
  out.Lambda = std::max(out.Lambda_o, out.Lambda_d);
  out.v_avg = out.v.sum() / static_cast<double>(N);
  out.Theta_dev = std::abs(R.m_N - m);
  out.Pi = control_pi(S.M(), R.z);
  return out;
}

}  // namespace rmt

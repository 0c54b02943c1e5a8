#pragma once

// Eigendecomposition and resolvents of matrix samples.
//
// Full-mode resolvents go through a complex LU solve of (H - z), never the
// eigensolver, so identity tests are independent of eigensolver accuracy.
// Diagonal mode reuses a spectral decomposition, which is the cheap route
// when many spectral parameters are needed for one sample.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "rmt/ensemble.hpp"
#include "rmt/semicircle.hpp"

namespace rmt {

struct SpectralData {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd vectors_real;
  Eigen::MatrixXcd vectors_cplx;
  bool has_vectors = false;
  bool real_vectors = true;

  int dim() const { return static_cast<int>(eigenvalues.size()); }

  /// |u_alpha(i)|^2 for eigenvector column alpha.
  double abs2(int i, int alpha) const {
    if (!has_vectors) throw std::logic_error("SpectralData: no eigenvectors stored");
    return real_vectors ? vectors_real(i, alpha) * vectors_real(i, alpha)
                        : std::norm(vectors_cplx(i, alpha));
  }
};

inline SpectralData eigen_decompose(const MatrixSample& H, bool want_vectors = false) {
  SpectralData out;
  const auto opts = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (H.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.real, opts);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigen_decompose: solver did not converge");
    out.eigenvalues = es.eigenvalues();
    if (want_vectors) out.vectors_real = es.eigenvectors();
    out.real_vectors = true;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.herm, opts);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigen_decompose: solver did not converge");
    out.eigenvalues = es.eigenvalues();
    if (want_vectors) out.vectors_cplx = es.eigenvectors();
    out.real_vectors = false;
  }
  out.has_vectors = want_vectors;
  return out;
}

/// Eigenvalues of a symmetric tridiagonal matrix (used by the beta-ensemble
/// sampler); O(N^2) without vectors.
inline Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::VectorXd& diag,
                                               const Eigen::VectorXd& sub) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("tridiagonal_eigenvalues: solver did not converge");
  return es.eigenvalues();
}

enum class ResolventMode { Full, Diagonal };

struct ResolventData {
  std::complex<double> z;
  Eigen::MatrixXcd G;      // full mode
  Eigen::VectorXcd diag;   // both modes
  std::complex<double> m_N;
  bool full = false;

  double eta() const { return z.imag(); }
};

/// G(z) = (H - z)^{-1} by partial-pivot LU. Requires Im z > 0.
inline ResolventData resolvent(const MatrixSample& H, std::complex<double> z,
                               ResolventMode mode = ResolventMode::Full) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("resolvent: need Im z > 0");
  const int N = H.dim();
  ResolventData out;
  out.z = z;
  Eigen::MatrixXcd A = H.as_complex();
  A.diagonal().array() -= z;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  Eigen::MatrixXcd G = lu.inverse();
  out.diag = G.diagonal();
  out.m_N = G.trace() / static_cast<double>(N);
  if (mode == ResolventMode::Full) {
    out.G = std::move(G);
    out.full = true;
  }
  return out;
}

/// Diagonal-mode resolvent from a spectral decomposition:
/// G_ii = sum_a |u_a(i)|^2 / (lambda_a - z). One decomposition serves any
/// number of spectral parameters.
inline ResolventData resolvent_diag_from_spectrum(const SpectralData& S,
                                                  std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("resolvent: need Im z > 0");
  if (!S.has_vectors)
    throw std::invalid_argument("resolvent_diag_from_spectrum: need eigenvectors");
  const int N = S.dim();
  ResolventData out;
  out.z = z;
  out.diag = Eigen::VectorXcd::Zero(N);
  Eigen::VectorXcd inv(N);
  for (int a = 0; a < N; ++a) inv[a] = 1.0 / (S.eigenvalues[a] - z);
  for (int i = 0; i < N; ++i) {
    std::complex<double> g = 0.0;
    for (int a = 0; a < N; ++a) g += S.abs2(i, a) * inv[a];
    out.diag[i] = g;
  }
  out.m_N = inv.sum() / static_cast<double>(N);
  return out;
}

/// Stieltjes transform of the empirical spectral measure.
inline std::complex<double> empirical_stieltjes(const SpectralData& S,
                                                std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("empirical_stieltjes: Im z > 0");
  std::complex<double> m = 0.0;
  for (int a = 0; a < S.dim(); ++a) m += 1.0 / (S.eigenvalues[a] - z);
  return m / static_cast<double>(S.dim());
}

/// Empirical counting function at E.
inline double empirical_counting(const SpectralData& S, double E) {
  const auto& lam = S.eigenvalues;
  int lo = 0, hi = S.dim();
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (lam[mid] <= E) lo = mid + 1; else hi = mid;
  }
  return static_cast<double>(lo) / static_cast<double>(S.dim());
}

/// sup_E |counting_N(E) - n(E)| against a reference counting function; the
/// supremum is attained at eigenvalue jumps.
template <class CountingFn>
inline double counting_sup_distance(const SpectralData& S, CountingFn&& n) {
  const int N = S.dim();
  double sup = 0.0;
  for (int j = 0; j < N; ++j) {
    const double nf = n(S.eigenvalues[j]);
    sup = std::max(sup, std::abs(static_cast<double>(j + 1) / N - nf));
    sup = std::max(sup, std::abs(static_cast<double>(j) / N - nf));
  }
  return sup;
}

}  // namespace rmt

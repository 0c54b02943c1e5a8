#pragma once

// Exact resolvent identities: Ward, Schur complement, the two expansion
// families with minors, and the per-index self-consistent residuals. These
// are algebraic identities of any Hermitian matrix; the checks only expose
// floating-point roundoff.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rmt/ensemble.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stability.hpp"

namespace rmt {

namespace detail {

inline double rel_residual(std::complex<double> lhs, std::complex<double> rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace detail

/// max_i | sum_j |G_ij|^2 - Im G_ii / eta |, relative.
inline double check_ward(const Eigen::MatrixXcd& G, std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("check_ward: Im z > 0");
  const double eta = z.imag();
  const int N = static_cast<int>(G.rows());
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    const double lhs = G.row(i).squaredNorm();
    const double rhs = G(i, i).imag() / eta;
    worst = std::max(worst, detail::rel_residual(lhs, rhs));
  }
  return worst;
}

inline double check_ward(const MatrixSample& H, std::complex<double> z) {
  return check_ward(resolvent(H, z).G, z);
}

/// Minor resolvent G^(T): rows/columns in T are deleted and the smaller
/// system re-solved; the result is re-embedded with zeros at T so original
/// indices stay valid. Entries with an index in T must not be referenced.
inline Eigen::MatrixXcd minor_resolvent(const MatrixSample& H, std::complex<double> z,
                                        const std::vector<int>& T) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("minor_resolvent: Im z > 0");
  const int N = H.dim();
  std::vector<char> drop(static_cast<size_t>(N), 0);
  for (int t : T) {
    if (t < 0 || t >= N) throw std::invalid_argument("minor_resolvent: index range");
    drop[static_cast<size_t>(t)] = 1;
  }
  std::vector<int> keep;
  keep.reserve(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i)
    if (!drop[static_cast<size_t>(i)]) keep.push_back(i);
  const int n = static_cast<int>(keep.size());
  Eigen::MatrixXcd A(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) A(a, b) = H.entry(keep[a], keep[b]);
  A.diagonal().array() -= z;
  Eigen::MatrixXcd Gm = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).inverse();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(keep[a], keep[b]) = Gm(a, b);
  return out;
}

struct ResolventIdentityReport {
  double expansion1_offdiag = 0.0;  // G_ij^(T) = G_ij^(Tk) + G_ik G_kj / G_kk
  double expansion1_diag = 0.0;     // 1/G_ii^(T) = 1/G_ii^(Tk) - ...
  double expansion2_row = 0.0;      // G_ij^(T) = -G_ii^(T) sum_k h_ik G_kj^(Ti)
  double expansion2_col = 0.0;      // G_ij^(T) = -G_jj^(T) sum_k G_ik^(Tj) h_kj
  double schur = 0.0;               // 1/G_ii^(T) = h_ii - z - quadratic form

  double max() const {
    return std::max({expansion1_offdiag, expansion1_diag, expansion2_row,
                     expansion2_col, schur});
  }
};

/// Residuals of the five exact identities at indices (i, j, k) with minor set
/// T. Preconditions: i, j, k not in T and k distinct from i, j.
inline ResolventIdentityReport check_resolvent_identities(const MatrixSample& H,
                                                          std::complex<double> z,
                                                          int i, int j, int k,
                                                          std::vector<int> T = {}) {
  const int N = H.dim();
  auto in_T = [&](int a) { return std::find(T.begin(), T.end(), a) != T.end(); };
  if (in_T(i) || in_T(j) || in_T(k) || k == i || k == j)
    throw std::invalid_argument("check_resolvent_identities: index collision");
  if (i < 0 || j < 0 || k < 0 || i >= N || j >= N || k >= N)
    throw std::invalid_argument("check_resolvent_identities: index range");

  const Eigen::MatrixXcd GT = minor_resolvent(H, z, T);
  std::vector<int> Tk = T; Tk.push_back(k);
  const Eigen::MatrixXcd GTk = minor_resolvent(H, z, Tk);
  std::vector<int> Ti = T; Ti.push_back(i);
  const Eigen::MatrixXcd GTi = minor_resolvent(H, z, Ti);
  std::vector<int> Tj = T; Tj.push_back(j);
  const Eigen::MatrixXcd GTj = minor_resolvent(H, z, Tj);

  auto excluded = [&](const std::vector<int>& set, int a) {
    return std::find(set.begin(), set.end(), a) != set.end();
  };

  ResolventIdentityReport rep;
  rep.expansion1_offdiag =
      detail::rel_residual(GT(i, j), GTk(i, j) + GT(i, k) * GT(k, j) / GT(k, k));
  rep.expansion1_diag = detail::rel_residual(
      1.0 / GT(i, i),
      1.0 / GTk(i, i) - GT(i, k) * GT(k, i) / (GT(i, i) * GTk(i, i) * GT(k, k)));

  if (i != j) {
    std::complex<double> row_sum = 0.0, col_sum = 0.0;
    for (int a = 0; a < N; ++a) {
      if (!excluded(Ti, a)) row_sum += H.entry(i, a) * GTi(a, j);
      if (!excluded(Tj, a)) col_sum += GTj(i, a) * H.entry(a, j);
    }
    rep.expansion2_row = detail::rel_residual(GT(i, j), -GT(i, i) * row_sum);
    rep.expansion2_col = detail::rel_residual(GT(i, j), -GT(j, j) * col_sum);
  }

  std::complex<double> quad = 0.0;
  for (int a = 0; a < N; ++a) {
    if (excluded(Ti, a)) continue;
    for (int b = 0; b < N; ++b) {
      if (excluded(Ti, b)) continue;
      quad += H.entry(i, a) * GTi(a, b) * H.entry(b, i);
    }
  }
  rep.schur = detail::rel_residual(1.0 / GT(i, i), H.entry(i, i) - z - quad);
  return rep;
}

struct SelfConsistentResiduals {
  Eigen::VectorXcd Upsilon;  // A_i + h_ii - Z_i
  Eigen::VectorXcd A;        // sum_k s_ik G_ik G_ki / G_ii  (full sum)
  Eigen::VectorXcd h_diag;
  Eigen::VectorXcd Z;        // quadratic form minus its partial expectation
  Eigen::VectorXd vself_residual;  // exact rearrangement of Schur; ~roundoff
};

/// Per-index pieces of the self-consistent equation
///   v_i = 1/(-z - m - (sum_k s_ik v_k - Upsilon_i)) - m.
/// Z_i is the Schur quadratic form minus its analytic partial expectation
/// sum_k^(i) s_ik G^(i)_kk, which makes Upsilon_i computable per sample.
inline SelfConsistentResiduals self_consistent_residual(const ResolventData& R,
                                                        const VarianceProfile& S,
                                                        const MatrixSample& H) {
  if (!R.full) throw std::invalid_argument("self_consistent_residual: full mode");
  const int N = H.dim();
  const auto m = SemicircleModel::stieltjes(R.z);
  SelfConsistentResiduals out;
  out.Upsilon.resize(N);
  out.A.resize(N);
  out.h_diag.resize(N);
  out.Z.resize(N);
  out.vself_residual.resize(N);

  Eigen::VectorXcd v(N);
  for (int i = 0; i < N; ++i) v[i] = R.G(i, i) - m;

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < N; ++i) {
    if (std::abs(R.G(i, i)) < 1e-12)
      throw std::runtime_error("self_consistent_residual: near-singular G_ii");
    const Eigen::MatrixXcd Gi = minor_resolvent(H, R.z, {i});
    std::complex<double> quad = 0.0, partial = 0.0;
    for (int k = 0; k < N; ++k) {
      if (k == i) continue;
      partial += S(i, k) * Gi(k, k);
      for (int l = 0; l < N; ++l) {
        if (l == i) continue;
        quad += H.entry(i, k) * Gi(k, l) * H.entry(l, i);
      }
    }
    std::complex<double> A_i = 0.0;
    for (int k = 0; k < N; ++k) A_i += S(i, k) * R.G(i, k) * R.G(k, i);
    A_i /= R.G(i, i);
    out.A[i] = A_i;
    out.h_diag[i] = H.entry(i, i);
    out.Z[i] = quad - partial;
    out.Upsilon[i] = A_i + H.entry(i, i) - out.Z[i];
  }

  Eigen::VectorXcd Sv(N);
  for (int i = 0; i < N; ++i) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < N; ++k) acc += S(i, k) * v[k];
    Sv[i] = acc;
  }
  for (int i = 0; i < N; ++i) {
    const std::complex<double> rhs =
        1.0 / (-R.z - m - (Sv[i] - out.Upsilon[i])) - m;
    out.vself_residual[i] = std::abs(v[i] - rhs);
  }
  return out;
}

}  // namespace rmt

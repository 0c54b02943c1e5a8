#pragma once

// Band-matrix diffusion profile: the exact Theta = |m|^2 S / (1 - |m|^2 S)
// by Fourier diagonalization of the circulant variance profile, its
// diffusion approximation theta(p) = 1/(alpha eta + W^2 D p^2), and the
// Monte Carlo average T_xy = sum_i s_xi |G_iy|^2.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rmt/ensemble.hpp"
#include "rmt/parallel.hpp"
#include "rmt/rng.hpp"
#include "rmt/semicircle.hpp"

namespace rmt {

enum class ProfileMethod { Exact, FourierApprox, Empirical };

struct DiffusionProfile {
  std::complex<double> z;
  Eigen::VectorXd theta;     // theta_x over torus offsets x = 0..N-1
  Eigen::VectorXd shat;      // Fourier multipliers s_hat(p) (exact method)
  double mass = 0.0;         // sum_x theta_x
  double zero_mode = 0.0;    // p = 0 contribution to theta_x (constant, = mass/N)
  ProfileMethod method = ProfileMethod::Exact;
  Eigen::VectorXd stderr_;   // per-offset Monte Carlo error (empirical method)

  int N() const { return static_cast<int>(theta.size()); }
};

namespace detail {

/// Real DFT of a symmetric circulant first row: shat[p] = sum_x row[x] cos(2 pi p x / N).
inline Eigen::VectorXd circulant_multipliers(const Eigen::VectorXd& row) {
  const int N = static_cast<int>(row.size());
  Eigen::VectorXd shat(N);
  for (int p = 0; p < N; ++p) {
    double acc = 0.0;
    for (int x = 0; x < N; ++x)
      acc += row[x] * std::cos(2.0 * M_PI * p * x / N);
    shat[p] = acc;
  }
  return shat;
}

inline Eigen::VectorXd inverse_circulant_transform(const Eigen::VectorXd& that) {
  const int N = static_cast<int>(that.size());
  Eigen::VectorXd theta(N);
  for (int x = 0; x < N; ++x) {
    double acc = 0.0;
    for (int p = 0; p < N; ++p)
      acc += that[p] * std::cos(2.0 * M_PI * p * x / N);
    theta[x] = acc / N;
  }
  return theta;
}

}  // namespace detail

/// Theta for a circulant (flat or band) profile: theta_hat(p) =
/// |m|^2 s_hat(p) / (1 - |m|^2 s_hat(p)). The p = 0 mode carries the total
/// mass Im m / eta and is reported separately so shape comparisons can
/// exclude it.
inline DiffusionProfile theta_exact(const VarianceProfile& S, std::complex<double> z) {
  if (!S.circulant())
    throw std::invalid_argument("theta_exact: circulant (flat/band) profile required");
  if (!(z.imag() > 0.0)) throw std::invalid_argument("theta_exact: Im z > 0");
  const int N = S.N();
  const double m2 = std::norm(SemicircleModel::stieltjes(z));
  DiffusionProfile out;
  out.z = z;
  out.method = ProfileMethod::Exact;
  out.shat = detail::circulant_multipliers(S.circulant_row());
  Eigen::VectorXd that(N);
  for (int p = 0; p < N; ++p) {
    const double denom = 1.0 - m2 * out.shat[p];
    if (!(std::abs(denom) > 1e-14))
      throw std::runtime_error("theta_exact: 1 - |m|^2 s_hat(p) vanished");
    that[p] = m2 * out.shat[p] / denom;
  }
  out.theta = detail::inverse_circulant_transform(that);
  out.mass = that[0];
  out.zero_mode = that[0] / N;
  return out;
}

/// Diffusion approximation theta(p) = 1/(alpha eta + W^2 D p^2) on the torus
/// momenta p = 2 pi k / N, D = (1/2) int x^2 f, alpha = 2/sqrt(4 - E^2).
inline DiffusionProfile theta_fourier_approx(int W, BandShape shape, double E,
                                             double eta, int N) {
  if (!(std::abs(E) < 2.0))
    throw std::invalid_argument("theta_fourier_approx: |E| < 2");
  const double D = band_shape_second_moment_half(shape);
  const double alpha = 2.0 / std::sqrt(4.0 - E * E);
  DiffusionProfile out;
  out.z = {E, eta};
  out.method = ProfileMethod::FourierApprox;
  Eigen::VectorXd that(N);
  for (int k = 0; k < N; ++k) {
    const int kk = k <= N / 2 ? k : k - N;  // symmetric momentum branch
    const double p = 2.0 * M_PI * kk / N;
    that[k] = 1.0 / (alpha * eta + static_cast<double>(W) * W * D * p * p);
  }
  out.theta = detail::inverse_circulant_transform(that);
  out.mass = out.theta.sum();
  out.zero_mode = that[0] / N;
  return out;
}

/// Monte Carlo average of T_xy = sum_i s_xi |G_iy(z)|^2 with the anchor fixed
/// at y = N/2 (immaterial for circulant profiles), reported against the
/// offset x - y.
inline DiffusionProfile empirical_T(const VarianceProfile& S, const EntryLaw& law,
                                    std::complex<double> z, int samples,
                                    uint64_t seed, int threads = 0) {
  if (!S.circulant()) throw std::invalid_argument("empirical_T: circulant profile");
  if (!(z.imag() > 0.0)) throw std::invalid_argument("empirical_T: Im z > 0");
  const int N = S.N();
  const int y = N / 2;
  std::vector<Eigen::VectorXd> per_sample(static_cast<size_t>(samples));
  parallel_tasks(samples, threads, [&](int k) {
    const MatrixSample H = sample_matrix(S, law, substream_seed(seed, k));
    Eigen::MatrixXcd A = H.as_complex();
    A.diagonal().array() -= z;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N);
    e[y] = 1.0;
    const Eigen::VectorXcd g = A.partialPivLu().solve(e);  // column G_{.y}
    Eigen::VectorXd g2(N);
    for (int i = 0; i < N; ++i) g2[i] = std::norm(g[i]);
    Eigen::VectorXd T(N);  // T_xy re-centered to offset x - y (mod N)
    for (int x = 0; x < N; ++x) {
      double acc = 0.0;
      for (int i = 0; i < N; ++i) acc += S(x, i) * g2[i];
      T[((x - y) % N + N) % N] = acc;
    }
    per_sample[static_cast<size_t>(k)] = T;
  });
  DiffusionProfile out;
  out.z = z;
  out.method = ProfileMethod::Empirical;
  out.theta = Eigen::VectorXd::Zero(N);
  for (const auto& T : per_sample) out.theta += T;
  out.theta /= static_cast<double>(samples);
  out.stderr_ = Eigen::VectorXd::Zero(N);
  if (samples > 1) {
    for (const auto& T : per_sample)
      out.stderr_ += (T - out.theta).cwiseAbs2();
    out.stderr_ = (out.stderr_ / (samples * (samples - 1.0))).cwiseSqrt();
  }
  out.mass = out.theta.sum();
  out.zero_mode = out.mass / N;
  return out;
}

/// Relative L1 distance over offsets between two profiles.
inline double profile_rel_l1(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("profile_rel_l1: size");
  const double denom = b.cwiseAbs().sum();
  if (!(denom > 0)) throw std::invalid_argument("profile_rel_l1: zero reference");
  return (a - b).cwiseAbs().sum() / denom;
}

}  // namespace rmt

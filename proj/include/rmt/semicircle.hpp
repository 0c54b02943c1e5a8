#pragma once

// Semicircle analytics for the quadratic potential x^2/2: density on [-2,2],
// Stieltjes transform m(z) solving m + 1/m + z = 0 with Im m > 0, the
// counting function n(E) in closed form, and classical locations gamma_j.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rmt {

struct SemicircleModel {
  static constexpr double support_lo = -2.0;
  static constexpr double support_hi = 2.0;

  static double density(double E) {
    const double d = 4.0 - E * E;
    return d > 0.0 ? std::sqrt(d) / (2.0 * M_PI) : 0.0;
  }

  /// m(z) = (-z + sqrt(z^2-4))/2 on the branch with Im m > 0, so that
  /// m(z) ~ -1/z at infinity. Requires Im z > 0.
  static std::complex<double> stieltjes(std::complex<double> z) {
    if (!(z.imag() > 0.0))
      throw std::invalid_argument("semicircle_stieltjes: need Im z > 0");
    std::complex<double> w = std::sqrt(z * z - 4.0);
    std::complex<double> m = 0.5 * (-z + w);
    if (m.imag() <= 0.0) m = 0.5 * (-z - w);
    return m;
  }

  /// n(E) = integral of the density over (-inf, E], closed form.
  static double counting(double E) {
    if (E <= -2.0) return 0.0;
    if (E >= 2.0) return 1.0;
    return 0.5 + (E * std::sqrt(4.0 - E * E) / 2.0 + 2.0 * std::asin(0.5 * E)) /
                     (2.0 * M_PI);
  }

  /// Classical location gamma_j: n(gamma_j) = j/N, by bracketed bisection on
  /// the closed-form counting function.
  static double classical_location(long j, long N) {
    if (j < 1 || j > N) throw std::invalid_argument("classical_location: 1 <= j <= N");
    if (2 * j == N) return 0.0;
    const double target = static_cast<double>(j) / static_cast<double>(N);
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (counting(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Aliases so the unfolding code can treat semicircle and general
  // equilibrium models uniformly.
  double rho(double x) const { return density(x); }
  double gamma(long j, long N) const { return classical_location(j, N); }
  double lower() const { return support_lo; }
  double upper() const { return support_hi; }
};

inline double semicircle_density(double E) { return SemicircleModel::density(E); }
inline std::complex<double> semicircle_stieltjes(std::complex<double> z) {
  return SemicircleModel::stieltjes(z);
}
inline double classical_location(long j, long N) {
  return SemicircleModel::classical_location(j, N);
}

}  // namespace rmt

#pragma once

// Dyson Brownian motion: the matrix Ornstein-Uhlenbeck flow (exact in
// distribution) and the eigenvalue SDE
//   dx_i = N^{-1/2} dB_i + [ -(beta/4) x_i + (beta/2N) sum_{j!=i} 1/(x_i-x_j) ] dt
// integrated by Euler-Maruyama with a step-halving collision policy.

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rmt/ensemble.hpp"
#include "rmt/rng.hpp"

namespace rmt {

struct FlowConfig {
  double beta = 1.0;  // 1 or 2
  double t = 1.0;
  double dt = 0.0;    // 0 = default min(1e-3, t/1e3)
  uint64_t seed = 1;

  void validate() const {
    if (beta != 1.0 && beta != 2.0)
      throw std::invalid_argument("FlowConfig: beta must be 1 or 2");
    if (t < 0.0) throw std::invalid_argument("FlowConfig: t >= 0");
    if (dt < 0.0 || (t > 0.0 && dt > t))
      throw std::invalid_argument("FlowConfig: need 0 < dt <= t");
  }

  double step() const { return dt > 0.0 ? dt : std::min(1e-3, t / 1e3); }
};

struct ParticleState {
  double time = 0.0;
  Eigen::VectorXd x;  // strictly increasing

  void validate() const {
    for (int i = 0; i + 1 < x.size(); ++i)
      if (!(x[i] < x[i + 1]))
        throw std::invalid_argument("ParticleState: positions must be ordered");
  }
};

struct CollisionError : std::runtime_error {
  int lower_index;
  explicit CollisionError(int i, double dt_floor)
      : std::runtime_error([&] {
          std::ostringstream os;
          os << "dbm_integrate: step-size floor " << dt_floor
             << " reached at colliding pair (" << i << ", " << i + 1 << ")";
          return os.str();
        }()),
        lower_index(i) {}
};

/// H_t = e^{-t/2} H_0 + sqrt(1 - e^{-t}) U with U an independent invariant
/// Gaussian ensemble of the same symmetry class. Exact in distribution; only
/// defined for the flat (standard Wigner) normalization.
inline MatrixSample matrix_ou_flow(const MatrixSample& H0, double t, uint64_t seed) {
  if (t < 0.0) throw std::invalid_argument("matrix_ou_flow: t >= 0");
  if (H0.profile_kind != ProfileKind::Flat)
    throw std::invalid_argument("matrix_ou_flow: flat profile required");
  const int N = H0.dim();
  const int beta = H0.is_real() ? 1 : 2;
  MatrixSample U = gaussian_invariant_ensemble(N, beta, seed);
  const double decay = std::exp(-0.5 * t);
  const double mix = std::sqrt(1.0 - std::exp(-t));
  MatrixSample out = H0;
  out.seed = seed;
  out.law_id = H0.law_id + "+ou(t=" + std::to_string(t) + ")";
  if (H0.is_real())
    out.real = decay * H0.real + mix * U.real;
  else
    out.herm = decay * H0.herm + mix * U.herm;
  return out;
}

/// Entrywise OU update of the rescaled entries zeta = sqrt(N) h, integrated
/// by Euler-Maruyama: d zeta = d(noise) - zeta/2 dt. Distribution-equal to
/// matrix_ou_flow up to discretization; used as a cross-check.
inline MatrixSample entrywise_ou_flow(const MatrixSample& H0, double t, double dt,
                                      uint64_t seed) {
  if (H0.profile_kind != ProfileKind::Flat)
    throw std::invalid_argument("entrywise_ou_flow: flat profile required");
  const int N = H0.dim();
  MatrixSample out = H0;
  out.seed = seed;
  const long steps = std::lround(t / dt);
  if (H0.is_real()) {
    for (int j = 0; j < N; ++j)
      for (int i = 0; i <= j; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i) * N + j);
        double zeta = std::sqrt(static_cast<double>(N)) * H0.real(i, j);
        const double sig = (i == j ? std::sqrt(2.0) : 1.0);  // invariant GOE scaling
        for (long s = 0; s < steps; ++s)
          zeta += -0.5 * zeta * dt + sig * std::sqrt(dt) * rng.normal();
        out.real(i, j) = out.real(j, i) = zeta / std::sqrt(static_cast<double>(N));
      }
  } else {
    for (int j = 0; j < N; ++j)
      for (int i = 0; i <= j; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i) * N + j);
        std::complex<double> zeta = std::sqrt(static_cast<double>(N)) * H0.herm(i, j);
        for (long s = 0; s < steps; ++s) {
          const double w = std::sqrt(i == j ? dt : 0.5 * dt);
          const std::complex<double> noise =
              i == j ? std::complex<double>(std::sqrt(dt) * rng.normal(), 0.0)
                     : std::complex<double>(w * rng.normal(), w * rng.normal());
          zeta += -0.5 * zeta * dt + noise;
        }
        out.herm(i, j) = zeta / std::sqrt(static_cast<double>(N));
        out.herm(j, i) = std::conj(out.herm(i, j));
      }
  }
  return out;
}

namespace detail {

inline Eigen::VectorXd dbm_drift(const Eigen::VectorXd& x, double beta) {
  const int N = static_cast<int>(x.size());
  Eigen::VectorXd d(N);
  for (int i = 0; i < N; ++i) {
    double rep = 0.0;
    for (int j = 0; j < N; ++j)
      if (j != i) rep += 1.0 / (x[i] - x[j]);
    d[i] = -0.25 * beta * x[i] + 0.5 * beta / N * rep;
  }
  return d;
}

template <class Rng>
ParticleState dbm_integrate_impl(const ParticleState& x0, const FlowConfig& cfg,
                                 Rng& rng) {
  cfg.validate();
  x0.validate();
  const int N = static_cast<int>(x0.x.size());
  const double dt0 = cfg.step();
  const double dt_floor = dt0 / 1024.0;  // dt / 2^10
  const double root_n = std::sqrt(static_cast<double>(N));
  ParticleState state = x0;
  double remaining = cfg.t;
  while (remaining > 1e-15 * cfg.t) {
    double dt = std::min(dt0, remaining);
    for (;;) {
      const Eigen::VectorXd drift = dbm_drift(state.x, cfg.beta);
      Eigen::VectorXd prop(N);
      const double w = std::sqrt(dt) / root_n;
      for (int i = 0; i < N; ++i)
        prop[i] = state.x[i] + drift[i] * dt + w * rng.normal();
      int bad = -1;
      for (int i = 0; i + 1 < N; ++i)
        if (!(prop[i] < prop[i + 1])) { bad = i; break; }
      if (bad < 0) {
        state.x = prop;
        remaining -= dt;
        break;
      }
      dt *= 0.5;  // crossings are discretization artifacts; resolve them
      if (dt < dt_floor) throw CollisionError(bad, dt_floor);
    }
  }
  state.time = x0.time + cfg.t;
  return state;
}

}  // namespace detail

inline ParticleState dbm_integrate(const ParticleState& x0, const FlowConfig& cfg) {
  CounterRng rng(cfg.seed, 0xdb4);
  return detail::dbm_integrate_impl(x0, cfg, rng);
}

}  // namespace rmt

#pragma once

// Variance profiles and random Hermitian/symmetric matrix sampling.
//
// A profile S = (s_ij) is symmetric, row-stochastic (each row sums to 1) and
// carries M = 1/max s_ij. Matrices are drawn entrywise, h_ij = sqrt(s_ij) z,
// with z a standardized variable from an EntryLaw; generation is keyed by
// (seed, entry index) so samples are bit-reproducible in any order.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmt/rng.hpp"

namespace rmt {

enum class ProfileKind { Flat, Band, Custom };
enum class BandShape { Uniform, TruncGauss };
enum class SymmetryClass { RealSymmetric, ComplexHermitian };

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Flat: return "flat";
    case ProfileKind::Band: return "band";
    default: return "custom";
  }
}

inline std::string to_string(BandShape s) {
  return s == BandShape::Uniform ? "uniform" : "truncgauss";
}

inline BandShape band_shape_from_id(const std::string& id) {
  if (id == "uniform") return BandShape::Uniform;
  if (id == "truncgauss") return BandShape::TruncGauss;
  throw std::invalid_argument("unknown band shape id: " + id);
}

/// Shape density f for band profiles; symmetric probability density on R.
inline double band_shape_density(BandShape s, double u) {
  switch (s) {
    case BandShape::Uniform:
      return std::abs(u) <= 1.0 ? 0.5 : 0.0;
    case BandShape::TruncGauss: {
      if (std::abs(u) > 3.0) return 0.0;
      // standard normal truncated to [-3,3]
      static const double norm = 0.9973002039367398;  // erf(3/sqrt(2))
      return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * M_PI) * norm);
    }
  }
  return 0.0;
}

/// Half of the second moment of the shape density, the diffusion constant D.
inline double band_shape_second_moment_half(BandShape s) {
  switch (s) {
    case BandShape::Uniform:
      return 1.0 / 6.0;
    case BandShape::TruncGauss: {
      // 0.5 * Var of a standard normal truncated to [-3,3]
      const double z = 0.9973002039367398;
      const double phi3 = std::exp(-4.5) / std::sqrt(2.0 * M_PI);
      return 0.5 * (1.0 - 2.0 * 3.0 * phi3 / z);
    }
  }
  return 0.0;
}

class VarianceProfile {
 public:
  int N() const { return N_; }
  ProfileKind kind() const { return kind_; }
  int band_width() const { return W_; }
  BandShape shape() const { return shape_; }
  double M() const { return M_; }

  /// Entry s_ij.
  double operator()(int i, int j) const {
    switch (kind_) {
      case ProfileKind::Flat:
        return 1.0 / N_;
      case ProfileKind::Band:
        return row0_[torus_distance(i, j)];
      default:
        return dense_(i, j);
    }
  }

  bool circulant() const { return kind_ != ProfileKind::Custom; }

  /// First row by torus offset x = 0..N-1 (circulant profiles only).
  Eigen::VectorXd circulant_row() const {
    if (!circulant()) throw std::logic_error("profile is not circulant");
    Eigen::VectorXd r(N_);
    for (int x = 0; x < N_; ++x) r[x] = (*this)(0, x);
    return r;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd S(N_, N_);
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j) S(i, j) = (*this)(i, j);
    return S;
  }

  std::string id() const {
    std::ostringstream os;
    os << to_string(kind_) << ":N=" << N_;
    if (kind_ == ProfileKind::Band)
      os << ":W=" << W_ << ":f=" << to_string(shape_);
    return os.str();
  }

  int torus_distance(int i, int j) const {
    int d = std::abs(i - j);
    return std::min(d, N_ - d);
  }

  static VarianceProfile flat(int N) {
    if (N < 1) throw std::invalid_argument("flat_profile: N must be >= 1");
    VarianceProfile p;
    p.N_ = N;
    p.kind_ = ProfileKind::Flat;
    p.M_ = static_cast<double>(N);
    return p;
  }

  static VarianceProfile band(int N, int W, BandShape shape) {
    if (N < 1) throw std::invalid_argument("band_profile: N must be >= 1");
    if (W < 1 || W > N) throw std::invalid_argument("band_profile: need 1 <= W <= N");
    VarianceProfile p;
    p.N_ = N;
    p.kind_ = ProfileKind::Band;
    p.W_ = W;
    p.shape_ = shape;
    p.row0_.assign(static_cast<size_t>(N), 0.0);
    double row_sum = 0.0;
    for (int x = 0; x < N; ++x) {
      const int d = std::min(x, N - x);
      p.row0_[static_cast<size_t>(x)] =
          band_shape_density(shape, static_cast<double>(d) / W) / W;
      row_sum += p.row0_[static_cast<size_t>(x)];
    }
    if (!(row_sum > 0)) throw std::invalid_argument("band_profile: empty band");
    // The raw band variances are only approximately stochastic; rescale each
    // row to sum exactly 1 (rows are permutations of each other, so symmetry
    // survives).
    double mx = 0.0;
    for (auto& v : p.row0_) {
      v /= row_sum;
      mx = std::max(mx, v);
    }
    p.M_ = 1.0 / mx;
    return p;
  }

  static VarianceProfile custom(const Eigen::MatrixXd& S) {
    const int N = static_cast<int>(S.rows());
    if (N < 1 || S.cols() != N) throw std::invalid_argument("custom profile: square");
    double mx = 0.0;
    for (int i = 0; i < N; ++i) {
      double row = 0.0;
      for (int j = 0; j < N; ++j) {
        const double v = S(i, j);
        if (v < 0) throw std::invalid_argument("custom profile: negative entry");
        if (std::abs(v - S(j, i)) > 1e-14)
          throw std::invalid_argument("custom profile: not symmetric");
        row += v;
        mx = std::max(mx, v);
      }
      if (std::abs(row - 1.0) > 1e-12)
        throw std::invalid_argument("custom profile: row sums must be 1");
    }
    VarianceProfile p;
    p.N_ = N;
    p.kind_ = ProfileKind::Custom;
    p.dense_ = S;
    p.M_ = 1.0 / mx;
    return p;
  }

 private:
  int N_ = 0;
  ProfileKind kind_ = ProfileKind::Flat;
  int W_ = 0;
  BandShape shape_ = BandShape::Uniform;
  double M_ = 0.0;
  std::vector<double> row0_;
  Eigen::MatrixXd dense_;
};

inline VarianceProfile flat_profile(int N) { return VarianceProfile::flat(N); }
inline VarianceProfile band_profile(int N, int W, BandShape shape) {
  return VarianceProfile::band(N, W, shape);
}

enum class LawFamily { Gaussian, Bernoulli, Uniform, ThreePoint, Custom };

/// A standardized entry law: mean 0, variance 1, recorded moments m1..m4.
struct EntryLaw {
  LawFamily family = LawFamily::Gaussian;
  SymmetryClass sym = SymmetryClass::RealSymmetric;
  std::vector<double> atoms;  // discrete support (empty for continuous laws)
  std::vector<double> probs;

  double moment(int k) const {
    if (!atoms.empty()) {
      double m = 0.0;
      for (size_t a = 0; a < atoms.size(); ++a) m += probs[a] * std::pow(atoms[a], k);
      return m;
    }
    switch (family) {
      case LawFamily::Gaussian:
        return k % 2 == 1 ? 0.0 : (k == 2 ? 1.0 : (k == 4 ? 3.0 : (k == 6 ? 15.0 : 105.0)));
      case LawFamily::Uniform: {
        if (k % 2 == 1) return 0.0;
        return std::pow(3.0, k / 2) / (k + 1.0);  // uniform on [-sqrt(3), sqrt(3)]
      }
      default:
        throw std::logic_error("moment: unsupported family");
    }
  }

  double draw(CounterRng& rng) const {
    switch (family) {
      case LawFamily::Gaussian:
        return rng.normal();
      case LawFamily::Uniform:
        return (2.0 * rng.uniform() - 1.0) * std::sqrt(3.0);
      default: {
        const double u = rng.uniform();
        double acc = 0.0;
        for (size_t a = 0; a < atoms.size(); ++a) {
          acc += probs[a];
          if (u < acc) return atoms[a];
        }
        return atoms.back();
      }
    }
  }

  std::string id() const {
    switch (family) {
      case LawFamily::Gaussian: return "gaussian";
      case LawFamily::Bernoulli: return "bernoulli";
      case LawFamily::Uniform: return "uniform";
      case LawFamily::ThreePoint: {
        std::ostringstream os;
        os << "threepoint:m3=" << moment(3) << ":m4=" << moment(4);
        return os.str();
      }
      default: return "custom";
    }
  }

  void validate() const {
    if (std::abs(moment(1)) > 1e-12 || std::abs(moment(2) - 1.0) > 1e-12)
      throw std::invalid_argument("entry law must be standardized");
    if (moment(4) < moment(2) * moment(2) - 1e-12)
      throw std::invalid_argument("entry law: m4 < m2^2 is infeasible");
  }
};

inline EntryLaw gaussian_law(SymmetryClass sym = SymmetryClass::RealSymmetric) {
  EntryLaw law;
  law.family = LawFamily::Gaussian;
  law.sym = sym;
  return law;
}

inline EntryLaw bernoulli_law(SymmetryClass sym = SymmetryClass::RealSymmetric) {
  EntryLaw law;
  law.family = LawFamily::Bernoulli;
  law.sym = sym;
  law.atoms = {1.0, -1.0};
  law.probs = {0.5, 0.5};
  return law;
}

inline EntryLaw uniform_law(SymmetryClass sym = SymmetryClass::RealSymmetric) {
  EntryLaw law;
  law.family = LawFamily::Uniform;
  law.sym = sym;
  return law;
}

/// Finitely supported standardized law with prescribed third and fourth
/// moments. Solved in closed form as a three-point law {a, -b, 0}:
///   s = sqrt(4 m4 - 3 m3^2), a = (s+m3)/2, b = (s-m3)/2,
///   P(a) = 1/(s a), P(-b) = 1/(s b).
/// Feasible iff m4 >= 1 + m3^2 (equality gives the two-point law).
inline EntryLaw four_moment_law(double m3, double m4,
                                SymmetryClass sym = SymmetryClass::RealSymmetric) {
  if (m4 < 1.0 + m3 * m3 - 1e-12)
    throw std::invalid_argument("four_moment_law: infeasible (need m4 >= 1 + m3^2)");
  const double s = std::sqrt(std::max(4.0 * m4 - 3.0 * m3 * m3, 0.0));
  const double a = 0.5 * (s + m3);
  const double b = 0.5 * (s - m3);
  const double p = 1.0 / (s * a);
  const double q = 1.0 / (s * b);
  const double r = 1.0 - p - q;
  EntryLaw law;
  law.family = LawFamily::ThreePoint;
  law.sym = sym;
  if (r > 1e-12) {
    law.atoms = {a, -b, 0.0};
    law.probs = {p, q, r};
  } else {
    law.atoms = {a, -b};
    law.probs = {p, 1.0 - p};
  }
  law.validate();
  return law;
}

struct MatrixSample {
  SymmetryClass cls = SymmetryClass::RealSymmetric;
  Eigen::MatrixXd real;   // used when cls == RealSymmetric
  Eigen::MatrixXcd herm;  // used when cls == ComplexHermitian
  ProfileKind profile_kind = ProfileKind::Flat;
  std::string profile_id, law_id;
  uint64_t seed = 0;

  int dim() const {
    return cls == SymmetryClass::RealSymmetric ? static_cast<int>(real.rows())
                                               : static_cast<int>(herm.rows());
  }

  bool is_real() const { return cls == SymmetryClass::RealSymmetric; }

  Eigen::MatrixXcd as_complex() const {
    return is_real() ? Eigen::MatrixXcd(real.cast<std::complex<double>>()) : herm;
  }

  std::complex<double> entry(int i, int j) const {
    return is_real() ? std::complex<double>(real(i, j), 0.0) : herm(i, j);
  }
};

/// Draws H with independent entries (up to Hermitian symmetry),
/// E h_ij = 0 and E|h_ij|^2 = s_ij. The entry at (i,j), i<=j, consumes its
/// own RNG stream i*N+j, so the result does not depend on fill order.
inline MatrixSample sample_matrix(const VarianceProfile& profile, const EntryLaw& law,
                                  uint64_t seed) {
  law.validate();
  const int N = profile.N();
  MatrixSample out;
  out.cls = law.sym;
  out.profile_kind = profile.kind();
  out.profile_id = profile.id();
  out.law_id = law.id();
  out.seed = seed;
  if (law.sym == SymmetryClass::RealSymmetric) {
    out.real.resize(N, N);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i <= j; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i) * N + j);
        const double v = std::sqrt(profile(i, j)) * law.draw(rng);
        out.real(i, j) = v;
        out.real(j, i) = v;
      }
  } else {
    out.herm.resize(N, N);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i <= j; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i) * N + j);
        if (i == j) {
          out.herm(i, i) = std::sqrt(profile(i, i)) * law.draw(rng);
        } else {
          const double s = std::sqrt(0.5 * profile(i, j));
          const std::complex<double> v(s * law.draw(rng), s * law.draw(rng));
          out.herm(i, j) = v;
          out.herm(j, i) = std::conj(v);
        }
      }
  }
  return out;
}

/// The invariant Gaussian ensembles: beta = 1 gives GOE with diagonal
/// variance 2/N and off-diagonal 1/N; beta = 2 gives GUE with E|h_ij|^2 = 1/N
/// throughout. These are the stationary laws of the matrix OU flow, with
/// eigenvalue density concentrating on [-2,2].
inline MatrixSample gaussian_invariant_ensemble(int N, int beta, uint64_t seed) {
  if (N < 1) throw std::invalid_argument("gaussian_invariant_ensemble: N >= 1");
  MatrixSample out;
  out.profile_kind = ProfileKind::Flat;
  out.seed = seed;
  const double rN = std::sqrt(1.0 / N);
  if (beta == 1) {
    out.cls = SymmetryClass::RealSymmetric;
    out.profile_id = "goe:N=" + std::to_string(N);
    out.law_id = "gaussian-invariant";
    out.real.resize(N, N);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i <= j; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i) * N + j);
        const double v = (i == j ? std::sqrt(2.0) : 1.0) * rN * rng.normal();
        out.real(i, j) = v;
        out.real(j, i) = v;
      }
  } else if (beta == 2) {
    out.cls = SymmetryClass::ComplexHermitian;
    out.profile_id = "gue:N=" + std::to_string(N);
    out.law_id = "gaussian-invariant";
    out.herm.resize(N, N);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i <= j; ++i) {
        CounterRng rng(seed, static_cast<uint64_t>(i) * N + j);
        if (i == j) {
          out.herm(i, i) = rN * rng.normal();
        } else {
          const double s = std::sqrt(0.5) * rN;
          out.herm(i, j) = std::complex<double>(s * rng.normal(), s * rng.normal());
          out.herm(j, i) = std::conj(out.herm(i, j));
        }
      }
  } else {
    throw std::invalid_argument("gaussian_invariant_ensemble: beta must be 1 or 2");
  }
  return out;
}

// ---- serialization (binary-free JSON / CSV) --------------------------------

inline nlohmann::ordered_json profile_to_json(const VarianceProfile& p) {
  nlohmann::ordered_json j;
  j["N"] = p.N();
  j["kind"] = to_string(p.kind());
  if (p.kind() == ProfileKind::Band) {
    j["W"] = p.band_width();
    j["shape"] = to_string(p.shape());
  }
  j["M"] = p.M();
  std::vector<double> values;
  values.reserve(static_cast<size_t>(p.N()) * p.N());
  for (int i = 0; i < p.N(); ++i)
    for (int k = 0; k < p.N(); ++k) values.push_back(p(i, k));
  j["values"] = values;  // row-major
  return j;
}

inline VarianceProfile profile_from_json(const nlohmann::ordered_json& j) {
  const int N = j.at("N").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "flat") return flat_profile(N);
  if (kind == "band")
    return band_profile(N, j.at("W").get<int>(),
                        band_shape_from_id(j.at("shape").get<std::string>()));
  const auto values = j.at("values").get<std::vector<double>>();
  Eigen::MatrixXd S(N, N);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) S(i, k) = values[static_cast<size_t>(i) * N + k];
  return VarianceProfile::custom(S);
}

/// CSV with a metadata header line; complex samples store re,im column pairs.
inline void write_sample_csv(std::ostream& os, const MatrixSample& m) {
  const int N = m.dim();
  os << "# N=" << N << " class=" << (m.is_real() ? "real" : "hermitian")
     << " profile=" << m.profile_id << " law=" << m.law_id << " seed=" << m.seed
     << "\n";
  char buf[32];
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (j) os << ',';
      if (m.is_real()) {
        std::snprintf(buf, sizeof buf, "%.17g", m.real(i, j));
        os << buf;
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", m.herm(i, j).real());
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", m.herm(i, j).imag());
        os << buf;
      }
    }
    os << "\n";
  }
}

inline MatrixSample read_sample_csv(std::istream& is) {
  std::string header;
  std::getline(is, header);
  if (header.rfind("# N=", 0) != 0)
    throw std::invalid_argument("sample csv: missing metadata header");
  std::istringstream hs(header.substr(2));
  MatrixSample m;
  int N = 0;
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "N") N = std::stoi(val);
    else if (key == "class")
      m.cls = val == "real" ? SymmetryClass::RealSymmetric : SymmetryClass::ComplexHermitian;
    else if (key == "profile") m.profile_id = val;
    else if (key == "law") m.law_id = val;
    else if (key == "seed") m.seed = std::stoull(val);
  }
  if (N <= 0) throw std::invalid_argument("sample csv: bad N");
  if (m.is_real()) m.real.resize(N, N); else m.herm.resize(N, N);
  for (int i = 0; i < N; ++i) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("sample csv: short file");
    std::istringstream ls(line);
    std::string cell;
    for (int j = 0; j < N; ++j) {
      if (m.is_real()) {
        std::getline(ls, cell, ',');
        m.real(i, j) = std::stod(cell);
      } else {
        std::getline(ls, cell, ',');
        const double re = std::stod(cell);
        std::getline(ls, cell, ',');
        m.herm(i, j) = {re, std::stod(cell)};
      }
    }
  }
  return m;
}

}  // namespace rmt

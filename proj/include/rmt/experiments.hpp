#pragma once

// Experiment drivers behind the CLI catalog. Each driver consumes an
// ExperimentConfig, runs its Monte Carlo pipeline with per-task sub-seeds
// (thread-count independent), and returns an ExperimentReport with raw rows,
// summary statistics, and pass/fail checks at the calibrated thresholds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmt/bandlab.hpp"
#include "rmt/dbm.hpp"
#include "rmt/ensemble.hpp"
#include "rmt/gapstats.hpp"
#include "rmt/identities.hpp"
#include "rmt/loggas.hpp"
#include "rmt/parallel.hpp"
#include "rmt/report.hpp"
#include "rmt/semicircle.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stability.hpp"
#include "rmt/stats.hpp"

namespace rmt {

namespace detail {

template <class Body>
ExperimentReport timed_report(const std::string& id, const ExperimentConfig& cfg,
                              Body&& body) {
  ExperimentReport rep;
  rep.id = id;
  rep.inputs = ordered_json(cfg);
  rep.seed = cfg.seed;
  rep.config_hash = cfg.hash();
  const auto t0 = std::chrono::steady_clock::now();
  body(rep);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Pooled unfolded bulk gaps over seeds; mk(k) must return the spectrum of
/// the k-th sample.
template <class Make>
std::vector<double> pooled_bulk_gaps(int seeds, int threads, Make&& mk) {
  std::vector<std::vector<double>> per(static_cast<size_t>(seeds));
  parallel_tasks(seeds, threads, [&](int k) {
    const SpectralData sd = mk(k);
    const auto [lo, hi] = bulk_window(sd.dim());
    per[static_cast<size_t>(k)] = unfold(sd, SemicircleModel{}, lo, hi).gaps;
  });
  std::vector<double> pooled;
  for (const auto& v : per) pooled.insert(pooled.end(), v.begin(), v.end());
  return pooled;
}

inline double ks_noise_level(size_t na, size_t nb) {
  return 1.36 * std::sqrt((static_cast<double>(na) + nb) /
                          (static_cast<double>(na) * nb));
}

}  // namespace detail

// ---- exact identity suite ----------------------------------------------------

inline ExperimentReport experiment_identities(const ExperimentConfig& cfg) {
  return detail::timed_report("identities", cfg, [&](ExperimentReport& rep) {
    // Stieltjes self-consistency on a 100-point grid
    double m_residual = 0.0;
    double min_im = 1.0;
    for (int a = 0; a < 20; ++a)
      for (int b = 0; b < 5; ++b) {
        const double E = -3.0 + 6.0 * a / 19.0;
        const double eta = std::pow(10.0, -3.0 + 3.0 * b / 4.0);
        const std::complex<double> z(E, eta);
        const auto m = SemicircleModel::stieltjes(z);
        m_residual = std::max(m_residual, std::abs(m + 1.0 / m + z));
        min_im = std::min(min_im, m.imag());
      }

    double ward_max = 0.0, schur_max = 0.0, exp_max = 0.0;
    const int n_samples = std::max(cfg.samples, 1);
    Table rows{"residuals",
               {"sample", "ward", "schur", "exp1_offdiag", "exp1_diag", "exp2_row",
                "exp2_col"},
               {}};
    for (int s = 0; s < n_samples; ++s) {
      const auto profile = flat_profile(50);
      const auto law = s % 2 == 0 ? gaussian_law(SymmetryClass::RealSymmetric)
                                  : gaussian_law(SymmetryClass::ComplexHermitian);
      const MatrixSample H = sample_matrix(profile, law, substream_seed(cfg.seed, s));
      const std::complex<double> z(0.3, 0.1 + 0.05 * s);
      const double ward = check_ward(H, z);
      const auto plain = check_resolvent_identities(H, z, 1, 2, 3);
      const auto minored = check_resolvent_identities(H, z, 7, 11, 13, {5, 17});
      ward_max = std::max(ward_max, ward);
      schur_max = std::max({schur_max, plain.schur, minored.schur});
      exp_max = std::max({exp_max, plain.expansion1_offdiag, plain.expansion1_diag,
                          plain.expansion2_row, plain.expansion2_col,
                          minored.expansion1_offdiag, minored.expansion1_diag,
                          minored.expansion2_row, minored.expansion2_col});
      rows.rows.push_back({static_cast<double>(s), ward, plain.schur,
                           plain.expansion1_offdiag, plain.expansion1_diag,
                           plain.expansion2_row, plain.expansion2_col});
    }
    rep.tables.push_back(rows);
    rep.summary["m_identity_residual"] = m_residual;
    rep.summary["min_im_m"] = min_im;
    rep.summary["ward_max"] = ward_max;
    rep.summary["schur_max"] = schur_max;
    rep.summary["expansion_max"] = exp_max;
    rep.checks.push_back(check_le("m_identity_residual", m_residual, 1e-12));
    rep.checks.push_back(check_ge("im_m_positive", min_im, 0.0));
    rep.checks.push_back(check_le("ward_residual", ward_max, 1e-8));
    rep.checks.push_back(check_le("schur_residual", schur_max, 1e-8));
    rep.checks.push_back(check_le("expansion_residual", exp_max, 1e-8));
  });
}

// ---- semicircle histogram ------------------------------------------------------

inline ExperimentReport experiment_semicircle(const ExperimentConfig& cfg) {
  return detail::timed_report("semicircle", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.N_list.back();
    const int seeds = cfg.samples;
    std::vector<std::vector<double>> eigs(static_cast<size_t>(seeds));
    parallel_tasks(seeds, cfg.threads, [&](int k) {
      const auto H = sample_matrix(flat_profile(N), gaussian_law(),
                                   substream_seed(cfg.seed, k));
      const auto sd = eigen_decompose(H, false);
      eigs[static_cast<size_t>(k)].assign(sd.eigenvalues.data(),
                                          sd.eigenvalues.data() + N);
    });
    std::vector<double> all;
    for (const auto& v : eigs) all.insert(all.end(), v.begin(), v.end());
    const double l1 = l1_binned(all, -2.2, 2.2, 40, semicircle_density);
    Table hist{"histogram", {"bin_center", "empirical", "reference"}, {}};
    const int bins = 40;
    const double w = 4.4 / bins;
    std::vector<double> counts(bins, 0.0);
    for (double x : all)
      if (x >= -2.2 && x < 2.2) counts[static_cast<size_t>((x + 2.2) / w)] += 1.0;
    for (int b = 0; b < bins; ++b) {
      const double c = -2.2 + (b + 0.5) * w;
      hist.rows.push_back({c, counts[b] / (all.size() * w), semicircle_density(c)});
    }
    rep.tables.push_back(hist);
    rep.summary["l1"] = l1;
    rep.summary["eigenvalue_count"] = all.size();
    rep.checks.push_back(check_le("semicircle_l1", l1, 0.05));
  });
}

// ---- local law scaling ---------------------------------------------------------

inline ExperimentReport experiment_lsc(const ExperimentConfig& cfg) {
  return detail::timed_report("lsc", cfg, [&](ExperimentReport& rep) {
    Table tab{"scaling",
              {"N", "eta", "M_eta", "Pi", "median_theta", "max_theta",
               "median_lambda", "max_lambda"},
              {}};
    std::vector<double> log_me, log_theta, log_lambda, log_pi;
    for (size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
      const int N = cfg.N_list[ni];
      const double eta = cfg.eta_for(N);
      const std::complex<double> z(cfg.energy, eta);
      const auto profile = flat_profile(N);
      std::vector<double> theta(static_cast<size_t>(cfg.samples));
      std::vector<double> lambda(static_cast<size_t>(cfg.samples));
      parallel_tasks(cfg.samples, cfg.threads, [&](int k) {
        const auto H = sample_matrix(profile, gaussian_law(),
                                     substream_seed(cfg.seed, ni * 100003 + k));
        const auto R = resolvent(H, z, ResolventMode::Full);
        const auto cp = control_params(R, profile);
        theta[static_cast<size_t>(k)] = cp.Theta_dev;
        lambda[static_cast<size_t>(k)] = cp.Lambda;
      });
      const double pi = control_pi(profile.M(), z);
      const double med_t = median(theta), med_l = median(lambda);
      tab.rows.push_back({static_cast<double>(N), eta, N * eta, pi, med_t,
                          *std::max_element(theta.begin(), theta.end()), med_l,
                          *std::max_element(lambda.begin(), lambda.end())});
      log_me.push_back(std::log(N * eta));
      log_theta.push_back(std::log(med_t));
      log_lambda.push_back(std::log(med_l));
      log_pi.push_back(std::log(pi));
    }
    rep.tables.push_back(tab);
    const auto fit_theta = linear_fit(log_me, log_theta);
    const auto fit_lambda = linear_fit(log_pi, log_lambda);
    rep.summary["slope_theta_vs_Meta"] = fit_theta.slope;
    rep.summary["slope_theta_stderr"] = fit_theta.slope_stderr;
    rep.summary["slope_lambda_vs_pi"] = fit_lambda.slope;
    rep.summary["slope_lambda_stderr"] = fit_lambda.slope_stderr;
    rep.checks.push_back(check_within("slope_theta", fit_theta.slope, -1.0, 0.25));
    rep.checks.push_back(check_within("slope_lambda", fit_lambda.slope, 1.0, 0.25));
  });
}

// ---- rigidity -------------------------------------------------------------------

inline ExperimentReport experiment_rigidity(const ExperimentConfig& cfg) {
  return detail::timed_report("rigidity", cfg, [&](ExperimentReport& rep) {
    Table tab{"rigidity", {"N", "seed", "bulk_dev", "count_dev", "edge_weighted"}, {}};
    std::vector<double> logN, log_med;
    double bulk_1000 = 0.0, count_1000 = 0.0;
    for (size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
      const int N = cfg.N_list[ni];
      std::vector<double> gamma_cache(static_cast<size_t>(N));
      for (int j = 1; j <= N; ++j)
        gamma_cache[static_cast<size_t>(j - 1)] = classical_location(j, N);
      std::vector<double> bulk(static_cast<size_t>(cfg.samples));
      std::vector<double> cnt(static_cast<size_t>(cfg.samples));
      std::vector<double> edge(static_cast<size_t>(cfg.samples));
      parallel_tasks(cfg.samples, cfg.threads, [&](int k) {
        const auto H = sample_matrix(flat_profile(N), gaussian_law(),
                                     substream_seed(cfg.seed, ni * 100003 + k));
        const auto sd = eigen_decompose(H, false);
        double b = 0.0, e = 0.0;
        for (int j = 1; j <= N; ++j) {
          const double dev = std::abs(sd.eigenvalues[j - 1] - gamma_cache[j - 1]);
          if (j >= N / 4 && j <= 3 * N / 4) b = std::max(b, N * dev);
          const double jhat = std::min(j, N + 1 - j);
          e = std::max(e, std::pow(N, 2.0 / 3.0) * std::cbrt(jhat) * dev);
        }
        bulk[static_cast<size_t>(k)] = b;
        edge[static_cast<size_t>(k)] = e;
        cnt[static_cast<size_t>(k)] =
            N * counting_sup_distance(sd, SemicircleModel::counting);
      });
      for (int k = 0; k < cfg.samples; ++k)
        tab.rows.push_back({static_cast<double>(N), static_cast<double>(k), bulk[k],
                            cnt[k], edge[k]});
      logN.push_back(std::log(static_cast<double>(N)));
      log_med.push_back(std::log(median(bulk)));
      if (N == 1000) {
        bulk_1000 = *std::max_element(bulk.begin(), bulk.end());
        count_1000 = *std::max_element(cnt.begin(), cnt.end());
      }
    }
    rep.tables.push_back(tab);
    const double bound = 10.0 * std::log(1000.0);
    rep.summary["bulk_dev_max_N1000"] = bulk_1000;
    rep.summary["count_dev_max_N1000"] = count_1000;
    if (bulk_1000 > 0.0) {
      rep.checks.push_back(check_le("bulk_rigidity_N1000", bulk_1000, bound));
      rep.checks.push_back(check_le("counting_N1000", count_1000, bound));
    }
    if (logN.size() >= 3) {
      const auto fit = linear_fit(logN, log_med);
      rep.summary["bulk_dev_growth_slope"] = fit.slope;
      rep.summary["bulk_dev_growth_stderr"] = fit.slope_stderr;
      rep.checks.push_back(
          check_le("bulk_dev_growth", fit.slope - 2.0 * fit.slope_stderr, 0.1));
    }
  });
}

// ---- delocalization --------------------------------------------------------------

inline ExperimentReport experiment_deloc(const ExperimentConfig& cfg) {
  return detail::timed_report("deloc", cfg, [&](ExperimentReport& rep) {
    Table tab{"deloc", {"N", "max_stat", "bulk_median"}, {}};
    for (size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
      const int N = cfg.N_list[ni];
      std::vector<double> stat(static_cast<size_t>(cfg.samples));
      std::vector<double> bulk_meds(static_cast<size_t>(cfg.samples));
      parallel_tasks(cfg.samples, cfg.threads, [&](int k) {
        const auto H = sample_matrix(flat_profile(N), gaussian_law(),
                                     substream_seed(cfg.seed, ni * 100003 + k));
        const auto sd = eigen_decompose(H, true);
        double mx = 0.0;
        std::vector<double> bulk;
        for (int a = 0; a < N; ++a) {
          double sup = 0.0;
          for (int i = 0; i < N; ++i) sup = std::max(sup, sd.abs2(i, a));
          mx = std::max(mx, N * sup);
          if (a >= N / 4 && a <= 3 * N / 4) bulk.push_back(N * sup);
        }
        stat[static_cast<size_t>(k)] = mx;
        bulk_meds[static_cast<size_t>(k)] = median(bulk);
      });
      const double worst = *std::max_element(stat.begin(), stat.end());
      tab.rows.push_back({static_cast<double>(N), worst, median(bulk_meds)});
      rep.checks.push_back(check_le("deloc_N" + std::to_string(N), worst,
                                    10.0 * std::log(static_cast<double>(N))));
    }
    rep.tables.push_back(tab);

    // localized control: a diagonal matrix has standard-basis eigenvectors
    {
      const int N = cfg.N_list.front();
      MatrixSample diag;
      diag.cls = SymmetryClass::RealSymmetric;
      diag.real = Eigen::MatrixXd::Zero(N, N);
      CounterRng rng(cfg.seed, 0xd1a6);
      for (int i = 0; i < N; ++i) diag.real(i, i) = rng.normal();
      const auto sd = eigen_decompose(diag, true);
      double mx = 0.0;
      for (int a = 0; a < N; ++a) {
        double sup = 0.0;
        for (int i = 0; i < N; ++i) sup = std::max(sup, sd.abs2(i, a));
        mx = std::max(mx, N * sup);
      }
      rep.summary["diagonal_control"] = mx;
      rep.checks.push_back(check_ge("diagonal_control", mx, 0.999 * N));
    }

    // wide band matches the mean-field bulk statistic within a factor 2
    {
      const int N = 1000;
      const int W = static_cast<int>(std::pow(N, 0.9));
      std::vector<double> goe_bulk, band_bulk;
      for (int k = 0; k < 3; ++k) {
        for (int which = 0; which < 2; ++which) {
          const auto profile = which == 0 ? flat_profile(N)
                                          : band_profile(N, W, BandShape::Uniform);
          const auto H =
              sample_matrix(profile, gaussian_law(), substream_seed(cfg.seed, 900 + 2 * k + which));
          const auto sd = eigen_decompose(H, true);
          for (int a = N / 4; a <= 3 * N / 4; ++a) {
            double sup = 0.0;
            for (int i = 0; i < N; ++i) sup = std::max(sup, sd.abs2(i, a));
            (which == 0 ? goe_bulk : band_bulk).push_back(N * sup);
          }
        }
      }
      const double ratio = median(band_bulk) / median(goe_bulk);
      rep.summary["band_over_goe_bulk_ratio"] = ratio;
      rep.checks.push_back(check_le("band_ratio_hi", ratio, 2.0));
      rep.checks.push_back(check_ge("band_ratio_lo", ratio, 0.5));
    }
  });
}

// ---- fluctuation averaging --------------------------------------------------------

inline ExperimentReport experiment_flucavg(const ExperimentConfig& cfg) {
  return detail::timed_report("flucavg", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.N_list.back();
    const int seeds = cfg.samples;
    struct Point { double eta; bool in_sweep; std::string tag; };
    std::vector<Point> pts;
    for (double expo : cfg.eta_exponents)
      pts.push_back({std::pow(N, expo), true, "sweep"});
    pts.push_back({std::pow(N, -0.5), false, "headline"});
    pts.push_back({2.0, false, "macroscopic"});
    const int P = static_cast<int>(pts.size());

    // v-matrix per eta: seeds x N complex deviations
    std::vector<Eigen::MatrixXcd> v(static_cast<size_t>(P),
                                    Eigen::MatrixXcd(seeds, N));
    parallel_tasks(seeds, cfg.threads, [&](int k) {
      const auto H = sample_matrix(flat_profile(N), gaussian_law(),
                                   substream_seed(cfg.seed, k));
      const auto sd = eigen_decompose(H, true);
      for (int p = 0; p < P; ++p) {
        const std::complex<double> z(cfg.energy, pts[static_cast<size_t>(p)].eta);
        const auto R = resolvent_diag_from_spectrum(sd, z);
        const auto m = SemicircleModel::stieltjes(z);
        for (int i = 0; i < N; ++i) v[static_cast<size_t>(p)](k, i) = R.diag[i] - m;
      }
    });

    auto complex_std = [](const Eigen::VectorXcd& col) {
      const std::complex<double> mu = col.mean();
      double acc = 0.0;
      for (int i = 0; i < col.size(); ++i) acc += std::norm(col[i] - mu);
      return std::sqrt(acc / (static_cast<double>(col.size()) - 1.0));
    };

    Table tab{"ratios", {"eta", "N_eta", "std_avg", "median_std_vi", "ratio"}, {}};
    std::vector<double> log_ne, log_ratio;
    double headline = 0.0, macroscopic = 0.0;
    for (int p = 0; p < P; ++p) {
      const auto& vp = v[static_cast<size_t>(p)];
      Eigen::VectorXcd avg = vp.rowwise().mean();
      const double std_avg = complex_std(avg);
      std::vector<double> per_i(static_cast<size_t>(N));
      for (int i = 0; i < N; ++i) per_i[static_cast<size_t>(i)] = complex_std(vp.col(i));
      const double med_i = median(per_i);
      const double ratio = std_avg / med_i;
      const double eta = pts[static_cast<size_t>(p)].eta;
      tab.rows.push_back({eta, N * eta, std_avg, med_i, ratio});
      if (pts[static_cast<size_t>(p)].in_sweep) {
        log_ne.push_back(std::log(N * eta));
        log_ratio.push_back(std::log(ratio));
      }
      if (pts[static_cast<size_t>(p)].tag == "headline") headline = ratio;
      if (pts[static_cast<size_t>(p)].tag[0] == 'm') macroscopic = ratio;
    }
    rep.tables.push_back(tab);
    const auto fit = linear_fit(log_ne, log_ratio);
    rep.summary["ratio_at_sqrt_eta"] = headline;
    rep.summary["ratio_macroscopic"] = macroscopic;
    rep.summary["sweep_slope"] = fit.slope;
    rep.checks.push_back(check_le("gain_ratio", headline,
                                  3.0 / std::sqrt(N * std::pow(N, -0.5))));
    rep.checks.push_back(check_le("gain_ratio_macroscopic", macroscopic,
                                  3.0 / std::sqrt(static_cast<double>(N))));
    rep.checks.push_back(check_within("sweep_slope", fit.slope, -0.5, 0.2));
  });
}

// ---- Wigner surmise ---------------------------------------------------------------

inline ExperimentReport experiment_surmise(const ExperimentConfig& cfg) {
  return detail::timed_report("surmise", cfg, [&](ExperimentReport& rep) {
    // exact 2x2 case: the normalized gap of the invariant ensemble
    const int n2 = 100000;
    std::vector<double> gaps2(n2);
    for (int k = 0; k < n2; ++k) {
      CounterRng rng(cfg.seed, 0x2220000 + static_cast<uint64_t>(k));
      const double a = rng.normal();                    // diagonal: sqrt(2/N) = 1 at N=2
      const double c = rng.normal();
      const double b = rng.normal() / std::sqrt(2.0);   // off-diagonal: sqrt(1/N)
      gaps2[static_cast<size_t>(k)] =
          std::sqrt((a - c) * (a - c) + 4.0 * b * b) / std::sqrt(M_PI);
    }
    const double ks2 = ks_statistic(gaps2, surmise_cdf);

    // large-N bulk gaps against the surmise (percent-level model error)
    const int N = cfg.N_list.back();
    const auto pooled = detail::pooled_bulk_gaps(cfg.samples, cfg.threads, [&](int k) {
      return eigen_decompose(
          gaussian_invariant_ensemble(N, 1, substream_seed(cfg.seed, k)), false);
    });
    const double ksN = ks_statistic(pooled, surmise_cdf);
    const double mean_gap = mean(pooled);

    Table tab{"ks", {"case", "ks"}, {{2.0, ks2}, {static_cast<double>(N), ksN}}};
    rep.tables.push_back(tab);
    rep.summary["ks_2x2"] = ks2;
    rep.summary["ks_bulk"] = ksN;
    rep.summary["bulk_mean_gap"] = mean_gap;
    rep.checks.push_back(check_le("surmise_2x2", ks2, 0.01));
    rep.checks.push_back(check_le("surmise_bulk", ksN, 0.05));
    rep.checks.push_back(check_within("bulk_mean_gap", mean_gap, 1.0, 0.05));
  });
}

// ---- sine-kernel pair correlation ---------------------------------------------------

inline ExperimentReport experiment_sine(const ExperimentConfig& cfg) {
  return detail::timed_report("sine", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.N_list.back();
    std::vector<std::vector<double>> unfolded(static_cast<size_t>(cfg.samples));
    parallel_tasks(cfg.samples, cfg.threads, [&](int k) {
      const auto H = gaussian_invariant_ensemble(N, 2, substream_seed(cfg.seed, k));
      const auto sd = eigen_decompose(H, false);
      const auto [lo, hi] = bulk_window(N);
      unfolded[static_cast<size_t>(k)] =
          unfolded_positions(sd, SemicircleModel{}, lo, hi + 1);
    });
    const auto curve = pair_correlation(unfolded, 3.0, 0.1);
    const double l1 = curve_l1(curve, pair_correlation_reference);

    // Poisson control with matched counts and spans
    std::vector<std::vector<double>> poisson(unfolded.size());
    for (size_t s = 0; s < unfolded.size(); ++s) {
      CounterRng rng(cfg.seed, 0x9015 + s);
      const auto& u = unfolded[s];
      const double lo = u.front(), hi = u.back();
      std::vector<double> pts(u.size());
      for (auto& x : pts) x = lo + (hi - lo) * rng.uniform();
      std::sort(pts.begin(), pts.end());
      poisson[s] = std::move(pts);
    }
    const auto flat = pair_correlation(poisson, 3.0, 0.1);
    const double l1_poisson = curve_l1(flat, [](double) { return 1.0; });
    const double small_r = curve.value.front();

    Table tab{"pair_correlation",
              {"r", "estimate", "reference", "poisson_control"},
              {}};
    for (size_t b = 0; b < curve.r.size(); ++b)
      tab.rows.push_back({curve.r[b], curve.value[b],
                          pair_correlation_reference(curve.r[b]), flat.value[b]});
    rep.tables.push_back(tab);
    rep.summary["l1_gue"] = l1;
    rep.summary["l1_poisson"] = l1_poisson;
    rep.summary["estimate_at_small_r"] = small_r;
    rep.checks.push_back(check_le("sine_l1", l1, 0.1));
    rep.checks.push_back(check_le("poisson_flat", l1_poisson, 0.05));
    rep.checks.push_back(check_le("repulsion_small_r", small_r, 0.2));
  });
}

// ---- DBM relaxation -----------------------------------------------------------------

inline ExperimentReport experiment_dbm(const ExperimentConfig& cfg) {
  return detail::timed_report("dbm", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.N_list.back();
    const int seeds = cfg.samples;
    std::vector<double> t_grid = cfg.t_grid;
    if (t_grid.empty()) t_grid = {0.0, std::pow(N, -0.5), 0.2};
    const double t_star = std::pow(N, -0.5);

    const auto reference = detail::pooled_bulk_gaps(seeds, cfg.threads, [&](int k) {
      return eigen_decompose(
          gaussian_invariant_ensemble(N, 1, substream_seed(cfg.seed, 5000 + k)), false);
    });

    Table tab{"relaxation", {"t", "ks", "ks_noise", "mean_gap_diff"}, {}};
    double ks_at_star = 1.0;
    const auto law = bernoulli_law();
    for (double t : t_grid) {
      const auto gaps = detail::pooled_bulk_gaps(seeds, cfg.threads, [&](int k) {
        auto H0 = sample_matrix(flat_profile(N), law, substream_seed(cfg.seed, k));
        const auto Ht = matrix_ou_flow(H0, t, substream_seed(cfg.seed, 9000 + k));
        return eigen_decompose(Ht, false);
      });
      const double ks = ks_two_sample(gaps, reference);
      tab.rows.push_back({t, ks, detail::ks_noise_level(gaps.size(), reference.size()),
                          mean(gaps) - mean(reference)});
      if (std::abs(t - t_star) < 1e-12) ks_at_star = ks;
    }
    rep.tables.push_back(tab);

    // invariance of the Gaussian start under the flow
    const auto goe_flow = detail::pooled_bulk_gaps(seeds, cfg.threads, [&](int k) {
      auto H0 = gaussian_invariant_ensemble(N, 1, substream_seed(cfg.seed, 20000 + k));
      const auto Ht = matrix_ou_flow(H0, 0.2, substream_seed(cfg.seed, 21000 + k));
      return eigen_decompose(Ht, false);
    });
    const double ks_invariance = ks_two_sample(goe_flow, reference);
    const double noise =
        detail::ks_noise_level(goe_flow.size(), reference.size());

    // N=2: eigenvalue SDE against the matrix flow
    const int paths = 10000;
    std::vector<double> gap_sde(paths), gap_matrix(paths);
    parallel_tasks(paths, cfg.threads, [&](int k) {
      const auto H0 = gaussian_invariant_ensemble(2, 1, substream_seed(cfg.seed, 40000 + k));
      const auto sd0 = eigen_decompose(H0, false);
      const auto Ht = matrix_ou_flow(H0, 1.0, substream_seed(cfg.seed, 50000 + k));
      const auto sdt = eigen_decompose(Ht, false);
      gap_matrix[static_cast<size_t>(k)] = sdt.eigenvalues[1] - sdt.eigenvalues[0];
      ParticleState x0{0.0, sd0.eigenvalues};
      FlowConfig fc;
      fc.beta = 1.0;
      fc.t = 1.0;
      fc.seed = substream_seed(cfg.seed, 60000 + k);
      const auto xt = dbm_integrate(x0, fc);
      gap_sde[static_cast<size_t>(k)] = xt.x[1] - xt.x[0];
    });
    const double ks_n2 = ks_two_sample(gap_sde, gap_matrix);

    rep.summary["ks_at_t_star"] = ks_at_star;
    rep.summary["ks_invariance"] = ks_invariance;
    rep.summary["ks_invariance_noise"] = noise;
    rep.summary["ks_n2_sde_vs_matrix"] = ks_n2;
    rep.checks.push_back(check_le("dbm_gap_ks", ks_at_star, 0.05));
    rep.checks.push_back(check_le("goe_invariance", ks_invariance, 2.0 * noise));
    rep.checks.push_back(check_le("sde_vs_matrix_n2", ks_n2, 0.05));
  });
}

// ---- four-moment matching -----------------------------------------------------------

inline ExperimentReport experiment_fourmoment(const ExperimentConfig& cfg) {
  return detail::timed_report("fourmoment", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.N_list.back();
    const auto three_point = four_moment_law(0.0, 3.0);  // matches Gaussian m1..m4
    const auto a = detail::pooled_bulk_gaps(cfg.samples, cfg.threads, [&](int k) {
      return eigen_decompose(
          sample_matrix(flat_profile(N), three_point, substream_seed(cfg.seed, k)),
          false);
    });
    const auto b = detail::pooled_bulk_gaps(cfg.samples, cfg.threads, [&](int k) {
      return eigen_decompose(
          sample_matrix(flat_profile(N), gaussian_law(),
                        substream_seed(cfg.seed, 100000 + k)),
          false);
    });
    const auto rep2 = distribution_distance(a, b, cfg.seed);
    rep.summary["ks"] = rep2.ks;
    rep.summary["ks_ci"] = rep2.ks_ci;
    rep.summary["mean_delta"] = rep2.mean_delta;
    Table tab{"fourmoment", {"ks", "ks_ci", "mean_delta"},
              {{rep2.ks, rep2.ks_ci, rep2.mean_delta}}};
    rep.tables.push_back(tab);
    rep.checks.push_back(check_le("fourmoment_ks", rep2.ks, 0.05));
  });
}

// ---- beta-ensemble cross-validation ---------------------------------------------------

inline ExperimentReport experiment_loggas_xval(const ExperimentConfig& cfg) {
  return detail::timed_report("loggas-xval", cfg, [&](ExperimentReport& rep) {
    const int n = cfg.samples >= 100 ? cfg.samples : 10000;

    // N=8, beta=2: largest particle and central gap, two independent samplers
    const int N = 8;
    std::vector<double> tri_max(n), tri_gap(n);
    parallel_tasks(n, cfg.threads, [&](int k) {
      const auto sd = tridiagonal_sample(N, 2.0, substream_seed(cfg.seed, k));
      tri_max[static_cast<size_t>(k)] = sd.eigenvalues[N - 1];
      tri_gap[static_cast<size_t>(k)] = sd.eigenvalues[4] - sd.eigenvalues[3];
    });
    BetaSpec spec8{N, 2.0, Potential::quadratic()};
    const auto run8 = mcmc_sample(spec8, n, 4000, 16, substream_seed(cfg.seed, 77));
    std::vector<double> mc_max, mc_gap;
    for (const auto& x : run8.configs) {
      mc_max.push_back(x[N - 1]);
      mc_gap.push_back(x[4] - x[3]);
    }
    const double ks_max = ks_two_sample(tri_max, mc_max);
    const double ks_gap = ks_two_sample(tri_gap, mc_gap);

    // N=1 oracles: centered Gaussian with variance 2/(beta N)
    std::vector<double> tri1(n);
    parallel_tasks(n, cfg.threads, [&](int k) {
      tri1[static_cast<size_t>(k)] =
          tridiagonal_sample(1, 2.0, substream_seed(cfg.seed, 300000 + k)).eigenvalues[0];
    });
    const double var1 = variance(tri1);
    BetaSpec spec1{1, 2.0, Potential::quadratic()};
    const auto run1 = mcmc_sample(spec1, n, 2000, 8, substream_seed(cfg.seed, 78));
    std::vector<double> mc1;
    for (const auto& x : run1.configs) mc1.push_back(x[0]);
    const double sigma1 = std::sqrt(2.0 / (spec1.beta * spec1.N));
    auto normal_cdf = [sigma1](double x) {
      return 0.5 * std::erfc(-x / (sigma1 * std::sqrt(2.0)));
    };
    const double ks_mcmc1 = ks_statistic(mc1, normal_cdf);

    // N=2 oracles: gap density s^beta exp(-beta s^2/4) up to normalization
    std::vector<double> tri2(n);
    parallel_tasks(n, cfg.threads, [&](int k) {
      const auto sd = tridiagonal_sample(2, 1.0, substream_seed(cfg.seed, 600000 + k));
      tri2[static_cast<size_t>(k)] = sd.eigenvalues[1] - sd.eigenvalues[0];
    });
    auto gap_cdf_b1 = [](double s) {  // beta = 1 closed form
      return s <= 0.0 ? 0.0 : 1.0 - std::exp(-0.25 * s * s);
    };
    const double ks_tri2 = ks_statistic(tri2, gap_cdf_b1);

    BetaSpec spec2{2, 4.0, Potential::quadratic()};
    const auto run2 = mcmc_sample(spec2, n, 2000, 8, substream_seed(cfg.seed, 79));
    std::vector<double> mc2;
    for (const auto& x : run2.configs) mc2.push_back(x[1] - x[0]);
    const NumericCdf gap_cdf_b4(
        [](double s) { return std::pow(s, 4.0) * std::exp(-s * s); }, 0.0, 8.0);
    const double ks_mc2 = ks_statistic(mc2, [&](double s) { return gap_cdf_b4(s); });

    // semicircle limit of the tridiagonal model
    std::vector<double> tri_eigs;
    for (int k = 0; k < 50; ++k) {
      const auto sd = tridiagonal_sample(200, 2.0, substream_seed(cfg.seed, 900000 + k));
      tri_eigs.insert(tri_eigs.end(), sd.eigenvalues.data(), sd.eigenvalues.data() + 200);
    }
    const double tri_l1 = l1_binned(tri_eigs, -2.2, 2.2, 40, semicircle_density);

    Table tab{"xval",
              {"ks_lambda_max", "ks_central_gap", "tri_n1_var", "ks_mcmc_n1",
               "ks_tri_n2", "ks_mcmc_n2_beta4", "tri_semicircle_l1"},
              {{ks_max, ks_gap, var1, ks_mcmc1, ks_tri2, ks_mc2, tri_l1}}};
    rep.tables.push_back(tab);
    rep.summary["mcmc_acceptance_n8"] = run8.acceptance;
    rep.summary["mcmc_autocorr_n8"] = run8.autocorr_time;
    rep.summary["ks_lambda_max"] = ks_max;
    rep.summary["ks_central_gap"] = ks_gap;
    rep.checks.push_back(check_le("xval_lambda_max", ks_max, 0.05));
    rep.checks.push_back(check_le("xval_central_gap", ks_gap, 0.05));
    rep.checks.push_back(check_within("tridiag_n1_variance", var1, 1.0, 0.05));
    rep.checks.push_back(check_le("mcmc_n1_ks", ks_mcmc1, 0.02));
    rep.checks.push_back(check_le("tridiag_n2_gap_ks", ks_tri2, 0.02));
    rep.checks.push_back(check_le("mcmc_n2_beta4_gap_ks", ks_mc2, 0.03));
    rep.checks.push_back(check_le("tridiag_semicircle_l1", tri_l1, 0.05));
  });
}

// ---- level repulsion ------------------------------------------------------------------

inline ExperimentReport experiment_repulsion(const ExperimentConfig& cfg) {
  return detail::timed_report("repulsion", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.gas_N;
    const int K = cfg.window_K;
    const int L = N / 2;
    Eigen::VectorXd gamma_full(N);
    for (int j = 1; j <= N; ++j) gamma_full[j - 1] = classical_location(j, N);
    const auto cond = condition_on(gamma_full, L, K, cfg.good_xi);
    const double rho_bar = SemicircleModel::density(cond.ybar());

    Table tab{"repulsion", {"beta", "slope", "slope_stderr", "inv_moment_drift"}, {}};
    for (double beta : cfg.beta_list) {
      BetaSpec spec{N, beta, Potential::quadratic()};
      const int chains = 4;
      const long per_chain = cfg.mcmc_steps / chains;
      std::vector<std::vector<double>> chain_gaps(chains);
      parallel_tasks(chains, cfg.threads, [&](int c) {
        const auto run = conditional_sampler(
            spec, cond, per_chain, cfg.mcmc_burnin, cfg.mcmc_thinning,
            substream_seed(cfg.seed, static_cast<uint64_t>(1000 * beta) + c));
        auto& gaps = chain_gaps[static_cast<size_t>(c)];
        for (const auto& x : run.configs)
          for (int a = 0; a + 1 < x.size(); ++a)
            gaps.push_back(N * rho_bar * (x[a + 1] - x[a]));
      });
      std::vector<double> gaps;
      for (auto& g : chain_gaps) gaps.insert(gaps.end(), g.begin(), g.end());
      std::sort(gaps.begin(), gaps.end());

      // log-log CDF slope on the fit window
      const int pts = 8;
      std::vector<double> lx, ly, wts, counts;
      for (int p = 0; p < pts; ++p) {
        const double s = cfg.s_fit_lo *
                         std::pow(cfg.s_fit_hi / cfg.s_fit_lo,
                                  static_cast<double>(p) / (pts - 1));
        const auto cnt = static_cast<double>(
            std::upper_bound(gaps.begin(), gaps.end(), s) - gaps.begin());
        counts.push_back(cnt);
        if (cnt < 3.0) continue;  // too few small-gap events at this abscissa
        lx.push_back(std::log(s));
        ly.push_back(std::log(cnt / static_cast<double>(gaps.size())));
        wts.push_back(cnt);  // Poisson weighting: var(log F) ~ 1/count
      }
      if (lx.size() < 3)
        throw std::runtime_error(
            "repulsion: insufficient small-gap events (largest count " +
            std::to_string(counts.empty() ? 0.0 : counts.back()) + ")");
      const auto fit = linear_fit(lx, ly, wts);

      // inverse-gap moment p = beta/2 < beta+1; drift under halving the sample
      const double p_mom = 0.5 * beta;
      double full = 0.0, half = 0.0;
      for (size_t i = 0; i < gaps.size(); ++i) {
        const double t = std::pow(gaps[i], -p_mom);
        full += t;
        if (i % 2 == 0) half += 2.0 * t;
      }
      full /= static_cast<double>(gaps.size());
      half /= static_cast<double>(gaps.size());
      const double drift = std::abs(half - full) / full;

      tab.rows.push_back({beta, fit.slope, fit.slope_stderr, drift});
      const double tol = beta == 1.0 ? 0.3 : 0.4;
      rep.checks.push_back(check_within(
          "repulsion_slope_beta" + std::to_string(static_cast<int>(beta)), fit.slope,
          beta + 1.0, tol));
      rep.checks.push_back(check_le(
          "inv_moment_drift_beta" + std::to_string(static_cast<int>(beta)), drift, 0.1));
      rep.summary["slope_beta" + std::to_string(static_cast<int>(beta))] = fit.slope;
      rep.summary["counts_beta" + std::to_string(static_cast<int>(beta))] = counts;
    }
    rep.tables.push_back(tab);
  });
}

// ---- local rigidity ---------------------------------------------------------------------

inline ExperimentReport experiment_local_rigidity(const ExperimentConfig& cfg) {
  return detail::timed_report("local-rigidity", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.gas_N;
    const int K = cfg.window_K;
    const int L = N / 2;
    const double beta = cfg.beta_list.front();
    Eigen::VectorXd gamma_full(N);
    for (int j = 1; j <= N; ++j) gamma_full[j - 1] = classical_location(j, N);
    const auto cond = condition_on(gamma_full, L, K, cfg.good_xi);
    BetaSpec spec{N, beta, Potential::quadratic()};
    const auto run = conditional_sampler(spec, cond, cfg.mcmc_steps, cfg.mcmc_burnin,
                                         cfg.mcmc_thinning, substream_seed(cfg.seed, 5));

    const int K2 = cond.window_size();
    const int center = K;  // 0-based position of index L
    std::vector<double> xc;
    for (const auto& x : run.configs) xc.push_back(x[center]);
    const double sigma = stddev(xc);
    const double ybar = cond.ybar();
    double exceed1 = 0, exceed2 = 0, exceed3 = 0;
    for (double x : xc) {
      const double d = std::abs(x - ybar);
      if (d > sigma) ++exceed1;
      if (d > 2 * sigma) ++exceed2;
      if (d > 3 * sigma) ++exceed3;
    }
    const auto n = static_cast<double>(xc.size());
    exceed1 /= n; exceed2 /= n; exceed3 /= n;

    double worst_mean_dev = 0.0;
    for (int a = 0; a < K2; ++a) {
      std::vector<double> xa;
      for (const auto& x : run.configs) xa.push_back(x[a]);
      worst_mean_dev = std::max(
          worst_mean_dev, std::abs(mean(xa) - cond.alpha_point(cond.L - cond.K + a)));
    }
    const double mean_dev_tol = 0.1 * cond.J_len() / K2;

    // window of size one: chain histogram against direct quadrature
    const auto cond1 = condition_on(gamma_full, L, 0, cfg.good_xi);
    const auto run1 = conditional_sampler(spec, cond1, cfg.mcmc_steps, cfg.mcmc_burnin,
                                          cfg.mcmc_thinning, substream_seed(cfg.seed, 6));
    std::vector<double> x1;
    for (const auto& x : run1.configs) x1.push_back(x[0]);
    const auto dens1 = conditional_k1_density(spec, cond1);
    const double norm1 = integrate(dens1, cond1.J_lo(), cond1.J_hi(), 1e-12);
    const double l1 = l1_binned(x1, cond1.J_lo(), cond1.J_hi(), 30,
                                [&](double x) { return dens1(x) / norm1; });

    rep.summary["exceed_1sigma"] = exceed1;
    rep.summary["exceed_2sigma"] = exceed2;
    rep.summary["exceed_3sigma"] = exceed3;
    rep.summary["worst_mean_dev"] = worst_mean_dev;
    rep.summary["mean_dev_tol"] = mean_dev_tol;
    rep.summary["k1_quadrature_l1"] = l1;
    Table tab{"local_rigidity",
              {"exceed_1sigma", "exceed_2sigma", "exceed_3sigma", "worst_mean_dev",
               "k1_l1"},
              {{exceed1, exceed2, exceed3, worst_mean_dev, l1}}};
    rep.tables.push_back(tab);
    rep.checks.push_back(check_le("center_3sigma_tail", exceed3, 0.01));
    rep.checks.push_back(check_le("mean_vs_alpha", worst_mean_dev, mean_dev_tol));
    rep.checks.push_back(check_le("k1_quadrature_l1", l1, 0.03));
  });
}

// ---- local gap universality ----------------------------------------------------------------

inline ExperimentReport experiment_gap_local(const ExperimentConfig& cfg) {
  return detail::timed_report("gap-local", cfg, [&](ExperimentReport& rep) {
    const int N = cfg.gas_N;
    const int K = cfg.window_K;
    const int L = N / 2;
    const double beta = cfg.beta_list.front();

    // two independent good boundary draws from the invariant matrix ensemble
    auto draw_good = [&](uint64_t salt, int& tries) -> ConditionalSpec {
      for (int attempt = 0; attempt < 200; ++attempt) {
        const auto H = gaussian_invariant_ensemble(
            N, static_cast<int>(beta), substream_seed(cfg.seed, salt + attempt));
        const auto sd = eigen_decompose(H, false);
        auto cond = condition_on(sd.eigenvalues, L, K, cfg.good_xi);
        if (good_set_check(cond, SemicircleModel{}).good) {
          tries = attempt + 1;
          return cond;
        }
      }
      throw std::runtime_error("gap-local: no good boundary draw in 200 attempts");
    };
    int tries_a = 0, tries_b = 0;
    ConditionalSpec cond_a = draw_good(100, tries_a);
    ConditionalSpec cond_b = draw_good(300000, tries_b);

    // affine-match the second draw's configuration interval onto the first
    const double scale = cond_a.J_len() / cond_b.J_len();
    const double shift = cond_a.J_lo() - scale * cond_b.J_lo();
    for (auto& y : cond_b.y_lower) y = shift + scale * y;
    for (auto& y : cond_b.y_upper) y = shift + scale * y;
    if (std::abs(cond_a.J_len() - cond_b.J_len()) > 1e-9 * cond_a.J_len())
      throw std::runtime_error("gap-local: interval mismatch after matching");

    const int K2 = cond_a.window_size();
    const double jlen_predicted =
        K2 / (N * SemicircleModel::density(cond_a.ybar()));
    const double jlen_margin = cond_a.J_len() / jlen_predicted - 1.0;

    BetaSpec spec{N, beta, Potential::quadratic()};
    auto central_gaps = [&](const ConditionalSpec& cond, const BetaSpec& sp,
                            uint64_t salt) {
      const auto run = conditional_sampler(sp, cond, cfg.mcmc_steps, cfg.mcmc_burnin,
                                           cfg.mcmc_thinning,
                                           substream_seed(cfg.seed, salt));
      std::vector<double> g;
      for (const auto& x : run.configs)
        g.push_back((x[K + 1] - x[K]) * K2 / cond.J_len());
      return g;
    };
    const auto gaps_a = central_gaps(cond_a, spec, 11);
    const auto gaps_b = central_gaps(cond_b, spec, 12);
    const auto cmp = distribution_distance(gaps_a, gaps_b, cfg.seed);

    // identical boundary data, independent chains: pure sampling noise
    const auto gaps_a2 = central_gaps(cond_a, spec, 13);
    const double ks_null = ks_two_sample(gaps_a, gaps_a2);
    const double noise = detail::ks_noise_level(gaps_a.size(), gaps_a2.size());

    // quartic potential with classical-location boundary, matched interval
    const auto quartic = Potential::quartic();
    const auto model_q = equilibrium_model(quartic);
    Eigen::VectorXd gamma_q(N);
    for (int j = 1; j <= N; ++j) gamma_q[j - 1] = model_q.gamma(j, N);
    auto cond_q = condition_on(gamma_q, L, K, cfg.good_xi);
    const double scale_q = cond_a.J_len() / cond_q.J_len();
    const double shift_q = cond_a.J_lo() - scale_q * cond_q.J_lo();
    for (auto& y : cond_q.y_lower) y = shift_q + scale_q * y;
    for (auto& y : cond_q.y_upper) y = shift_q + scale_q * y;
    BetaSpec spec_q{N, beta, quartic};
    const auto gaps_q = central_gaps(cond_q, spec_q, 14);
    const double mean_diff_q = std::abs(mean(gaps_q) - mean(gaps_a)) / mean(gaps_a);
    const double ks_q = ks_two_sample(gaps_q, gaps_a);

    Table tab{"gap_local",
              {"ks", "ks_ci", "ks_null", "noise", "jlen_margin", "mean_diff_quartic",
               "ks_quartic"},
              {{cmp.ks, cmp.ks_ci, ks_null, noise, jlen_margin, mean_diff_q, ks_q}}};
    rep.tables.push_back(tab);
    rep.summary["ks"] = cmp.ks;
    rep.summary["ks_ci"] = cmp.ks_ci;
    rep.summary["boundary_draw_attempts"] = std::vector<int>{tries_a, tries_b};
    rep.summary["jlen_margin"] = jlen_margin;
    rep.checks.push_back(check_le("gap_universality_ks", cmp.ks, 0.05));
    rep.checks.push_back(check_le("identical_boundary_null", ks_null, 2.0 * noise));
    rep.checks.push_back(check_le("quartic_mean_gap_diff", mean_diff_q, 0.05));
  });
}

// ---- band diffusion profile ------------------------------------------------------------------

inline ExperimentReport experiment_band(const ExperimentConfig& cfg) {
  return detail::timed_report("band", cfg, [&](ExperimentReport& rep) {
    const int W = cfg.band_W;
    const int N = cfg.band_ratio * W;
    const double E = cfg.energy;
    const auto profile = band_profile(N, W, BandShape::Uniform);
    const double crossover = std::pow(static_cast<double>(W) / N, 2.0);

    Table tab{"band",
              {"k", "eta", "rel_l1_T_theta", "tol", "mass_ratio", "flat_max_over_mean",
               "rel_l1_approx"},
              {}};
    Table curves{"profiles",
                 {"k", "x", "theta_exact", "eta_theta", "log_theta", "theta_approx",
                  "T_empirical", "T_stderr"},
                 {}};
    for (int k : cfg.k_list) {
      const double eta = std::pow(5.0, -k);
      const std::complex<double> z(E, eta);
      const auto exact = theta_exact(profile, z);
      const auto approx = theta_fourier_approx(W, BandShape::Uniform, E, eta, N);
      const int samples = eta < crossover ? 2 * cfg.samples : cfg.samples;
      const auto emp = empirical_T(profile, gaussian_law(), z, samples,
                                   substream_seed(cfg.seed, static_cast<uint64_t>(k)),
                                   cfg.threads);
      const double rel = profile_rel_l1(emp.theta, exact.theta);
      const double tol = std::max(0.1, 3.0 / (N * eta));
      const double im_m = SemicircleModel::stieltjes(z).imag();
      const double mass_ratio = exact.mass / (im_m / eta);
      const double flat_ratio = emp.theta.maxCoeff() / emp.theta.mean();
      const double rel_approx = profile_rel_l1(approx.theta, exact.theta);
      tab.rows.push_back({static_cast<double>(k), eta, rel, tol, mass_ratio,
                          flat_ratio, rel_approx});
      for (int x = 0; x < N; ++x) {
        const int off = x <= N / 2 ? x : x - N;  // signed torus offset
        curves.rows.push_back({static_cast<double>(k), static_cast<double>(off),
                               exact.theta[x], eta * exact.theta[x],
                               std::log(std::max(exact.theta[x], 1e-300)),
                               approx.theta[x], emp.theta[x], emp.stderr_[x]});
      }

      if (eta > crossover)
        rep.checks.push_back(check_le("T_vs_theta_k" + std::to_string(k), rel, tol));
      rep.checks.push_back(
          check_within("mass_k" + std::to_string(k), mass_ratio, 1.0, 0.1));
      if (eta < crossover) {
        rep.checks.push_back(
            check_le("flat_regime_k" + std::to_string(k), flat_ratio, 1.2));
        // flat height ~ 1/(N eta) within a factor 3
        const double height_ratio = emp.theta.mean() * (N * eta);
        rep.checks.push_back(check_le("flat_height_hi_k" + std::to_string(k),
                                      height_ratio, 3.0));
        rep.checks.push_back(check_ge("flat_height_lo_k" + std::to_string(k),
                                      height_ratio, 1.0 / 3.0));
      }
      if (eta >= crossover && eta <= 0.2)
        rep.checks.push_back(
            check_le("approx_vs_exact_k" + std::to_string(k), rel_approx, 0.2));
      if (k == cfg.k_list.front()) {
        // peaked regime: height ~ 1/(W sqrt(eta)) within a factor 3
        const double peak_ratio = exact.theta.maxCoeff() * (W * std::sqrt(eta));
        rep.checks.push_back(check_le("peak_height_hi", peak_ratio, 3.0));
        rep.checks.push_back(check_ge("peak_height_lo", peak_ratio, 1.0 / 3.0));
      }
    }
    rep.tables.push_back(tab);
    rep.tables.push_back(curves);
    rep.summary["W"] = W;
    rep.summary["N"] = N;
    rep.summary["crossover_eta"] = crossover;
  });
}

// ---- catalog -----------------------------------------------------------------------------------

struct ExperimentEntry {
  std::string id;
  std::string description;
  std::string statement;  // the theoretical statement the experiment probes
  ExperimentReport (*run)(const ExperimentConfig&);
};

inline const std::vector<ExperimentEntry>& experiment_catalog() {
  static const std::vector<ExperimentEntry> catalog = {
      {"identities", "exact resolvent identity residuals (Ward, Schur, expansions)",
       "m + 1/m + z = 0; sum_j |G_ij|^2 = Im G_ii / eta", &experiment_identities},
      {"semicircle", "global eigenvalue histogram against the semicircle density",
       "empirical density -> (1/2pi) sqrt(4 - x^2)", &experiment_semicircle},
      {"lsc", "local-law scaling of |m_N - m| and Lambda in (N eta)",
       "|m_N - m| ~ 1/(N eta), Lambda ~ Pi", &experiment_lsc},
      {"rigidity", "eigenvalue rigidity and counting-function accuracy",
       "N |lambda_j - gamma_j| = O(log N) in the bulk", &experiment_rigidity},
      {"deloc", "eigenvector sup-norm delocalization with localized control",
       "N ||u||_inf^2 = O(log N)", &experiment_deloc},
      {"flucavg", "fluctuation averaging gain of [v] over individual v_i",
       "std([v]) / std(v_i) ~ (N eta)^{-1/2}", &experiment_flucavg},
      {"surmise", "nearest-neighbour gap law against the Wigner surmise",
       "p(s) = (pi s/2) exp(-pi s^2/4), exact at 2x2", &experiment_surmise},
      {"sine", "two-point correlation against the sine-kernel determinant",
       "R_2(r) -> 1 - (sin pi r / pi r)^2", &experiment_sine},
      {"dbm", "relaxation of the matrix OU flow to Gaussian gap statistics",
       "gap laws of H_t and GOE coincide for t >> N^{-1}", &experiment_dbm},
      {"fourmoment", "gap statistics under four-moment matching",
       "matching m1..m4 gives matching local statistics", &experiment_fourmoment},
      {"loggas-xval", "tridiagonal sampler against Metropolis log-gas sampling",
       "both target the beta-ensemble Gibbs measure", &experiment_loggas_xval},
      {"repulsion", "small-gap repulsion exponent of conditioned gases",
       "P(gap <= s) ~ s^{beta+1}", &experiment_repulsion},
      {"local-rigidity", "Gaussian-tail rigidity of conditioned particles",
       "P(N |x_k - alpha_k| >= u) <= C exp(-c u^2)", &experiment_local_rigidity},
      {"gap-local", "gap universality across good boundary data on a matched interval",
       "central-gap law independent of boundary and potential", &experiment_gap_local},
      {"band", "band-matrix diffusion profile and total mass",
       "T ~ Theta = |m|^2 S / (1 - |m|^2 S), theta(p) ~ 1/(alpha eta + W^2 D p^2)",
       &experiment_band},
  };
  return catalog;
}

struct UnknownExperiment : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const ExperimentEntry& find_experiment(const std::string& id) {
  for (const auto& e : experiment_catalog())
    if (e.id == id) return e;
  std::string valid;
  for (const auto& e : experiment_catalog()) valid += (valid.empty() ? "" : ", ") + e.id;
  throw UnknownExperiment("unknown experiment '" + id + "'; valid ids: " + valid);
}

/// Per-experiment default configuration (the acceptance settings).
inline ExperimentConfig default_config(const std::string& id) {
  ExperimentConfig cfg;
  cfg.experiment = id;
  if (id == "identities") {
    cfg.samples = 10;
  } else if (id == "semicircle") {
    cfg.N_list = {2000};
    cfg.samples = 5;
  } else if (id == "lsc") {
    cfg.N_list = {250, 500, 1000, 2000};
    cfg.samples = 20;
    cfg.eta_exponent = -0.8;
  } else if (id == "rigidity") {
    cfg.N_list = {250, 500, 1000, 2000};
    cfg.samples = 20;
  } else if (id == "deloc") {
    cfg.N_list = {500, 1000, 2000};
    cfg.samples = 5;
  } else if (id == "flucavg") {
    cfg.N_list = {1000};
    cfg.samples = 100;
  } else if (id == "surmise") {
    cfg.N_list = {1000};
    cfg.samples = 10;
  } else if (id == "sine") {
    cfg.N_list = {1000};
    cfg.samples = 20;
  } else if (id == "dbm") {
    cfg.N_list = {500};
    cfg.samples = 50;
    cfg.t_grid.clear();  // auto {0, N^{-1/2}, 0.2}
  } else if (id == "fourmoment") {
    cfg.N_list = {500};
    cfg.samples = 50;
  } else if (id == "loggas-xval") {
    cfg.samples = 10000;
  } else if (id == "repulsion") {
    cfg.gas_N = 200;
    cfg.window_K = 4;
    cfg.beta_list = {1.0, 2.0};
    cfg.mcmc_steps = 600000;
    cfg.mcmc_burnin = 20000;
    cfg.mcmc_thinning = 4;
  } else if (id == "local-rigidity") {
    cfg.gas_N = 200;
    cfg.window_K = 4;
    cfg.beta_list = {1.0};
    cfg.mcmc_steps = 100000;
    cfg.mcmc_burnin = 20000;
    cfg.mcmc_thinning = 4;
  } else if (id == "gap-local") {
    cfg.gas_N = 200;
    cfg.window_K = 8;
    cfg.beta_list = {1.0};
    cfg.mcmc_steps = 30000;
    cfg.mcmc_burnin = 20000;
    cfg.mcmc_thinning = 8;
    cfg.good_xi = 1.0;
  } else if (id == "band") {
    cfg.band_W = 16;
    cfg.band_ratio = 25;
    cfg.k_list = {1, 2, 3, 4, 5};
    cfg.samples = 256;
  } else {
    (void)find_experiment(id);  // throws with the catalog listing
  }
  return cfg;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  return find_experiment(cfg.experiment).run(cfg);
}

}  // namespace rmt

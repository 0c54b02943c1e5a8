#pragma once

// Experiment configuration and reporting types shared by every experiment
// driver and the CLI. Reports render to one CSV (raw rows) plus one JSON
// summary; every output file carries the config hash and seed.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace rmt {

using ordered_json = nlohmann::ordered_json;

struct ExperimentConfig {
  std::string experiment = "lsc";
  std::vector<int> N_list = {250, 500, 1000, 2000};
  double energy = 0.0;
  double eta_exponent = -0.8;          // eta = N^exponent when eta_value == 0
  double eta_value = 0.0;
  std::vector<double> eta_exponents = {-0.2, -0.4, -0.6, -0.8};
  int samples = 20;
  std::vector<double> t_grid = {0.0, 0.044721, 0.2, 1.0};
  std::vector<double> beta_list = {1.0, 2.0};
  int band_W = 16;
  int band_ratio = 25;                 // N = ratio * W for band experiments
  std::vector<int> k_list = {1, 2, 3, 4, 5};  // eta = 5^-k
  int gas_N = 200;
  int window_K = 4;                    // half-width; window size is 2K+1
  double good_xi = 1.0;
  long mcmc_steps = 200000;            // retained configurations
  long mcmc_burnin = 20000;            // sweeps
  int mcmc_thinning = 4;               // sweeps between retained configurations
  double s_fit_lo = 0.02, s_fit_hi = 0.2;
  uint64_t seed = 1;
  int threads = 0;                     // 0 = all
  std::string out_dir = "out";

  template <typename Json>
  friend void to_json(Json& j, const ExperimentConfig& c) {
    j["experiment"] = c.experiment;
    j["N_list"] = c.N_list;
    j["energy"] = c.energy;
    j["eta_exponent"] = c.eta_exponent;
    j["eta_value"] = c.eta_value;
    j["eta_exponents"] = c.eta_exponents;
    j["samples"] = c.samples;
    j["t_grid"] = c.t_grid;
    j["beta_list"] = c.beta_list;
    j["band_W"] = c.band_W;
    j["band_ratio"] = c.band_ratio;
    j["k_list"] = c.k_list;
    j["gas_N"] = c.gas_N;
    j["window_K"] = c.window_K;
    j["good_xi"] = c.good_xi;
    j["mcmc_steps"] = c.mcmc_steps;
    j["mcmc_burnin"] = c.mcmc_burnin;
    j["mcmc_thinning"] = c.mcmc_thinning;
    j["s_fit_lo"] = c.s_fit_lo;
    j["s_fit_hi"] = c.s_fit_hi;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out_dir"] = c.out_dir;
  }

  template <typename Json>
  friend void from_json(const Json& j, ExperimentConfig& c) {
    j.at("experiment").get_to(c.experiment);
    j.at("N_list").get_to(c.N_list);
    j.at("energy").get_to(c.energy);
    j.at("eta_exponent").get_to(c.eta_exponent);
    j.at("eta_value").get_to(c.eta_value);
    j.at("eta_exponents").get_to(c.eta_exponents);
    j.at("samples").get_to(c.samples);
    j.at("t_grid").get_to(c.t_grid);
    j.at("beta_list").get_to(c.beta_list);
    j.at("band_W").get_to(c.band_W);
    j.at("band_ratio").get_to(c.band_ratio);
    j.at("k_list").get_to(c.k_list);
    j.at("gas_N").get_to(c.gas_N);
    j.at("window_K").get_to(c.window_K);
    j.at("good_xi").get_to(c.good_xi);
    j.at("mcmc_steps").get_to(c.mcmc_steps);
    j.at("mcmc_burnin").get_to(c.mcmc_burnin);
    j.at("mcmc_thinning").get_to(c.mcmc_thinning);
    j.at("s_fit_lo").get_to(c.s_fit_lo);
    j.at("s_fit_hi").get_to(c.s_fit_hi);
    j.at("seed").get_to(c.seed);
    j.at("threads").get_to(c.threads);
    j.at("out_dir").get_to(c.out_dir);
  }

  double eta_for(int N) const {
    return eta_value > 0.0 ? eta_value : std::pow(static_cast<double>(N), eta_exponent);
  }

  /// FNV-1a over the canonical JSON dump.
  uint64_t hash() const {
    const std::string s = ordered_json(*this).dump();
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string cmp = "<=";  // "<=" or ">="
  bool pass = false;
};

inline Check check_le(const std::string& name, double value, double threshold) {
  return {name, value, threshold, "<=", value <= threshold};
}
inline Check check_ge(const std::string& name, double value, double threshold) {
  return {name, value, threshold, ">=", value >= threshold};
}
inline Check check_within(const std::string& name, double value, double center,
                          double radius) {
  return {name, value - center, radius, "|.|<=", std::abs(value - center) <= radius};
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string id;
  ordered_json inputs;
  ordered_json summary;
  std::vector<Check> checks;
  std::vector<Table> tables;
  double wall_seconds = 0.0;
  uint64_t seed = 0;
  uint64_t config_hash = 0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["experiment"] = id;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["inputs"] = inputs;
    j["summary"] = summary;
    ordered_json checks_json = ordered_json::array();
    for (const auto& c : checks) {
      ordered_json cj;
      cj["name"] = c.name;
      cj["value"] = c.value;
      cj["threshold"] = c.threshold;
      cj["cmp"] = c.cmp;
      cj["pass"] = c.pass;
      checks_json.push_back(cj);
    }
    j["checks"] = checks_json;
    j["pass"] = passed();
    j["wall_seconds"] = wall_seconds;
    return j;
  }
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Writes <out>/<id>.json and one CSV per table (<id>.csv for the first).
inline std::vector<std::string> write_report_files(const ExperimentReport& rep,
                                                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  const std::string json_path = out_dir + "/" + rep.id + ".json";
  {
    std::ofstream os(json_path);
    if (!os) throw std::runtime_error("cannot write " + json_path);
    os << rep.to_json().dump(2) << "\n";
  }
  written.push_back(json_path);
  for (size_t t = 0; t < rep.tables.size(); ++t) {
    const auto& tab = rep.tables[t];
    const std::string path = t == 0 ? out_dir + "/" + rep.id + ".csv"
                                    : out_dir + "/" + rep.id + "_" + tab.name + ".csv";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "# experiment=" << rep.id << " config_hash=" << rep.config_hash
       << " seed=" << rep.seed << "\n";
    for (size_t c = 0; c < tab.columns.size(); ++c)
      os << (c ? "," : "") << tab.columns[c];
    os << "\n";
    for (const auto& row : tab.rows) {
      for (size_t c = 0; c < row.size(); ++c)
        os << (c ? "," : "") << format_double(row[c]);
      os << "\n";
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace rmt

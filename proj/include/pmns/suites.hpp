#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pmns/report.hpp"

namespace pmns {

struct SuiteCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  bool pass = true;
  std::vector<SuiteCheck> checks;
  json extra;

  // value must stay below (or at) limit.
  void require_below(const std::string& name, double value, double limit) {
    const bool ok = value <= limit;
    checks.push_back({name, value, limit, ok});
    pass = pass && ok;
  }
  // value must reach at least limit.
  void require_at_least(const std::string& name, double value, double limit) {
    const bool ok = value >= limit;
    checks.push_back({name, value, limit, ok});
    pass = pass && ok;
  }
  void require_flag(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 1.0 : 0.0, 1.0, ok});
    pass = pass && ok;
  }
  json to_json() const;
};

// --- basis certification -----------------------------------------------------

struct BasisSuiteConfig {
  int dim = 2;
  int resolution = 256;
  std::uint64_t seed = 1;
  int gram_atoms = 200;
  int parameter_levels = 5;  // distinct j_t values for the adapted round trips
  double gram_tol = 1e-8;
  double pou_tol = 1e-10;
  double round_trip_tol = 1e-10;
  double parseval_tol = 1e-10;
  bool inject_bad_ramp = false;  // failure-injection hook
};

SuiteReport run_basis_suite(const BasisSuiteConfig& cfg);

// --- product decomposition -----------------------------------------------------

struct DecompositionSuiteConfig {
  int dim = 2;
  int resolution = 128;
  std::uint64_t seed = 2;
  int pairs = 100;
  double tol = 1e-10;
};

SuiteReport run_decomposition_suite(const DecompositionSuiteConfig& cfg);

// --- exact support facts -------------------------------------------------------

struct SupportSuiteConfig {
  int dim = 2;
  int resolution = 64;
  std::uint64_t seed = 3;
  int configs = 50;
  double low_freq_tol = 1e-10;
  double coupling_tol = 1e-12;
};

SuiteReport run_support_suite(const SupportSuiteConfig& cfg);

// --- estimate certifications ---------------------------------------------------

struct EstimatesSuiteConfig {
  int dim = 2;
  int resolution = 128;
  std::uint64_t seed = 4;
  int ensemble = 100;
  std::vector<std::string> estimates;  // empty: all known rows
  bool resolution_stability = true;
  double decay_stability_factor = 1.25;
  double lowfreq_stability_factor = 1.2;
  double embedding_stability_factor = 2.0;
  double bilinear_stability_factor = 2.0;
  int bilinear_pairs = 50;
  int embedding_members = 20;
  std::vector<std::pair<double, double>> embedding_pm = {{4, 1}, {3, 1}, {4, 2}};
  double p = 4.0;
  double m = 1.0;
  int shell_lo = 0;
  int shell_hi = 2;
};

std::vector<std::string> estimate_table_rows();

SuiteReport run_estimates_suite(const EstimatesSuiteConfig& cfg);

// --- solver runs ---------------------------------------------------------------

struct SolveSuiteConfig {
  int dim = 2;
  int resolution = 128;
  std::uint64_t seed = 5;
  std::string preset = "single-atom";
  double scale = 1e-3;
  int atom_level = 2;
  SolverConfig solver;
  int lambda = 0;  // 0 skips the rescaling comparison
  bool mesh_doubling_check = true;
  bool smallness_check = true;
  double ratio_limit = 0.5;
  int iteration_limit = 6;
  double residual_limit = 1e-4;
  double divergence_limit = 1e-9;
  double mesh_change_limit = 0.02;
  double scaling_dev_limit = 0.01;
  double besov_dev_limit = 1e-10;
  double smallness_factor_min = 3.0;
};

struct SolveSuiteResult {
  SuiteReport report;
  SolverState state;
  NormReport solution_norms;  // first component of the final iterate
};

SolveSuiteResult run_solve_suite(const SolveSuiteConfig& cfg);

}  // namespace pmns

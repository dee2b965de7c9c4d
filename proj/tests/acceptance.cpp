// Acceptance suite: one pass/fail line per criterion, at desk scale
// (n = 2 at M = 128-256, n = 3 smoke runs at M = 32).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "pmns/suites.hpp"

using namespace pmns;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string name)
      : number_(number), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {
    std::printf("criterion %d (%s): running...\n", number_, name_.c_str());
    std::fflush(stdout);
  }

  void check(const std::string& what, bool ok) {
    all_ok_ = all_ok_ && ok;
    if (!ok) std::printf("  failed: %s\n", what.c_str());
  }

  void check_below(const std::string& what, double value, double limit) {
    const bool ok = value <= limit;
    all_ok_ = all_ok_ && ok;
    std::printf("  %-44s %.3e (limit %.3e) %s\n", what.c_str(), value, limit,
                ok ? "ok" : "FAIL");
  }

  void absorb(const SuiteReport& report) {
    for (const auto& c : report.checks) {
      all_ok_ = all_ok_ && c.pass;
      std::printf("  %-44s %.3e (limit %.3e) %s\n",
                  (report.suite + "/" + c.name).c_str(), c.value, c.limit,
                  c.pass ? "ok" : "FAIL");
    }
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  ~Criterion() {
    const double dt = seconds();
    std::printf("criterion %d (%s): %s  [%.1f s]\n\n", number_, name_.c_str(),
                all_ok_ ? "PASS" : "FAIL", dt);
    std::fflush(stdout);
    if (!all_ok_) ++g_failures;
  }

 private:
  int number_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
  bool all_ok_ = true;
};

}  // namespace

int main() {
  // 1. Basis certification at M = 256, with an n = 3 smoke run at M = 32.
  {
    Criterion c(1, "basis certification");
    BasisSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 256;
    cfg.seed = 1;
    cfg.gram_atoms = 200;
    cfg.parameter_levels = 5;
    c.absorb(run_basis_suite(cfg));

    BasisSuiteConfig smoke;
    smoke.dim = 3;
    smoke.resolution = 32;
    smoke.seed = 2;
    smoke.gram_atoms = 40;
    smoke.parameter_levels = 3;
    c.absorb(run_basis_suite(smoke));
    c.check_below("runtime-seconds", c.seconds(), 60.0);
  }

  // 2. Product decomposition identity on 100 random pairs.
  {
    Criterion c(2, "decomposition identity");
    DecompositionSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 3;
    cfg.pairs = 100;
    c.absorb(run_decomposition_suite(cfg));

    DecompositionSuiteConfig smoke;
    smoke.dim = 3;
    smoke.resolution = 32;
    smoke.seed = 4;
    smoke.pairs = 5;
    c.absorb(run_decomposition_suite(smoke));
  }

  // 3. Exact support facts on 50 random configurations each.
  {
    Criterion c(3, "exact support facts");
    SupportSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 5;
    cfg.configs = 50;
    c.absorb(run_support_suite(cfg));
  }

  // 4. Decay certifications with resolution-stable constants.
  {
    Criterion c(4, "decay certifications");
    EstimatesSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 6;
    cfg.ensemble = 100;
    cfg.estimates = known_estimate_ids();
    cfg.resolution_stability = true;
    c.absorb(run_estimates_suite(cfg));
    c.check_below("runtime-seconds", c.seconds(), 300.0);
  }

  // 5. Heat-flow embedding for (p, m) in {(4,1), (3,1), (4,2)}.
  {
    Criterion c(5, "embedding boundedness");
    EstimatesSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 7;
    cfg.estimates = {"embedding"};
    cfg.embedding_members = 20;
    cfg.embedding_pm = {{4, 1}, {3, 1}, {4, 2}};
    c.absorb(run_estimates_suite(cfg));
  }

  // 6. Bilinear operator boundedness over 50 trajectory pairs.
  {
    Criterion c(6, "bilinear boundedness");
    EstimatesSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 8;
    cfg.estimates = {"bilinear-norm"};
    cfg.bilinear_pairs = 50;
    cfg.p = 4.0;
    cfg.m = 1.0;
    c.absorb(run_estimates_suite(cfg));
  }

  // 7. Small-data well-posedness at desk scale.
  {
    Criterion c(7, "small-data well-posedness");
    SolveSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 9;
    cfg.preset = "single-atom";
    cfg.scale = 1e-3;
    cfg.atom_level = 2;
    cfg.solver.p = 4.0;
    cfg.solver.m = 1.0;
    cfg.solver.shell_lo = 0;
    cfg.solver.shell_hi = 3;
    cfg.solver.top_level = 4;
    cfg.solver.samples_per_shell = 16;
    cfg.solver.max_iterations = 8;
    cfg.lambda = 0;
    cfg.mesh_doubling_check = true;
    cfg.smallness_check = false;
    c.absorb(run_solve_suite(cfg).report);
    c.check_below("runtime-seconds", c.seconds(), 300.0);
  }

  // 8. Scaling invariance of the solve under the exact lattice relabeling.
  {
    Criterion c(8, "scaling invariance");
    SolveSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 10;
    cfg.preset = "single-atom";
    cfg.scale = 1e-3;
    cfg.atom_level = 1;
    cfg.solver.shell_lo = 0;
    cfg.solver.shell_hi = 2;
    cfg.solver.top_level = 3;
    cfg.solver.samples_per_shell = 16;
    cfg.lambda = 2;
    cfg.mesh_doubling_check = false;
    cfg.smallness_check = false;
    c.absorb(run_solve_suite(cfg).report);
  }

  // 9. Quadratic response to halving the initial norm.
  {
    Criterion c(9, "quadratic smallness response");
    SolveSuiteConfig cfg;
    cfg.dim = 2;
    cfg.resolution = 128;
    cfg.seed = 11;
    cfg.preset = "single-atom";
    cfg.scale = 1e-3;
    cfg.atom_level = 2;
    cfg.solver.shell_lo = 0;
    cfg.solver.shell_hi = 3;
    cfg.solver.top_level = 4;
    cfg.solver.samples_per_shell = 16;
    cfg.lambda = 0;
    cfg.mesh_doubling_check = false;
    cfg.smallness_check = true;
    c.absorb(run_solve_suite(cfg).report);
  }

  if (g_failures == 0) {
    std::printf("acceptance: all criteria PASS\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}

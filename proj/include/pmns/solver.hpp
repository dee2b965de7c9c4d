#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmns/meyer.hpp"
#include "pmns/norms.hpp"

namespace pmns {

struct SolverConfig {
  double p = 4.0;
  double m = 1.0;
  int shell_lo = 0;
  int shell_hi = 2;
  int samples_per_shell = 16;  // per ratio-4 shell; also the quadrature density
  int top_level = -1;          // analysis cut; -1 resolves to the product-safe max
  int max_iterations = 12;
  double increment_tol = 1e-8;       // relative to the heat trajectory's norm
  double smallness_threshold = 0.01; // warn-and-proceed above it
  bool allow_low_m = false;

  int resolve_top_level(const FrequencyLattice& lattice) const;
  void validate(const FrequencyLattice& lattice) const;
};

struct VectorTrajectory {
  std::vector<double> times;  // ascending; first entry may be 0
  std::vector<VectorField> states;

  int dim() const { return states.empty() ? 0 : states[0].dim(); }
  // Sampler over the positive mesh times of one component.
  TrajectorySampler component_sampler(int axis) const;
};

VectorTrajectory heat_vector_trajectory(const VectorField& a,
                                        const std::vector<double>& times);

// B(u,v)(t) assembled from the kernel operators so that the result equals
// int_0^t e^{(t-s)Delta} P div(uxv) ds; output is divergence-free.
VectorField full_bilinear(const VectorTrajectory& u, const VectorTrajectory& v,
                          double t);

// Same integral at every node of the shared mesh, optionally band-capped.
VectorTrajectory full_bilinear_trajectory(const VectorTrajectory& u,
                                          const VectorTrajectory& v,
                                          int band_cap = -1);

// max over components of max(H0, Hm).
double vector_trajectory_norm(const VectorTrajectory& traj,
                              const MeyerWindow& window, double p, double m,
                              int shell_lo, int shell_hi, int top_level,
                              const NormOptions& opts = {});

struct SolverState {
  SolverConfig cfg;
  int resolution = 0;
  int top_level = 0;
  std::vector<double> mesh;
  VectorTrajectory solution;
  std::vector<double> increments;
  std::vector<double> ratios;
  int iterations = 0;
  std::string status;  // converged | iteration-cap | non-contraction
  double initial_besov = 0.0;
  bool smallness_warning = false;
  double heat_norm = 0.0;       // Y-norm of the heat trajectory
  double truncation_tail = 0.0; // largest relative band-cap removal observed
  double residual = 0.0;        // integral-equation residual of the output
  double divergence = 0.0;      // worst divergence ratio along the output
};

SolverState picard_solve(const VectorField& a, const MeyerWindow& window,
                         const SolverConfig& cfg,
                         const std::vector<double>* mesh_override = nullptr);

// max over sample times of ||u(t) - e^{tDelta}a + B(u,u)(t)||_2 / max(||u||, ||a||).
double integral_residual(const VectorTrajectory& u, const VectorField& a,
                         const std::vector<double>& sample_times,
                         int band_cap = -1);

struct ScalingCheckResult {
  double solution_deviation = 0.0;  // matched-mesh relative deviation
  double besov_deviation = 0.0;     // relative initial-norm change
  bool iteration_counts_match = false;
  SolverState base;
  SolverState rescaled;
};

// Solves for a and for the exactly relabeled lambda a(lambda x) and compares
// the rescaled solutions at matched mesh times; lambda must be 2 or 4.
ScalingCheckResult scaling_check(const VectorField& a, const MeyerWindow& window,
                                 const SolverConfig& cfg, int lambda);

// Named initial-data presets for the harness: "single-atom",
// "random-ensemble", "taylor-green"; scaled to the requested Besov norm.
VectorField initial_data_preset(const std::string& name,
                                const MeyerWindow& window,
                                const FrequencyLattice& lattice,
                                double target_besov, double p, int atom_level,
                                std::uint64_t seed);

// Besov norm of the initial data (max over components, critical index).
double initial_besov_norm(const VectorField& a, const MeyerWindow& window,
                          double p, int top_level);

}  // namespace pmns

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pmns/kernels.hpp"
#include "pmns/meyer.hpp"
#include "pmns/norms.hpp"

namespace pmns {

// Trajectory u(t) = e^{t Laplacian} a on a shell-resolving mesh.  Cached
// fields at mesh times; the sampler evaluates the closed form anywhere.
struct HeatTrajectory {
  SpectralField initial;
  std::vector<double> times;
  std::vector<SpectralField> fields;

  HeatTrajectory() : initial(FrequencyLattice(2, 16)) {}
  explicit HeatTrajectory(SpectralField a) : initial(std::move(a)) {}

  TrajectorySampler sampler() const;
};

HeatTrajectory make_heat_trajectory(const SpectralField& a, int shell_lo,
                                    int shell_hi, int samples_per_shell);

// Max deviation between the directly analyzed coefficients of e^{tDelta}a over
// the time-adapted family and their reconstruction from the static
// coefficients through cached evolution inner products.
double verify_transfer(const SpectralField& a, const MeyerWindow& window,
                       double t, int top_level);

// Certifies the heat-flow coefficient bounds over a random ensemble: the
// detail-band exponential decay and the scaling-band transfer bound.
std::pair<DecayFit, DecayFit> verify_heat_decay(const MeyerWindow& window,
                                                const FrequencyLattice& lattice,
                                                std::uint64_t seed, int count);

struct EmbeddingRow {
  std::uint64_t member = 0;
  double ratio = 0.0;
  double besov = 0.0;
  double trajectory_norm = 0.0;
};

struct EmbeddingResult {
  double constant = 0.0;
  int resolution = 0;
  std::vector<EmbeddingRow> rows;
};

// Max over the ensemble of ||e^{tDelta}f||_{Y} / ||f||_{Besov} at the critical
// regularity index.
EmbeddingResult embedding_experiment(const MeyerWindow& window,
                                     const FrequencyLattice& lattice,
                                     std::uint64_t seed, int count, double p,
                                     double m, int shell_lo, int shell_hi,
                                     int top_level, int content_resolution = -1);

}  // namespace pmns

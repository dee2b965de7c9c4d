#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pmns/lattice.hpp"
#include "pmns/meyer.hpp"

namespace pmns {

enum class KernelFamily {
  first_order,  // heat-propagated first derivative
  third_order,  // heat-propagated third derivative with inverse Laplacian
};

// Physical-space samples of the unit-time kernel.  The kernel is materialized
// at an internal heat scale matched to the lattice and rescaled to unit-time
// coordinates; positions cover |y| up to ~M/(2 sqrt(5)).
struct KernelSamples {
  KernelFamily family = KernelFamily::first_order;
  std::array<int, 3> index = {0, -1, -1};
  int dim = 0;
  int grid = 0;
  double coordinate_scale = 0.0;  // y = coordinate_scale * wrapped grid point
  double heat_scale = 0.0;
  std::vector<double> values;

  std::vector<double> position(std::size_t flat) const;
  double value_at_origin() const;
};

KernelSamples kernel_samples(KernelFamily family, const std::array<int, 3>& index,
                             const FrequencyLattice& lattice);

// Multiplier of the kernel operator at elapsed time tau.
cplx kernel_symbol(KernelFamily family, const std::array<int, 3>& index,
                   const std::vector<double>& xi, double tau);

// Applies the kernel operator as an exact Fourier multiplier; the zero mode is
// annihilated for the third-order family.
SpectralField apply_kernel_operator(const SpectralField& f, double tau,
                                    KernelFamily family,
                                    const std::array<int, 3>& index);

// Coupling coefficient of a product of two detail-atom stacks against a
// propagated scaling atom:
//   < sum_{j in J} atom(eps, j, k) atom(eps2, j, k2),
//     (third-order op at t-s applied to atom(0, j_t, kp)) >
// with J = [max(j_lo, 2 + j_s), j_hi] and j_s the parameter level of s.
cplx coupling_coefficient(const MeyerWindow& window,
                          const FrequencyLattice& lattice, double t, double s,
                          int j_t, int j_lo, int j_hi, int eps,
                          const std::vector<int>& k, int eps2,
                          const std::vector<int>& k2,
                          const std::vector<int>& kp,
                          const std::array<int, 3>& index);

struct DecayFit {
  std::string estimate_id;
  double constant = 0.0;  // minimal C making the bound hold on the ensemble
  double rate = 0.0;      // fitted exponential rate c, when the shape has one
  int poly_order = 0;     // fitted N, when the shape has one
  bool has_rate = false;
  bool has_poly = false;
  std::size_t sample_count = 0;
  int resolution = 0;
  double residual_rms = 0.0;  // spread of log residuals around the bound fit
  double trend_ratio = 0.0;   // boundary-vs-global diagnostic (kernel decay)
  bool certified = false;
};

// Certification drivers.  Estimate ids:
//   kernel-decay               unit-time kernel spatial decay
//   evolved-atom-scaling       propagated scaling-atom pointwise bounds
//   evolved-atom-detail        propagated detail-atom pointwise bounds
//   coupling-decay             coupling-coefficient decay in k, k2, kp
//   heat-coefficient-detail    heat-flow detail-coefficient decay
//   heat-coefficient-scaling   heat-flow scaling-coefficient bound
// `content_resolution` pins the random configurations (field content, levels,
// targets) to a coarser reference lattice so that refits at a finer lattice
// evaluate the same quantities; -1 uses the evaluation lattice itself.
DecayFit fit_decay(const std::string& estimate_id, const MeyerWindow& window,
                   const FrequencyLattice& lattice, std::uint64_t seed,
                   int count, int content_resolution = -1);

std::vector<std::string> known_estimate_ids();

// Cheap numeric predicates backing the proof machinery.
struct PredicateCheck {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double fitted_constant = 0.0;
  double trend_ratio = 0.0;  // first-half max over global max
};

// 1 + |x| <= 2 (1 + |x-y|) (1 + a |y|) for a >= 1 (exact in machine arithmetic).
PredicateCheck check_peetre_inequality(int dim, std::uint64_t seed,
                                       std::size_t trials);

// (1+|2^{j'}x-k'|)^{-n-1} (1+|2^j x-k|)^{-N-n-1}
//   <= K (1+|2^{j'-j}k-k'|)^{-n-1} (1+|2^j x-k|)^{-N}  for j >= j', N = n+1.
PredicateCheck check_localization_product_bound(int dim, std::uint64_t seed,
                                                std::size_t trials);

}  // namespace pmns

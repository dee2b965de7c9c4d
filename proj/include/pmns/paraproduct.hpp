#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pmns/kernels.hpp"
#include "pmns/meyer.hpp"
#include "pmns/norms.hpp"

namespace pmns {

enum class ProjectionKind { scaling, detail_sum, detail_band };  // P, Q, Q^eps

SpectralField level_project(const SpectralField& f, const MeyerWindow& window,
                            int j, ProjectionKind kind, int eps = -1);

struct ParaproductTerm {
  std::string label;
  SpectralField field;
};

// The named terms of the level-split product identity at base level j_t:
// seven summed high-level pieces, three at level 1+j_t, four at level j_t.
struct ParaproductTerms {
  int base_level = 0;  // j_t
  int top_level = 0;
  std::vector<ParaproductTerm> terms;
  SpectralField product;
  double completeness_residual = 0.0;

  explicit ParaproductTerms(SpectralField reference)
      : product(std::move(reference)) {}
};

inline constexpr int kParaproductTermCount = 14;

ParaproductTerms paraproduct_decompose(const SpectralField& u,
                                       const SpectralField& v,
                                       const MeyerWindow& window, double t,
                                       int top_level);

// One named term of the identity, evaluated at parameter level j_s.
// Terms 0..6: sums over j in [2+j_s, top] of
//   P_{j-2}u Q_j v, Q_{j-2}u Q_j v, Q_{j-1}u Q_j v, Q_j u Q_j v,
//   Q_j u Q_{j-1}v, Q_j u Q_{j-2}v, Q_j u P_{j-2}v;
// terms 7..9 the three pieces at level 1+j_s, terms 10..13 the four at j_s.
SpectralField paraproduct_term_field(const SpectralField& u_s,
                                     const SpectralField& v_s,
                                     const MeyerWindow& window, int j_s,
                                     int top_level, int term);

std::string paraproduct_term_label(int term);

// --- Duhamel quadrature -----------------------------------------------------

// Geometric mesh with `samples_per_shell` nodes per ratio-4 shell, covering
// the shell range and extending toward 0 until the fastest retained mode is
// resolved; a leading 0 node is included.
std::vector<double> duhamel_mesh(int shell_lo, int shell_hi,
                                 int samples_per_shell, int band_bound);

// March of B(t) = int_0^t e^{-(t-s)|xi|^2} W(s) ds over the mesh, with the
// semigroup factor integrated exactly per mode against piecewise-linear
// interpolation of W.  times[0] must be 0; returns B at every node.
std::vector<SpectralField> duhamel_march(
    const FrequencyLattice& lattice, const std::vector<double>& times,
    const std::function<SpectralField(std::size_t)>& integrand_at_node);

struct BilinearDiagnostics {
  double step_halving_rel = 0.0;
  bool coarse_warning = false;
};

// B(u,v)(t) for one kernel family, integrating the plain product u(s) v(s).
// Quadrature nodes are the sampler times below t plus the endpoints; when
// `diag` is given the result is re-run on a coarsened mesh and the relative
// step-halving difference reported (warning beyond 1%).
SpectralField bilinear_duhamel(const TrajectorySampler& u,
                               const TrajectorySampler& v, double t,
                               KernelFamily family,
                               const std::array<int, 3>& index,
                               BilinearDiagnostics* diag = nullptr);

// Same integral at every positive node of `times` (times[0] = 0); fields are
// band-capped to `band_cap` when nonnegative.
std::vector<SpectralField> bilinear_duhamel_trajectory(
    const TrajectorySampler& u, const TrajectorySampler& v,
    const std::vector<double>& times, KernelFamily family,
    const std::array<int, 3>& index, int band_cap = -1);

// Duhamel integral of one named term of the product identity, with the level
// split taken at the parameter level of the integration variable.
SpectralField bilinear_duhamel_named_term(const TrajectorySampler& u,
                                          const TrajectorySampler& v, double t,
                                          KernelFamily family,
                                          const std::array<int, 3>& index,
                                          const MeyerWindow& window,
                                          int top_level, int term);

// The three term families of the boundedness argument.
enum class TermFamily {
  low_high,         // sum_{j >= 2+j_s} P_{j-2}u Q^eps_j v
  high_high,        // sum_{j >= 2+j_s} Q_j u Q_j v
  scaling_scaling,  // P_{j_s} u P_{j_s} v
};

SpectralField bilinear_duhamel_term(const TrajectorySampler& u,
                                    const TrajectorySampler& v, double t,
                                    KernelFamily family,
                                    const std::array<int, 3>& index,
                                    const MeyerWindow& window, int top_level,
                                    TermFamily which, int eps = -1);

// --- empirical operator norm -------------------------------------------------

struct OperatorNormRow {
  std::uint64_t member = 0;
  int family = 0;  // 0 first-order, 1 third-order
  std::array<int, 3> index = {0, -1, -1};
  double ratio = 0.0;
};

struct OperatorNormResult {
  double constant = 0.0;
  int skipped = 0;
  int resolution = 0;
  std::vector<OperatorNormRow> rows;
};

struct OperatorNormOptions {
  int input_level_cap = 2;   // detail levels of the random inputs
  int samples_per_shell = 8;
  bool scaling_only_inputs = false;   // exercise the low-low path
  int content_resolution = -1;        // draw inputs on a coarser lattice
};

OperatorNormResult verify_operator_norm(const MeyerWindow& window,
                                        const FrequencyLattice& lattice,
                                        std::uint64_t seed, int count, double p,
                                        double m, int shell_lo, int shell_hi,
                                        int top_level,
                                        const OperatorNormOptions& opts = {});

// Mesh-backed sampler over stored fields (exact time lookup).
TrajectorySampler mesh_sampler(std::vector<double> times,
                               std::vector<SpectralField> fields);

}  // namespace pmns

#pragma once

#include <functional>
#include <vector>

#include "pmns/lattice.hpp"

namespace pmns {

// Smooth window system generating the wavelet family.  The scaling symbol is
// even, equals 1 on |xi| <= 2*pi/3, vanishes beyond 4*pi/3, and the annular
// window is sqrt(psi0(xi/2)^2 - psi0(xi)^2).  The transition is driven by a
// ramp nu on [0,1] with nu(x) + nu(1-x) = 1; the default ramp is the quartic
// polynomial x^4 (35 - 84 x + 70 x^2 - 20 x^3), which satisfies the symmetry
// exactly and yields C^3 windows.
class MeyerWindow {
 public:
  using Ramp = std::function<double(double)>;

  static double quartic_ramp(double x);

  explicit MeyerWindow(Ramp ramp = quartic_ramp);

  double scaling_symbol(double xi) const;           // Psi^0
  double annulus_symbol(double xi) const;           // Omega
  cplx wavelet_symbol(double xi) const;             // Psi^1 = Omega e^{-i xi/2}
  cplx symbol(int eps_bit, double xi) const {
    return eps_bit == 0 ? cplx(scaling_symbol(xi)) : wavelet_symbol(xi);
  }

 private:
  Ramp ramp_;
};

MeyerWindow build_window(MeyerWindow::Ramp ramp = MeyerWindow::quartic_ramp);

// Largest level whose atoms fit strictly below the lattice Nyquist bound.
int admissible_level_max(const FrequencyLattice& lattice);

// Largest level whose atoms are also safe inputs to pointwise_product.
inline int product_safe_level_max(const FrequencyLattice& lattice) {
  return admissible_level_max(lattice) - 1;
}

// Fields band-limited to |m_i| <= representable_band(top) round-trip exactly
// through analyze/synthesize with top level `top`.
inline int representable_band(int top_level) { return (2 << top_level) / 3; }

// --- index helpers -------------------------------------------------------

// eps in [0, 2^dim); bit a is the per-axis window selector.
inline int eps_bit(int eps, int axis) { return (eps >> axis) & 1; }

inline std::size_t translations_per_level(int dim, int j) {
  return std::size_t{1} << static_cast<unsigned>(dim * j);
}

inline void k_decode(std::size_t flat, int dim, int j, int* k) {
  const int count = 1 << j;
  for (int a = dim - 1; a >= 0; --a) {
    k[a] = static_cast<int>(flat % count);
    flat /= count;
  }
}

inline std::size_t k_encode(const int* k, int dim, int j) {
  const int count = 1 << j;
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) {
    int v = k[a] % count;
    if (v < 0) v += count;
    flat = flat * count + static_cast<std::size_t>(v);
  }
  return flat;
}

// --- atoms ----------------------------------------------------------------

struct WaveletAtom {
  int eps = 0;
  int level = 0;
  std::vector<int> shift;
  SpectralField spectrum;

  explicit WaveletAtom(SpectralField s) : spectrum(std::move(s)) {}
};

// Periodized tensor atom at (eps, j, k), sampled on the lattice.
WaveletAtom atom_spectrum(const MeyerWindow& window, int eps, int level,
                          const std::vector<int>& shift,
                          const FrequencyLattice& lattice);

// --- coefficients ---------------------------------------------------------

struct WaveletCoefficients {
  int dim = 0;
  int base_level = 0;
  int top_level = 0;
  std::vector<cplx> scaling;                           // (0, base, k)
  std::vector<std::vector<std::vector<cplx>>> detail;  // [j-base][eps-1][k]

  int eps_count() const { return (1 << dim) - 1; }
  const std::vector<cplx>& detail_band(int j, int eps) const {
    return detail[j - base_level][eps - 1];
  }
  std::vector<cplx>& detail_band(int j, int eps) {
    return detail[j - base_level][eps - 1];
  }

  double total_energy() const;
  double detail_energy(int j) const;

  WaveletCoefficients& operator+=(const WaveletCoefficients& o);
};

// --- time-adapted index family ---------------------------------------------

struct ParameterIndexSet {
  double t = 0.0;
  int level = 0;      // scaling-band level, clamped to [0, top_level]
  int raw_level = 0;  // unclamped value from the defining inequality
  bool truncated = false;
  int top_level = 0;
};

// Smallest integer j with 2^{2j} t >= 1, clamped to the representable range.
ParameterIndexSet parameter_index(double t, int top_level);

// --- analysis / synthesis ---------------------------------------------------

// Exact coefficients of one band: <f, atom(eps, j, .)> for every translation.
std::vector<cplx> band_coefficients(const SpectralField& f,
                                    const MeyerWindow& window, int eps, int j);

// Adds sum_k coeffs[k] * atom(eps, j, k) to `out`.
void add_band_synthesis(SpectralField& out, const MeyerWindow& window, int eps,
                        int j, const std::vector<cplx>& coeffs);

// Full decomposition over the scaling band at `base_level` plus all detail
// bands up to `top_level`.  Signals leakage when f carries relative energy
// beyond `leak_tol` outside the representable band.
WaveletCoefficients analyze(const SpectralField& f, const MeyerWindow& window,
                            int base_level, int top_level,
                            double leak_tol = 1e-8);

SpectralField synthesize(const WaveletCoefficients& coeffs,
                         const MeyerWindow& window,
                         const FrequencyLattice& lattice);

// Decomposition over the time-adapted family: scaling band at j_t plus the
// finer detail bands.  `cut_offset` shifts the scaling-band level relative to
// j_t (default 0, the definition).
WaveletCoefficients analyze_parameter(const SpectralField& f,
                                      const MeyerWindow& window, double t,
                                      int top_level, int cut_offset = 0,
                                      double leak_tol = 1e-8);

}  // namespace pmns

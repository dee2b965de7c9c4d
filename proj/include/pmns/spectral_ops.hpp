#pragma once

#include <vector>

#include "pmns/lattice.hpp"

namespace pmns {

// Physical frequency of an integer lattice frequency.
inline double physical_freq(int m) { return kTwoPi * static_cast<double>(m); }

// |xi|^2 at the lattice point m.
inline double physical_freq_sq(const int* m, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double x = physical_freq(m[a]);
    s += x * x;
  }
  return s;
}

inline double heat_multiplier(double xi_sq, double t) {
  return std::exp(-t * xi_sq);
}

// e^{t Laplacian}: multiplies each coefficient by exp(-t |xi|^2).
SpectralField heat_semigroup(const SpectralField& f, double t);
VectorField heat_semigroup(const VectorField& v, double t);

// Orthogonal projection onto divergence-free fields; the zero frequency is
// passed through unchanged.
VectorField leray_project(const VectorField& v);

// Leray symbol matrix delta - m m^T/|m|^2 at an integer frequency.
std::vector<std::vector<double>> leray_symbol(const std::vector<int>& m);

inline cplx derivative_symbol(const std::vector<double>& xi,
                              const std::vector<int>& alpha) {
  cplx s(1.0);
  for (std::size_t a = 0; a < xi.size(); ++a)
    for (int r = 0; r < alpha[a]; ++r) s *= cplx(0.0, xi[a]);
  return s;
}

// Coefficientwise multiplication by (i xi)^alpha; orders above 5 are rejected.
SpectralField derivative(const SpectralField& f, const std::vector<int>& alpha);

// Exact spectral coefficients of the pointwise product, via zero-padded
// transforms.  Inputs must be band-limited to |m_i| < M/4 per axis.
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);

// Physical samples on a (pad*M)^n grid (x_i = i/(pad*M)).
std::vector<cplx> to_physical(const SpectralField& f, int pad = 1);

// Zeroes every coefficient with |m_i| > bound on some axis.  Returns the
// removed energy fraction (relative, L2).
double band_limit(SpectralField& f, int bound);
double band_limit(VectorField& f, int bound);

// Copies coefficients onto a finer lattice of the same dimension (identical
// integer frequencies; the function is unchanged).
SpectralField embed_field(const SpectralField& f, const FrequencyLattice& finer);

}  // namespace pmns

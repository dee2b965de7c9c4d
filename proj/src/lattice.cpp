#include "pmns/lattice.hpp"

#include <cmath>

namespace pmns {

std::vector<int> SpectralField::support_bound() const {
  std::vector<int> bound(lattice_.dim(), 0);
  std::vector<int> m(lattice_.dim());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == cplx(0.0)) continue;
    lattice_.decode(i, m.data());
    for (int a = 0; a < lattice_.dim(); ++a)
      bound[a] = std::max(bound[a], std::abs(m[a]));
  }
  return bound;
}

void SpectralField::check_hermitian() const {
  const double scale = max_abs();
  if (scale == 0.0) return;
  const double tol = 1e-10 * scale;
  std::vector<int> m(lattice_.dim()), neg(lattice_.dim());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    lattice_.decode(i, m.data());
    for (int a = 0; a < lattice_.dim(); ++a) {
      // -(-M/2) aliases back onto -M/2 itself.
      neg[a] = (m[a] == -lattice_.size() / 2) ? m[a] : -m[a];
    }
    const cplx v = values_[i];
    const cplx w = values_[lattice_.encode(neg.data())];
    if (std::abs(w - std::conj(v)) > tol)
      throw std::invalid_argument(
          "SpectralField: real-valued flag set but coefficients are not "
          "Hermitian-symmetric");
  }
}

double VectorField::divergence_abs() const {
  const FrequencyLattice& lat = lattice();
  std::vector<int> m(lat.dim());
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.total(); ++i) {
    lat.decode(i, m.data());
    cplx div(0.0);
    for (int a = 0; a < dim(); ++a) div += static_cast<double>(m[a]) * comps_[a][i];
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

double VectorField::divergence_ratio() const {
  const double scale = max_abs();
  return scale == 0.0 ? 0.0 : divergence_abs() / scale;
}

}  // namespace pmns

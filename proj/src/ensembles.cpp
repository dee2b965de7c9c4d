#include "pmns/ensembles.hpp"

#include "pmns/spectral_ops.hpp"

namespace pmns {

namespace {

void hermitian_symmetrize(SpectralField& f) {
  const FrequencyLattice& lat = f.lattice();
  std::vector<int> m(lat.dim()), neg(lat.dim());
  SpectralField g = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    lat.decode(i, m.data());
    bool ok = true;
    for (int a = 0; a < lat.dim(); ++a) {
      if (m[a] == -lat.size() / 2) ok = false;
      neg[a] = -m[a];
    }
    if (!ok) {
      f[i] = cplx(0.0);
      continue;
    }
    f[i] = 0.5 * (g[i] + std::conj(g[lat.encode(neg.data())]));
  }
  f.set_real_valued(true);
}

}  // namespace

SpectralField random_band_limited_field(const FrequencyLattice& lattice,
                                        Rng& rng, int top_level,
                                        bool real_valued) {
  const int bound = representable_band(top_level);
  SpectralField f(lattice);
  std::vector<int> m(lattice.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    lattice.decode(i, m.data());
    bool inside = true;
    for (int a = 0; a < lattice.dim(); ++a)
      inside = inside && std::abs(m[a]) <= bound;
    if (inside) f[i] = cplx(rng.gaussian(), rng.gaussian());
  }
  if (real_valued) hermitian_symmetrize(f);
  return f;
}

SpectralField random_detail_field(const FrequencyLattice& lattice,
                                  const MeyerWindow& window, Rng& rng,
                                  int level_lo, int level_hi,
                                  bool real_valued) {
  SpectralField seed = random_band_limited_field(lattice, rng, level_hi, false);
  SpectralField out(lattice);
  for (int j = level_lo; j <= level_hi; ++j)
    for (int eps = 1; eps < (1 << lattice.dim()); ++eps)
      add_band_synthesis(out, window, eps, j,
                         band_coefficients(seed, window, eps, j));
  if (real_valued) hermitian_symmetrize(out);
  return out;
}

VectorField random_divergence_free_field(const FrequencyLattice& lattice,
                                         Rng& rng, int top_level) {
  std::vector<SpectralField> comps;
  for (int a = 0; a < lattice.dim(); ++a)
    comps.push_back(random_band_limited_field(lattice, rng, top_level, true));
  VectorField v(std::move(comps));
  VectorField out = leray_project(v);
  // The projection of a Hermitian field stays Hermitian.
  for (int a = 0; a < out.dim(); ++a) out[a].set_real_valued(true);
  return out;
}

}  // namespace pmns

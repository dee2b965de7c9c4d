#pragma once

#include <cstdint>
#include <random>

#include "pmns/lattice.hpp"
#include "pmns/meyer.hpp"

namespace pmns {

// Deterministic Gaussian source.  Box-Muller on top of mt19937_64 keeps the
// stream identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    // in (0, 1]
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  std::uint64_t integer(std::uint64_t bound) { return gen_() % bound; }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Random complex Gaussian coefficients on every frequency inside the
// representable band of `top_level`, Hermitian-symmetrized when `real_valued`.
SpectralField random_band_limited_field(const FrequencyLattice& lattice,
                                        Rng& rng, int top_level,
                                        bool real_valued = true);

// Same, restricted to the detail bands of levels [level_lo, level_hi]
// (no scaling-band content below level_lo).
SpectralField random_detail_field(const FrequencyLattice& lattice,
                                  const MeyerWindow& window, Rng& rng,
                                  int level_lo, int level_hi,
                                  bool real_valued = true);

// Divergence-free random field: Leray projection of a random band-limited
// vector field.
VectorField random_divergence_free_field(const FrequencyLattice& lattice,
                                         Rng& rng, int top_level);

}  // namespace pmns

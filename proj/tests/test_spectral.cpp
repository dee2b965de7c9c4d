#include <cmath>

#include "doctest.h"
#include "pmns/ensembles.hpp"
#include "pmns/spectral_ops.hpp"

using namespace pmns;

namespace {

SpectralField single_mode(const FrequencyLattice& lat, const std::vector<int>& m,
                          cplx value = cplx(1.0)) {
  SpectralField f(lat);
  f.set_freq(m.data(), value);
  return f;
}

double rel_diff(const SpectralField& a, const SpectralField& b) {
  const double ref = std::max(a.l2_norm(), b.l2_norm());
  return ref > 0.0 ? (a - b).l2_norm() / ref : 0.0;
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(FrequencyLattice(4, 32), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyLattice(2, 8), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyLattice(2, 48), std::invalid_argument);
  const FrequencyLattice lat(2, 32);
  CHECK(lat.total() == 1024);
  CHECK(lat.freq_of_index(0) == 0);
  CHECK(lat.freq_of_index(16) == -16);
  CHECK(lat.freq_of_index(31) == -1);
}

TEST_CASE("hermitian flag checked on construction") {
  const FrequencyLattice lat(2, 16);
  std::vector<cplx> values(lat.total(), cplx(0.0));
  std::vector<int> m{1, 2};
  values[lat.encode(m.data())] = cplx(1.0, 1.0);
  CHECK_THROWS_AS(SpectralField(lat, values, true), std::invalid_argument);
  std::vector<int> neg{-1, -2};
  values[lat.encode(neg.data())] = cplx(1.0, -1.0);
  CHECK_NOTHROW(SpectralField(lat, values, true));
}

TEST_CASE("heat semigroup multiplier and identity") {
  const FrequencyLattice lat(2, 32);
  // Direct evaluation of the multiplier at physical |xi| = 1.
  CHECK(heat_multiplier(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));

  Rng rng(3);
  const SpectralField f = random_band_limited_field(lat, rng, 2, true);
  CHECK(rel_diff(heat_semigroup(f, 0.0), f) == 0.0);

  const SpectralField g = single_mode(lat, {1, 0});
  const SpectralField hg = heat_semigroup(g, 0.25);
  std::vector<int> m{1, 0};
  CHECK(std::abs(hg.at_freq(m.data()) -
                 cplx(std::exp(-0.25 * kTwoPi * kTwoPi))) < 1e-15);

  CHECK_THROWS_AS(heat_semigroup(f, -1.0), std::domain_error);
}

TEST_CASE("heat semigroup preserves hermitian symmetry") {
  const FrequencyLattice lat(2, 32);
  Rng rng(5);
  SpectralField f = random_band_limited_field(lat, rng, 2, true);
  SpectralField h = heat_semigroup(f, 0.37);
  CHECK_NOTHROW(h.set_real_valued(true));
}

TEST_CASE("heat semigroup law and contraction") {
  const FrequencyLattice lat(2, 32);
  Rng rng(7);
  const SpectralField f = random_band_limited_field(lat, rng, 2, true);
  for (double s : {0.01, 0.3}) {
    for (double t : {0.02, 1.1}) {
      CHECK(rel_diff(heat_semigroup(heat_semigroup(f, s), t),
                     heat_semigroup(f, s + t)) < 1e-12);
    }
  }
  CHECK(heat_semigroup(f, 0.4).l2_norm() <= f.l2_norm());
}

TEST_CASE("leray kills gradients and fixes divergence-free fields") {
  const FrequencyLattice lat(2, 32);
  Rng rng(11);
  // Gradient of a zero-mean scalar.
  SpectralField phi = random_band_limited_field(lat, rng, 2, true);
  std::vector<int> zero{0, 0};
  phi.set_freq(zero.data(), cplx(0.0));
  VectorField grad(lat);
  grad[0] = derivative(phi, {1, 0});
  grad[1] = derivative(phi, {0, 1});
  const VectorField killed = leray_project(grad);
  CHECK(killed.max_abs() < 1e-12 * grad.max_abs());

  const VectorField v = random_divergence_free_field(lat, rng, 2);
  CHECK(v.divergence_ratio() <= 1e-10);
  const VectorField fixed = leray_project(v);
  double dev = 0.0;
  for (int a = 0; a < 2; ++a) dev = std::max(dev, rel_diff(fixed[a], v[a]));
  CHECK(dev < 1e-12);
}

TEST_CASE("leray symbol at m = (1,1)") {
  const auto p = leray_symbol({1, 1});
  CHECK(p[0][0] == doctest::Approx(0.5));
  CHECK(p[0][1] == doctest::Approx(-0.5));
  CHECK(p[1][0] == doctest::Approx(-0.5));
  CHECK(p[1][1] == doctest::Approx(0.5));
}

TEST_CASE("leray idempotent and passes the zero mode through") {
  const FrequencyLattice lat(2, 32);
  Rng rng(13);
  VectorField v(lat);
  v[0] = random_band_limited_field(lat, rng, 2, true);
  v[1] = random_band_limited_field(lat, rng, 2, true);
  std::vector<int> zero{0, 0};
  v[0].set_freq(zero.data(), cplx(0.7));
  const VectorField once = leray_project(v);
  const VectorField twice = leray_project(once);
  double dev = 0.0;
  for (int a = 0; a < 2; ++a) dev = std::max(dev, rel_diff(twice[a], once[a]));
  CHECK(dev < 1e-12);
  CHECK(once[0].at_freq(zero.data()) == cplx(0.7));
}

TEST_CASE("derivative symbol, commutation, order cap") {
  CHECK(derivative_symbol({1.0, 0.0}, {1, 0}) == cplx(0.0, 1.0));

  const FrequencyLattice lat(2, 32);
  const SpectralField g = single_mode(lat, {1, 0});
  std::vector<int> m{1, 0};
  CHECK(std::abs(derivative(g, {1, 0}).at_freq(m.data()) - cplx(0.0, kTwoPi)) <
        1e-15);

  Rng rng(17);
  const SpectralField f = random_band_limited_field(lat, rng, 2, true);
  CHECK(rel_diff(derivative(f, {0, 0}), f) == 0.0);
  const SpectralField d12 = derivative(derivative(f, {1, 0}), {0, 1});
  const SpectralField d21 = derivative(derivative(f, {0, 1}), {1, 0});
  CHECK((d12 - d21).max_abs() == 0.0);
  CHECK_THROWS_AS(derivative(f, {3, 3}), std::invalid_argument);

  // Derivative commutes with the heat flow (both are multipliers).
  CHECK(rel_diff(derivative(heat_semigroup(f, 0.2), {1, 1}),
                 heat_semigroup(derivative(f, {1, 1}), 0.2)) < 1e-12);
}

TEST_CASE("pointwise product: zero, single modes, conjugate content") {
  const FrequencyLattice lat(2, 32);
  const SpectralField zero(lat);
  const SpectralField g = single_mode(lat, {2, 1});
  CHECK(pointwise_product(g, zero).l2_norm() == 0.0);

  const SpectralField p = pointwise_product(g, g);
  std::vector<int> twice{4, 2};
  CHECK(std::abs(p.at_freq(twice.data()) - cplx(1.0)) < 1e-13);
  CHECK(std::abs(p.l2_norm() - 1.0) < 1e-13);
}

TEST_CASE("pointwise product matches a double-resolution recomputation") {
  const FrequencyLattice lat(2, 32);
  const FrequencyLattice fine(2, 64);
  Rng rng(19);
  const SpectralField f = random_band_limited_field(lat, rng, 2, true);
  const SpectralField g = random_band_limited_field(lat, rng, 2, true);
  const SpectralField p = pointwise_product(f, g);
  const SpectralField pf =
      pointwise_product(embed_field(f, fine), embed_field(g, fine));
  // Compare on the coarse lattice (the product is supported there).
  double dev = 0.0;
  std::vector<int> m(2);
  for (std::size_t i = 0; i < p.size(); ++i) {
    lat.decode(i, m.data());
    dev = std::max(dev, std::abs(p[i] - pf.at_freq(m.data())));
  }
  CHECK(dev < 1e-12 * std::max(1.0, p.max_abs()));
}

TEST_CASE("pointwise product rejects aliasing inputs") {
  const FrequencyLattice lat(2, 32);
  const SpectralField bad = single_mode(lat, {9, 0});  // 9 >= 32/4
  CHECK_THROWS_AS(pointwise_product(bad, bad), std::domain_error);
}

TEST_CASE("band limit reports the removed fraction") {
  const FrequencyLattice lat(2, 32);
  SpectralField f = single_mode(lat, {5, 0});
  std::vector<int> keep{1, 0};
  f.set_freq(keep.data(), cplx(1.0));
  const double removed = band_limit(f, 2);
  CHECK(removed == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(f.at_freq(keep.data()) == cplx(1.0));
}

TEST_SUITE_END();

#include <cmath>

#include "doctest.h"
#include "pmns/ensembles.hpp"
#include "pmns/paraproduct.hpp"
#include "pmns/solver.hpp"
#include "pmns/spectral_ops.hpp"

using namespace pmns;

namespace {

SolverConfig small_config() {
  SolverConfig cfg;
  cfg.p = 4.0;
  cfg.m = 1.0;
  cfg.shell_lo = 0;
  cfg.shell_hi = 2;
  cfg.samples_per_shell = 8;
  cfg.top_level = 2;
  cfg.max_iterations = 8;
  return cfg;
}

double traj_distance(const VectorTrajectory& a, const VectorTrajectory& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const VectorField d = a.states[i] - b.states[i];
    worst = std::max(worst, d.l2_norm());
  }
  return worst;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("config validation") {
  const FrequencyLattice lat(2, 64);
  SolverConfig cfg = small_config();
  cfg.p = 1.5;
  CHECK_THROWS_AS(cfg.validate(lat), std::invalid_argument);
  cfg = small_config();
  cfg.m = 0.5;
  CHECK_THROWS_AS(cfg.validate(lat), std::invalid_argument);
  cfg.allow_low_m = true;
  CHECK_NOTHROW(cfg.validate(lat));
  cfg = small_config();
  cfg.max_iterations = 2;
  CHECK_THROWS_AS(cfg.validate(lat), std::invalid_argument);
  cfg = small_config();
  cfg.top_level = 5;
  CHECK_THROWS_AS(cfg.validate(lat), std::invalid_argument);
}

TEST_CASE("full bilinear: zero input, divergence-free output, two-path check") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  const std::vector<double> mesh = duhamel_mesh(0, 1, 8, 2);

  const VectorTrajectory zero =
      heat_vector_trajectory(VectorField(lat), mesh);
  CHECK(full_bilinear(zero, zero, mesh.back()).l2_norm() == 0.0);

  Rng rng(111);
  VectorField a(lat);
  {
    std::vector<SpectralField> comps;
    for (int q = 0; q < 2; ++q)
      comps.push_back(random_detail_field(lat, w, rng, 0, 1));
    a = leray_project(VectorField(std::move(comps)));
    a *= 1.0 / a.l2_norm();
  }
  const VectorTrajectory u = heat_vector_trajectory(a, mesh);
  const VectorField b = full_bilinear(u, u, mesh.back());
  CHECK(b.divergence_ratio() <= 1e-9);

  // Two-path check: the same Duhamel integral with the integrand computed as
  // leray_project of the tensor divergence, marched by the same quadrature.
  std::vector<VectorField> integrand;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    VectorField dv(lat);
    for (int q = 0; q < 2; ++q) {
      SpectralField acc(lat);
      acc += derivative(pointwise_product(u.states[i][0], u.states[i][q]), {1, 0});
      acc += derivative(pointwise_product(u.states[i][1], u.states[i][q]), {0, 1});
      dv[q] = std::move(acc);
    }
    integrand.push_back(leray_project(dv));
  }
  for (int q = 0; q < 2; ++q) {
    auto node = [&](std::size_t i) { return integrand[i][q]; };
    const SpectralField direct = duhamel_march(lat, mesh, node).back();
    const double ref = std::max(direct.l2_norm(), b[q].l2_norm());
    CHECK((direct - b[q]).l2_norm() <= 1e-12 * std::max(ref, 1e-30));
  }

  // Mesh mismatch is rejected.
  VectorTrajectory other = u;
  other.times[1] *= 1.0000001;
  CHECK_THROWS_AS(full_bilinear_trajectory(u, other), std::invalid_argument);
}

TEST_CASE("picard: zero data converges immediately") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  const SolverState st = picard_solve(VectorField(lat), w, small_config());
  CHECK(st.status == "converged");
  CHECK(st.iterations == 0);
  for (const auto& f : st.solution.states) CHECK(f.l2_norm() == 0.0);
  CHECK(st.residual == 0.0);
}

TEST_CASE("picard: tiny atom data contracts fast") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  const VectorField a =
      initial_data_preset("single-atom", w, lat, 1e-3, 4.0, 1, 1);
  CHECK(a.divergence_ratio() <= 1e-10);

  const SolverState st = picard_solve(a, w, small_config());
  CHECK(st.status == "converged");
  CHECK(st.iterations <= 6);
  for (double r : st.ratios) CHECK(r < 0.5);
  CHECK(st.residual < 1e-4);
  CHECK(st.divergence <= 1e-9);
  CHECK(st.initial_besov == doctest::Approx(1e-3).epsilon(1e-8));
  CHECK_FALSE(st.smallness_warning);

  // Residual direction check: a perturbed initial datum no longer satisfies
  // the integral equation.
  VectorField perturbed = a;
  perturbed *= 1.5;
  std::vector<double> sample_times;
  for (double t : st.mesh)
    if (t > 0.0) sample_times.push_back(t);
  const double bad = integral_residual(st.solution, perturbed, sample_times,
                                       representable_band(st.top_level));
  CHECK(bad > 10.0 * st.residual);

  // Heat trajectory alone satisfies only the linear part.
  const VectorTrajectory heat = heat_vector_trajectory(a, st.mesh);
  double linear_dev = 0.0;
  for (std::size_t i = 0; i < heat.states.size(); ++i)
    linear_dev = std::max(
        linear_dev,
        (heat.states[i] - heat_vector_trajectory(a, {st.mesh[i]}).states[0])
            .l2_norm());
  CHECK(linear_dev == 0.0);
}

TEST_CASE("picard: uniqueness evidence from a different initial guess") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  const VectorField a =
      initial_data_preset("single-atom", w, lat, 1e-3, 4.0, 1, 1);
  const SolverConfig cfg = small_config();
  const SolverState st = picard_solve(a, w, cfg);

  // Iterate the same fixed-point map starting from the zero trajectory.
  const int cap = representable_band(st.top_level);
  VectorField a0 = a;
  band_limit(a0, cap);
  const VectorTrajectory u0 = heat_vector_trajectory(a0, st.mesh);
  VectorTrajectory current;
  current.times = st.mesh;
  for (std::size_t i = 0; i < st.mesh.size(); ++i)
    current.states.push_back(VectorField(lat));
  for (int k = 0; k < st.iterations + 1; ++k) {
    const VectorTrajectory b = full_bilinear_trajectory(current, current, cap);
    VectorTrajectory next = u0;
    for (std::size_t i = 0; i < next.states.size(); ++i)
      next.states[i] -= b.states[i];
    current = std::move(next);
  }
  CHECK(traj_distance(current, st.solution) < 1e-6 * a.l2_norm());
}

TEST_CASE("quadratic smallness response") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  const SolverConfig cfg = small_config();
  const VectorField a =
      initial_data_preset("single-atom", w, lat, 1e-3, 4.0, 1, 1);
  VectorField half = a;
  half *= 0.5;
  const SolverState s1 = picard_solve(a, w, cfg);
  const SolverState s2 = picard_solve(half, w, cfg);
  REQUIRE(!s1.increments.empty());
  REQUIRE(!s2.increments.empty());
  CHECK(s1.increments[0] / s2.increments[0] >= 3.0);
  // The response is exactly quadratic on a fixed mesh.
  CHECK(s1.increments[0] / s2.increments[0] ==
        doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("solver norm is stable under mesh doubling") {
  const FrequencyLattice lat(2, 32);
  const MeyerWindow w = build_window();
  SolverConfig cfg = small_config();
  const VectorField a =
      initial_data_preset("single-atom", w, lat, 1e-3, 4.0, 1, 1);
  const SolverState coarse = picard_solve(a, w, cfg);
  SolverConfig dense = cfg;
  dense.samples_per_shell *= 2;
  const SolverState fine = picard_solve(a, w, dense);
  NormOptions nopts;
  const double h1 = vector_trajectory_norm(coarse.solution, w, 4.0, 1.0, 0, 2,
                                           coarse.top_level, nopts);
  const double h2 = vector_trajectory_norm(fine.solution, w, 4.0, 1.0, 0, 2,
                                           fine.top_level, nopts);
  CHECK(std::abs(h2 - h1) / h1 < 0.02);
}

TEST_CASE("rescaling invariance") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  SolverConfig cfg = small_config();

  const ScalingCheckResult zero =
      scaling_check(VectorField(lat), w, cfg, 2);
  CHECK(zero.solution_deviation == 0.0);

  const VectorField a =
      initial_data_preset("single-atom", w, lat, 1e-3, 4.0, 1, 1);
  const ScalingCheckResult sc = scaling_check(a, w, cfg, 2);
  CHECK(sc.solution_deviation <= 0.01);
  CHECK(sc.besov_deviation <= 1e-10);
  CHECK(sc.iteration_counts_match);

  CHECK_THROWS_AS(scaling_check(a, w, cfg, 3), std::invalid_argument);
}

TEST_CASE("non-contraction is reported, not thrown") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  SolverConfig cfg = small_config();
  cfg.max_iterations = 6;
  const VectorField a =
      initial_data_preset("single-atom", w, lat, 1e4, 4.0, 1, 1);
  const SolverState st = picard_solve(a, w, cfg);
  CHECK(st.smallness_warning);
  CHECK(st.status != "converged");
}

TEST_CASE("taylor-green nonlinearity is annihilated by the projector") {
  // The vortex's advection term is a pure gradient, so the bilinear term
  // vanishes and the heat flow itself solves the integral equation.
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  SolverConfig cfg = small_config();
  const VectorField a =
      initial_data_preset("taylor-green", w, lat, 1.0, 4.0, 1, 1);
  const SolverState st = picard_solve(a, w, cfg);
  CHECK(st.status == "converged");
  CHECK(st.iterations == 1);
  REQUIRE(!st.increments.empty());
  CHECK(st.increments[0] <= 1e-14 * st.heat_norm);
}

TEST_CASE("presets are divergence-free and hit the requested norm") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  for (const char* name : {"single-atom", "random-ensemble", "taylor-green"}) {
    const VectorField a = initial_data_preset(name, w, lat, 2e-3, 4.0, 1, 5);
    CHECK(a.divergence_ratio() <= 1e-10);
    CHECK(initial_besov_norm(a, w, 4.0, product_safe_level_max(lat)) ==
          doctest::Approx(2e-3).epsilon(1e-10));
  }
  CHECK_THROWS_AS(initial_data_preset("bogus", w, lat, 1e-3, 4.0, 1, 5),
                  std::invalid_argument);
}

TEST_CASE("three-dimensional smoke run") {
  const FrequencyLattice lat(3, 16);
  const MeyerWindow w = build_window();
  SolverConfig cfg;
  cfg.p = 4.0;
  cfg.m = 1.0;
  cfg.shell_lo = 0;
  cfg.shell_hi = 1;
  cfg.samples_per_shell = 4;
  cfg.top_level = 1;
  cfg.max_iterations = 6;
  const VectorField a =
      initial_data_preset("single-atom", w, lat, 1e-3, 4.0, 0, 1);
  CHECK(a.divergence_ratio() <= 1e-10);
  const SolverState st = picard_solve(a, w, cfg);
  CHECK(st.status == "converged");
  CHECK(st.residual < 1e-4);
  CHECK(st.divergence <= 1e-9);
}

TEST_SUITE_END();

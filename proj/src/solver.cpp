#include "pmns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmns/ensembles.hpp"
#include "pmns/paraproduct.hpp"
#include "pmns/spectral_ops.hpp"

namespace pmns {

int SolverConfig::resolve_top_level(const FrequencyLattice& lattice) const {
  return top_level < 0 ? product_safe_level_max(lattice) : top_level;
}

void SolverConfig::validate(const FrequencyLattice& lattice) const {
  if (!(p > lattice.dim()))
    throw std::invalid_argument("SolverConfig: requires p > n");
  if (!(m > 0.0)) throw std::invalid_argument("SolverConfig: requires m > 0");
  if (m < 1.0 && !allow_low_m)
    throw std::invalid_argument(
        "SolverConfig: m < 1 is outside the well-posedness hypothesis; set "
        "allow_low_m to explore anyway");
  if (max_iterations < 3)
    throw std::invalid_argument("SolverConfig: iteration cap must be >= 3");
  if (shell_lo < 0 || shell_hi < shell_lo)
    throw std::invalid_argument("SolverConfig: bad shell range");
  const int top = resolve_top_level(lattice);
  if (top > product_safe_level_max(lattice))
    throw std::invalid_argument(
        "SolverConfig: top level not product-safe on this lattice");
  if (shell_hi > top)
    throw std::invalid_argument("SolverConfig: shell range exceeds the top level");
}

TrajectorySampler VectorTrajectory::component_sampler(int axis) const {
  std::vector<double> positive;
  std::vector<SpectralField> fields;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0.0) continue;
    positive.push_back(times[i]);
    fields.push_back(states[i][axis]);
  }
  return mesh_sampler(std::move(positive), std::move(fields));
}

VectorTrajectory heat_vector_trajectory(const VectorField& a,
                                        const std::vector<double>& times) {
  VectorTrajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  for (double t : times) traj.states.push_back(heat_semigroup(a, t));
  return traj;
}

namespace {

// Spectrum of e^{0Delta} P div(uxv) at one mesh state: the common heat factor is
// applied by the march, so this is the plain symbol part.
VectorField projected_advection(const VectorField& u, const VectorField& v) {
  const FrequencyLattice& lat = u.lattice();
  const int n = lat.dim();

  std::vector<std::vector<SpectralField>> prod;
  prod.reserve(n);
  for (int a = 0; a < n; ++a) {
    std::vector<SpectralField> row;
    row.reserve(n);
    for (int b = 0; b < n; ++b) row.push_back(pointwise_product(u[a], v[b]));
    prod.push_back(std::move(row));
  }

  VectorField out(lat);
  std::vector<int> m(n);
  for (std::size_t i = 0; i < lat.total(); ++i) {
    lat.decode(i, m.data());
    double xi[3] = {0.0, 0.0, 0.0};
    double xi_sq = 0.0;
    for (int a = 0; a < n; ++a) {
      xi[a] = physical_freq(m[a]);
      xi_sq += xi[a] * xi[a];
    }
    cplx trace(0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) trace += xi[a] * xi[b] * prod[a][b][i];
    for (int q = 0; q < n; ++q) {
      cplx grad(0.0);
      for (int a = 0; a < n; ++a) grad += cplx(0.0, xi[a]) * prod[a][q][i];
      cplx value = grad;
      if (xi_sq > 0.0) value -= cplx(0.0, xi[q]) * trace / xi_sq;
      out[q][i] = value;
    }
  }
  return out;
}

void check_shared_mesh(const VectorTrajectory& u, const VectorTrajectory& v) {
  if (u.times != v.times)
    throw std::invalid_argument("full_bilinear: trajectories on different meshes");
  if (u.times.empty() || u.times[0] != 0.0)
    throw std::invalid_argument("full_bilinear: mesh must start at 0");
}

}  // namespace

VectorTrajectory full_bilinear_trajectory(const VectorTrajectory& u,
                                          const VectorTrajectory& v,
                                          int band_cap) {
  check_shared_mesh(u, v);
  const FrequencyLattice& lat = u.states[0].lattice();
  const int n = lat.dim();

  VectorTrajectory out;
  out.times = u.times;
  out.states.reserve(u.times.size());

  // March all components together so each node's products are formed once.
  std::vector<double> lambda(lat.total());
  std::vector<int> m(n);
  for (std::size_t i = 0; i < lat.total(); ++i) {
    lat.decode(i, m.data());
    lambda[i] = physical_freq_sq(m.data(), n);
  }

  VectorField state(lat);
  VectorField w_prev = projected_advection(u.states[0], v.states[0]);
  out.states.push_back(VectorField(lat));
  for (std::size_t node = 1; node < u.times.size(); ++node) {
    const double h = u.times[node] - u.times[node - 1];
    VectorField w_next = projected_advection(u.states[node], v.states[node]);
    for (std::size_t i = 0; i < lat.total(); ++i) {
      const double z = lambda[i] * h;
      double g0, g1;
      if (z < 1e-2) {
        g0 = 1.0 - z * (0.5 - z * (1.0 / 6.0 - z / 24.0));
        g1 = 0.5 - z * (1.0 / 6.0 - z * (1.0 / 24.0 - z / 120.0));
      } else {
        g0 = -std::expm1(-z) / z;
        g1 = (1.0 - g0) / z;
      }
      const double decay = std::exp(-z);
      for (int q = 0; q < n; ++q)
        state[q][i] = decay * state[q][i] +
                      h * (w_prev[q][i] * (g0 - g1) + w_next[q][i] * g1);
    }
    w_prev = std::move(w_next);
    VectorField capped = state;
    if (band_cap >= 0) band_limit(capped, band_cap);
    out.states.push_back(std::move(capped));
  }
  return out;
}

VectorField full_bilinear(const VectorTrajectory& u, const VectorTrajectory& v,
                          double t) {
  check_shared_mesh(u, v);
  const auto it = std::find(u.times.begin(), u.times.end(), t);
  if (it == u.times.end())
    throw std::invalid_argument("full_bilinear: t not on the trajectory mesh");
  // Truncated copy up to t.
  VectorTrajectory tu, tv;
  const std::size_t last = static_cast<std::size_t>(it - u.times.begin());
  tu.times.assign(u.times.begin(), u.times.begin() + last + 1);
  tu.states.assign(u.states.begin(), u.states.begin() + last + 1);
  tv.times = tu.times;
  tv.states.assign(v.states.begin(), v.states.begin() + last + 1);
  return full_bilinear_trajectory(tu, tv).states.back();
}

double vector_trajectory_norm(const VectorTrajectory& traj,
                              const MeyerWindow& window, double p, double m,
                              int shell_lo, int shell_hi, int top_level,
                              const NormOptions& opts) {
  double worst = 0.0;
  for (int axis = 0; axis < traj.dim(); ++axis) {
    const NormReport report =
        ypm_norm(traj.component_sampler(axis), window, p, m, shell_lo, shell_hi,
                 top_level, opts);
    worst = std::max(worst, std::max(report.h0, report.hm));
  }
  return worst;
}

namespace {

std::vector<double> build_solver_mesh(const SolverConfig& cfg, int band_bound) {
  return duhamel_mesh(cfg.shell_lo, cfg.shell_hi, cfg.samples_per_shell,
                      band_bound);
}

VectorTrajectory subtract(const VectorTrajectory& a, const VectorTrajectory& b) {
  VectorTrajectory out;
  out.times = a.times;
  out.states.reserve(a.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i)
    out.states.push_back(a.states[i] - b.states[i]);
  return out;
}

}  // namespace

double initial_besov_norm(const VectorField& a, const MeyerWindow& window,
                          double p, int top_level) {
  const double s = static_cast<double>(a.lattice().dim()) / p - 1.0;
  double worst = 0.0;
  for (int axis = 0; axis < a.dim(); ++axis)
    worst = std::max(
        worst, besov_norm(analyze(a[axis], window, 0, top_level), s, p, p));
  return worst;
}

SolverState picard_solve(const VectorField& a, const MeyerWindow& window,
                         const SolverConfig& cfg,
                         const std::vector<double>* mesh_override) {
  const FrequencyLattice& lat = a.lattice();
  cfg.validate(lat);
  if (a.divergence_ratio() > 1e-8)
    throw std::invalid_argument("picard_solve: initial data not divergence-free");

  SolverState st;
  st.cfg = cfg;
  st.resolution = lat.size();
  st.top_level = cfg.resolve_top_level(lat);
  const int cap = representable_band(st.top_level);

  VectorField a0 = a;
  st.truncation_tail = band_limit(a0, cap);

  st.initial_besov = initial_besov_norm(a0, window, cfg.p, st.top_level);
  st.smallness_warning = st.initial_besov > cfg.smallness_threshold;

  st.mesh = mesh_override ? *mesh_override : build_solver_mesh(cfg, cap);
  NormOptions nopts;
  nopts.allow_low_p = false;
  nopts.min_samples_per_shell = std::min(4, cfg.samples_per_shell);

  const VectorTrajectory u0 = heat_vector_trajectory(a0, st.mesh);
  if (a0.l2_norm() == 0.0) {
    st.solution = u0;
    st.status = "converged";
    st.iterations = 0;
    return st;
  }
  st.heat_norm = vector_trajectory_norm(u0, window, cfg.p, cfg.m, cfg.shell_lo,
                                        cfg.shell_hi, st.top_level, nopts);

  VectorTrajectory current = u0;
  const double tol = cfg.increment_tol * std::max(st.heat_norm, 1e-300);
  int consecutive_expanding = 0;
  st.status = "iteration-cap";
  for (int k = 0; k < cfg.max_iterations; ++k) {
    VectorTrajectory b = full_bilinear_trajectory(current, current, cap);
    VectorTrajectory next = u0;
    for (std::size_t i = 0; i < next.states.size(); ++i)
      next.states[i] -= b.states[i];

    const double inc = vector_trajectory_norm(
        subtract(next, current), window, cfg.p, cfg.m, cfg.shell_lo,
        cfg.shell_hi, st.top_level, nopts);
    st.increments.push_back(inc);
    if (st.increments.size() > 1) {
      const double prev = st.increments[st.increments.size() - 2];
      st.ratios.push_back(prev > 0.0 ? inc / prev : 0.0);
    }
    current = std::move(next);
    st.iterations = k + 1;

    if (!st.ratios.empty() && st.ratios.back() >= 1.0) {
      ++consecutive_expanding;
      if (consecutive_expanding >= 2) {
        st.status = "non-contraction";
        break;
      }
    } else {
      consecutive_expanding = 0;
    }
    if (inc <= tol) {
      bool contracting = true;
      for (double r : st.ratios) contracting = contracting && r < 1.0;
      st.status = contracting ? "converged" : "non-contraction";
      break;
    }
  }

  st.solution = std::move(current);
  // States far past the data's decay time are pure roundoff; measure the
  // divergence against the trajectory's amplitude.
  double traj_scale = 0.0;
  for (const VectorField& f : st.solution.states)
    traj_scale = std::max(traj_scale, f.max_abs());
  if (traj_scale > 0.0)
    for (const VectorField& f : st.solution.states)
      st.divergence = std::max(st.divergence, f.divergence_abs() / traj_scale);

  // Residual over the shell samples of the mesh.
  std::vector<double> residual_times;
  for (int shell = cfg.shell_lo; shell <= cfg.shell_hi; ++shell)
    for (double t : st.solution.times)
      if (std::ldexp(t, 2 * shell) >= 1.0 && std::ldexp(t, 2 * shell) < 4.0)
        residual_times.push_back(t);
  st.residual = integral_residual(st.solution, a0, residual_times, cap);
  return st;
}

double integral_residual(const VectorTrajectory& u, const VectorField& a,
                         const std::vector<double>& sample_times,
                         int band_cap) {
  const VectorTrajectory b = full_bilinear_trajectory(u, u, band_cap);
  const double norm_a = a.l2_norm();
  double worst = 0.0;
  for (double t : sample_times) {
    const auto it = std::find(u.times.begin(), u.times.end(), t);
    if (it == u.times.end())
      throw std::invalid_argument("integral_residual: time not on the mesh");
    const std::size_t i = static_cast<std::size_t>(it - u.times.begin());
    const VectorField drift =
        u.states[i] - heat_semigroup(a, t) + b.states[i];
    const double scale = std::max(u.states[i].l2_norm(), norm_a);
    if (scale > 0.0) worst = std::max(worst, drift.l2_norm() / scale);
  }
  return worst;
}

namespace {

// Relabel m -> lambda m with amplitude lambda (exact on the lattice).
SpectralField rescale_field(const SpectralField& f, int lambda) {
  const FrequencyLattice& lat = f.lattice();
  SpectralField out(lat);
  std::vector<int> m(lat.dim()), big(lat.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == cplx(0.0)) continue;
    lat.decode(i, m.data());
    for (int a = 0; a < lat.dim(); ++a) {
      big[a] = lambda * m[a];
      if (std::abs(big[a]) > lat.nyquist() - 1)
        throw std::invalid_argument(
            "scaling_check: rescaled data does not fit on the lattice");
    }
    out[lat.encode(big.data())] = static_cast<double>(lambda) * f[i];
  }
  return out;
}

VectorField rescale_field(const VectorField& v, int lambda) {
  std::vector<SpectralField> comps;
  for (int a = 0; a < v.dim(); ++a) comps.push_back(rescale_field(v[a], lambda));
  return VectorField(std::move(comps));
}

}  // namespace

ScalingCheckResult scaling_check(const VectorField& a, const MeyerWindow& window,
                                 const SolverConfig& cfg, int lambda) {
  if (lambda != 2 && lambda != 4)
    throw std::invalid_argument("scaling_check: lambda must be 2 or 4");
  const int lg = lambda == 2 ? 1 : 2;
  const FrequencyLattice& lat = a.lattice();
  const int top_a = cfg.resolve_top_level(lat);
  if (top_a + lg > product_safe_level_max(lat))
    throw std::invalid_argument(
        "scaling_check: rescaled run exceeds the product-safe level range");

  ScalingCheckResult result;
  result.base = picard_solve(a, window, cfg);

  SolverConfig cfg_b = cfg;
  cfg_b.shell_lo = cfg.shell_lo + lg;
  cfg_b.shell_hi = cfg.shell_hi + lg;
  cfg_b.top_level = top_a + lg;

  const double scale = 1.0 / (static_cast<double>(lambda) * lambda);
  std::vector<double> mesh_b;
  mesh_b.reserve(result.base.mesh.size());
  for (double t : result.base.mesh) mesh_b.push_back(t * scale);

  const VectorField a_b = rescale_field(a, lambda);
  result.rescaled = picard_solve(a_b, window, cfg_b, &mesh_b);
  result.iteration_counts_match =
      result.base.iterations == result.rescaled.iterations;

  double scale_ref = 0.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < result.base.solution.states.size(); ++i) {
    const VectorField expected =
        rescale_field(result.base.solution.states[i], lambda);
    const VectorField diff = expected - result.rescaled.solution.states[i];
    dev = std::max(dev, diff.l2_norm());
    scale_ref = std::max(scale_ref, expected.l2_norm());
  }
  result.solution_deviation = scale_ref > 0.0 ? dev / scale_ref : 0.0;

  // The relabeled field is lambda^n-fold periodic, so every distinct
  // coefficient appears lambda^n times among the translates; compare the
  // per-period coefficient sets by removing that multiplicity.
  const double besov_a = initial_besov_norm(a, window, cfg.p, top_a);
  const double replication =
      std::pow(static_cast<double>(lambda), lat.dim() / cfg.p);
  const double besov_b =
      initial_besov_norm(a_b, window, cfg.p, cfg_b.top_level) / replication;
  result.besov_deviation =
      besov_a > 0.0 ? std::abs(besov_b - besov_a) / besov_a : 0.0;
  return result;
}

VectorField initial_data_preset(const std::string& name,
                                const MeyerWindow& window,
                                const FrequencyLattice& lattice,
                                double target_besov, double p, int atom_level,
                                std::uint64_t seed) {
  const int n = lattice.dim();
  const int top = product_safe_level_max(lattice);
  VectorField v(lattice);
  if (name == "single-atom") {
    const WaveletAtom atom =
        atom_spectrum(window, 1, atom_level, std::vector<int>(n, 0), lattice);
    std::vector<SpectralField> comps;
    comps.push_back(atom.spectrum);
    for (int a = 1; a < n; ++a) comps.push_back(SpectralField(lattice));
    v = leray_project(VectorField(std::move(comps)));
  } else if (name == "random-ensemble") {
    Rng rng(seed);
    std::vector<SpectralField> comps;
    for (int a = 0; a < n; ++a)
      comps.push_back(
          random_detail_field(lattice, window, rng, 0, atom_level, true));
    v = leray_project(VectorField(std::move(comps)));
  } else if (name == "taylor-green") {
    // Lowest-frequency divergence-free vortex.
    std::vector<int> m(n, 0);
    auto set4 = [&](SpectralField& f, int sx, int sy, cplx val) {
      m[0] = sx;
      m[1] = sy;
      for (int a = 2; a < n; ++a) m[a] = 0;
      f.set_freq(m.data(), val);
    };
    // u1 = cos(2 pi x) sin(2 pi y), u2 = -sin(2 pi x) cos(2 pi y)
    const cplx qi(0.0, 0.25);
    set4(v[0], 1, 1, -qi);
    set4(v[0], 1, -1, qi);
    set4(v[0], -1, 1, -qi);
    set4(v[0], -1, -1, qi);
    set4(v[1], 1, 1, qi);
    set4(v[1], -1, 1, -qi);
    set4(v[1], 1, -1, qi);
    set4(v[1], -1, -1, -qi);
  } else {
    throw std::invalid_argument("initial_data_preset: unknown preset '" + name +
                                "'");
  }

  const double besov = initial_besov_norm(v, window, p, top);
  if (besov > 0.0 && target_besov > 0.0) v *= target_besov / besov;
  return v;
}

}  // namespace pmns

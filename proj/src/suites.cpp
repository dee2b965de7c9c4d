#include "pmns/suites.hpp"

#include <algorithm>
#include <cmath>

#include "pmns/ensembles.hpp"
#include "pmns/spectral_ops.hpp"

namespace pmns {

json SuiteReport::to_json() const {
  json rows = json::array();
  for (const auto& c : checks)
    rows.push_back(
        {{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
  json j{{"suite", suite}, {"pass", pass}, {"checks", rows}};
  if (!extra.is_null()) j["extra"] = extra;
  return j;
}

namespace {

WaveletAtom random_atom(const MeyerWindow& window, const FrequencyLattice& lat,
                        Rng& rng, int top) {
  const int n = lat.dim();
  const int eps_max = 1 << n;
  // Mix detail atoms across levels with an occasional base scaling atom.
  int eps = static_cast<int>(rng.integer(eps_max));
  int level = static_cast<int>(rng.integer(top + 1));
  if (eps == 0) level = 0;
  std::vector<int> k(n);
  for (int a = 0; a < n; ++a)
    k[a] = static_cast<int>(rng.integer(std::size_t{1} << level));
  return atom_spectrum(window, eps, level, k, lat);
}

}  // namespace

SuiteReport run_basis_suite(const BasisSuiteConfig& cfg) {
  SuiteReport report;
  report.suite = "basis";
  const FrequencyLattice lat(cfg.dim, cfg.resolution);

  if (cfg.inject_bad_ramp) {
    // Failure injection: a ramp without the mirror symmetry is rejected at
    // construction, leaving no usable window, so the suite fails.
    bool rejected = false;
    try {
      build_window([](double x) { return x * x; });
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    report.require_flag("window-rejected", rejected);
    report.require_flag("window-usable", false);
    return report;
  }

  const MeyerWindow window = build_window();
  const int top = admissible_level_max(lat);
  Rng rng(cfg.seed);

  // Gram matrix of randomly chosen admissible atoms.
  {
    std::vector<WaveletAtom> atoms;
    atoms.reserve(cfg.gram_atoms);
    for (int i = 0; i < cfg.gram_atoms; ++i)
      atoms.push_back(random_atom(window, lat, rng, top));
    double worst = 0.0;
    for (int i = 0; i < cfg.gram_atoms; ++i) {
      for (int j = i; j < cfg.gram_atoms; ++j) {
        const cplx g = inner_product(atoms[i].spectrum, atoms[j].spectrum);
        const bool same = atoms[i].eps == atoms[j].eps &&
                          atoms[i].level == atoms[j].level &&
                          atoms[i].shift == atoms[j].shift;
        worst = std::max(worst, std::abs(g - (same ? cplx(1.0) : cplx(0.0))));
      }
    }
    report.require_below("gram-deviation", worst, cfg.gram_tol);
  }

  // Partition of unity across the representable band.
  {
    const int bound = representable_band(top);
    std::vector<int> m(cfg.dim);
    double worst = 0.0;
    for (std::size_t i = 0; i < lat.total(); ++i) {
      lat.decode(i, m.data());
      bool inside = true;
      for (int a = 0; a < cfg.dim; ++a) inside = inside && std::abs(m[a]) <= bound;
      if (!inside) continue;
      double cover = 1.0;
      for (int a = 0; a < cfg.dim; ++a) {
        const double w0 = window.scaling_symbol(kTwoPi * m[a]);
        cover *= w0 * w0;
      }
      for (int j = 0; j <= top; ++j) {
        for (int eps = 1; eps < (1 << cfg.dim); ++eps) {
          double band = 1.0;
          for (int a = 0; a < cfg.dim; ++a) {
            const double xi = std::ldexp(kTwoPi * m[a], -j);
            const double w = eps_bit(eps, a) ? window.annulus_symbol(xi)
                                             : window.scaling_symbol(xi);
            band *= w * w;
          }
          cover += band;
        }
      }
      worst = std::max(worst, std::abs(cover - 1.0));
    }
    report.require_below("partition-of-unity", worst, cfg.pou_tol);
  }

  // Round trip and Parseval for the full decomposition.
  SpectralField f = random_band_limited_field(lat, rng, top, true);
  {
    const WaveletCoefficients c = analyze(f, window, 0, top);
    const SpectralField back = synthesize(c, window, lat);
    const double ref = f.l2_norm();
    report.require_below("round-trip", (back - f).l2_norm() / ref,
                         cfg.round_trip_tol);
    report.require_below(
        "parseval", std::abs(c.total_energy() - ref * ref) / (ref * ref),
        cfg.parseval_tol);
  }

  // Round trips over the time-adapted families at distinct cut levels.
  const int levels = std::min(cfg.parameter_levels, top + 1);
  for (int j_t = 0; j_t < levels; ++j_t) {
    const double t = 1.5 * std::ldexp(1.0, -2 * j_t);
    const WaveletCoefficients c = analyze_parameter(f, window, t, top);
    const SpectralField back = synthesize(c, window, lat);
    const double ref = f.l2_norm();
    report.require_below("round-trip-adapted-j" + std::to_string(j_t),
                         (back - f).l2_norm() / ref, cfg.round_trip_tol);
  }

  report.extra = json{{"dim", cfg.dim},
                      {"resolution", cfg.resolution},
                      {"seed", cfg.seed},
                      {"top_level", top}};
  return report;
}

SuiteReport run_decomposition_suite(const DecompositionSuiteConfig& cfg) {
  SuiteReport report;
  report.suite = "decomposition";
  const FrequencyLattice lat(cfg.dim, cfg.resolution);
  const MeyerWindow window = build_window();
  const int top = product_safe_level_max(lat);
  Rng rng(cfg.seed);

  double worst = 0.0;
  for (int pair = 0; pair < cfg.pairs; ++pair) {
    const SpectralField u = random_band_limited_field(lat, rng, top, true);
    const SpectralField v = random_band_limited_field(lat, rng, top, true);
    const int j_t_pick = static_cast<int>(rng.integer(std::max(top - 1, 1)));
    const double t = 1.5 * std::ldexp(1.0, -2 * j_t_pick);
    const ParaproductTerms terms = paraproduct_decompose(u, v, window, t, top);
    worst = std::max(worst, terms.completeness_residual);
  }
  report.require_below("completeness-residual", worst, cfg.tol);
  report.extra = json{{"pairs", cfg.pairs}, {"resolution", cfg.resolution}};
  return report;
}

SuiteReport run_support_suite(const SupportSuiteConfig& cfg) {
  SuiteReport report;
  report.suite = "support";
  const FrequencyLattice lat(cfg.dim, cfg.resolution);
  const MeyerWindow window = build_window();
  const int n = cfg.dim;
  const int top = product_safe_level_max(lat);
  Rng rng(cfg.seed);

  // Low-frequency vanishing: the low-high Duhamel family has no component on
  // the time-matched scaling band.
  double worst_lowfreq = 0.0;
  for (int c = 0; c < cfg.configs; ++c) {
    SpectralField f = random_detail_field(lat, window, rng, 0, top - 1);
    SpectralField g = random_detail_field(lat, window, rng, 0, top - 1);
    const double nf = f.l2_norm(), ng = g.l2_norm();
    if (nf == 0.0 || ng == 0.0) continue;
    f *= 1.0 / nf;
    g *= 1.0 / ng;
    const int shell = static_cast<int>(rng.integer(2));
    HeatTrajectory uh = make_heat_trajectory(f, 0, std::max(shell, 1), 8);
    HeatTrajectory vh = make_heat_trajectory(g, 0, std::max(shell, 1), 8);
    const double t = std::ldexp(rng.uniform_in(1.0, 4.0), -2 * shell);
    const int j_t = parameter_index(t, top).level;
    const int eps = 1 + static_cast<int>(rng.integer((1 << n) - 1));
    std::array<int, 3> index = {static_cast<int>(rng.integer(n)),
                                static_cast<int>(rng.integer(n)),
                                static_cast<int>(rng.integer(n))};
    const SpectralField b =
        bilinear_duhamel_term(uh.sampler(), vh.sampler(), t,
                              KernelFamily::third_order, index, window, top,
                              TermFamily::low_high, eps);
    const std::vector<cplx> coeffs = band_coefficients(b, window, 0, j_t);
    for (const cplx& v : coeffs)
      worst_lowfreq = std::max(worst_lowfreq, std::abs(v));
  }
  report.require_below("low-frequency-vanishing", worst_lowfreq,
                       cfg.low_freq_tol);

  // Coupling restriction: scaling-scaling products at level j_s cannot see a
  // detail atom two levels up.
  double worst_coupling = 0.0;
  for (int c = 0; c < cfg.configs; ++c) {
    const int j_prime =
        2 + static_cast<int>(rng.integer(admissible_level_max(lat) - 1));
    const int j_s = static_cast<int>(rng.integer(j_prime - 1));  // <= j' - 2
    if (j_s > product_safe_level_max(lat)) continue;
    std::vector<int> k(n), k2(n), kp(n);
    for (int a = 0; a < n; ++a) {
      k[a] = static_cast<int>(rng.integer(std::size_t{1} << j_s));
      k2[a] = static_cast<int>(rng.integer(std::size_t{1} << j_s));
      kp[a] = static_cast<int>(rng.integer(std::size_t{1} << j_prime));
    }
    const int eps = 1 + static_cast<int>(rng.integer((1 << n) - 1));
    std::array<int, 3> index = {static_cast<int>(rng.integer(n)),
                                static_cast<int>(rng.integer(n)),
                                static_cast<int>(rng.integer(n))};
    const double tau = std::ldexp(rng.uniform_in(0.1, 2.0), -2 * j_prime);

    const WaveletAtom left = atom_spectrum(window, 0, j_s, k, lat);
    const WaveletAtom right = atom_spectrum(window, 0, j_s, k2, lat);
    const WaveletAtom target = atom_spectrum(window, eps, j_prime, kp, lat);
    const SpectralField product =
        pointwise_product(left.spectrum, right.spectrum);
    const SpectralField propagated = apply_kernel_operator(
        target.spectrum, tau, KernelFamily::third_order, index);
    worst_coupling =
        std::max(worst_coupling, std::abs(inner_product(product, propagated)));
  }
  report.require_below("coupling-restriction", worst_coupling, cfg.coupling_tol);
  report.extra = json{{"configs", cfg.configs}, {"resolution", cfg.resolution}};
  return report;
}

std::vector<std::string> estimate_table_rows() {
  std::vector<std::string> rows = known_estimate_ids();
  rows.push_back("embedding");
  rows.push_back("low-frequency-bound");
  rows.push_back("bilinear-norm");
  return rows;
}

namespace {

bool within_factor(double a, double b, double factor) {
  if (a <= 0.0 || b <= 0.0) return a == b;
  const double r = a / b;
  return r <= factor && r >= 1.0 / factor;
}

}  // namespace

SuiteReport run_estimates_suite(const EstimatesSuiteConfig& cfg) {
  SuiteReport report;
  report.suite = "estimates";
  const FrequencyLattice lat(cfg.dim, cfg.resolution);
  const FrequencyLattice lat2(cfg.dim, 2 * cfg.resolution);
  const MeyerWindow window = build_window();

  std::vector<std::string> rows =
      cfg.estimates.empty() ? estimate_table_rows() : cfg.estimates;
  const auto known = estimate_table_rows();
  for (const auto& id : rows)
    if (std::find(known.begin(), known.end(), id) == known.end())
      throw std::invalid_argument("run_estimates_suite: unknown estimate id '" +
                                  id + "'");

  json table = json::array();
  for (const auto& id : rows) {
    if (id == "embedding") {
      const int top = std::min(admissible_level_max(lat), cfg.shell_hi + 2);
      for (const auto& [p, m] : cfg.embedding_pm) {
        std::vector<double> constants;
        const EmbeddingResult base = embedding_experiment(
            window, lat, cfg.seed, cfg.embedding_members, p, m, cfg.shell_lo,
            cfg.shell_hi, top);
        constants.push_back(base.constant);
        if (cfg.resolution_stability) {
          constants.push_back(
              embedding_experiment(window, lat2, cfg.seed, cfg.embedding_members,
                                   p, m, cfg.shell_lo, cfg.shell_hi, top,
                                   cfg.resolution)
                  .constant);
          constants.push_back(
              embedding_experiment(window, lat, cfg.seed + 17,
                                   cfg.embedding_members, p, m, cfg.shell_lo,
                                   cfg.shell_hi, top)
                  .constant);
        }
        const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
        const std::string tag = "embedding-p" + std::to_string(static_cast<int>(p)) +
                                "-m" + std::to_string(static_cast<int>(m));
        report.require_flag(tag + "-finite",
                            std::isfinite(base.constant) && base.constant > 0.0);
        if (cfg.resolution_stability)
          report.require_below(tag + "-stability", *hi / *lo,
                               cfg.embedding_stability_factor);
        table.push_back({{"estimate", tag}, {"constants", constants}});
      }
      continue;
    }
    if (id == "low-frequency-bound") {
      Rng rng(cfg.seed);
      const int top = admissible_level_max(lat);
      SpectralField f = random_detail_field(lat, window, rng, 0, top);
      const double nf = f.l2_norm();
      if (nf > 0.0) f *= 1e-2 / nf;
      const HeatTrajectory traj =
          make_heat_trajectory(f, cfg.shell_lo, cfg.shell_hi, 4);
      NormOptions nopts;
      const double c1 =
          low_freq_bound_check(traj.sampler(), window, cfg.p, cfg.m,
                               cfg.shell_lo, cfg.shell_hi, top, nopts);
      report.require_flag("low-frequency-bound-finite",
                          std::isfinite(c1) && c1 > 0.0);
      if (cfg.resolution_stability) {
        const SpectralField f2 = embed_field(f, lat2);
        const HeatTrajectory traj2 =
            make_heat_trajectory(f2, cfg.shell_lo, cfg.shell_hi, 4);
        const double c2 =
            low_freq_bound_check(traj2.sampler(), window, cfg.p, cfg.m,
                                 cfg.shell_lo, cfg.shell_hi, top, nopts);
        report.require_flag(
            "low-frequency-bound-stability",
            within_factor(c1, c2, cfg.lowfreq_stability_factor));
        table.push_back({{"estimate", id}, {"constants", {c1, c2}}});
      } else {
        table.push_back({{"estimate", id}, {"constants", {c1}}});
      }
      continue;
    }
    if (id == "bilinear-norm") {
      OperatorNormOptions opts;
      opts.input_level_cap = std::min(2, admissible_level_max(lat) - 2);
      const int top = std::min(admissible_level_max(lat) - 1,
                               opts.input_level_cap + 2);
      const OperatorNormResult base = verify_operator_norm(
          window, lat, cfg.seed, cfg.bilinear_pairs, cfg.p, cfg.m, cfg.shell_lo,
          cfg.shell_hi, top, opts);
      report.require_flag("bilinear-norm-finite",
                          std::isfinite(base.constant) && base.constant > 0.0);
      std::vector<double> constants{base.constant};
      if (cfg.resolution_stability) {
        OperatorNormOptions opts2 = opts;
        opts2.content_resolution = cfg.resolution;
        const OperatorNormResult fine = verify_operator_norm(
            window, lat2, cfg.seed, cfg.bilinear_pairs, cfg.p, cfg.m,
            cfg.shell_lo, cfg.shell_hi, top, opts2);
        constants.push_back(fine.constant);
        report.require_flag(
            "bilinear-norm-stability",
            within_factor(base.constant, fine.constant,
                          cfg.bilinear_stability_factor));
      }
      table.push_back({{"estimate", id}, {"constants", constants}});
      continue;
    }

    // Decay-fit rows.
    const DecayFit base = fit_decay(id, window, lat, cfg.seed, cfg.ensemble);
    report.require_flag(id + "-certified", base.certified);
    json row = to_json(base);
    if (cfg.resolution_stability) {
      const DecayFit fine =
          fit_decay(id, window, lat2, cfg.seed, cfg.ensemble, cfg.resolution);
      row["constant_2x"] = fine.constant;
      report.require_flag(
          id + "-stability",
          fine.certified && within_factor(base.constant, fine.constant,
                                          cfg.decay_stability_factor));
    }
    table.push_back(row);
  }

  report.extra = json{{"resolution", cfg.resolution},
                      {"seed", cfg.seed},
                      {"ensemble", cfg.ensemble},
                      {"table", table}};
  return report;
}

SolveSuiteResult run_solve_suite(const SolveSuiteConfig& cfg) {
  SolveSuiteResult result;
  result.report.suite = "solve";
  const FrequencyLattice lat(cfg.dim, cfg.resolution);
  const MeyerWindow window = build_window();

  const VectorField a =
      initial_data_preset(cfg.preset, window, lat, cfg.scale, cfg.solver.p,
                          cfg.atom_level, cfg.seed);
  result.state = picard_solve(a, window, cfg.solver);
  const SolverState& st = result.state;

  result.report.require_flag("converged", st.status == "converged");
  result.report.require_below("iterations", st.iterations, cfg.iteration_limit);
  double worst_ratio = 0.0;
  for (double r : st.ratios) worst_ratio = std::max(worst_ratio, r);
  result.report.require_below("contraction-ratio", worst_ratio, cfg.ratio_limit);
  result.report.require_below("residual", st.residual, cfg.residual_limit);
  result.report.require_below("divergence", st.divergence, cfg.divergence_limit);

  NormOptions nopts;
  nopts.min_samples_per_shell = std::min(4, cfg.solver.samples_per_shell);
  result.solution_norms = ypm_norm(
      st.solution.component_sampler(0), window, cfg.solver.p, cfg.solver.m,
      cfg.solver.shell_lo, cfg.solver.shell_hi, st.top_level, nopts);

  if (cfg.mesh_doubling_check) {
    SolverConfig dense = cfg.solver;
    dense.samples_per_shell = 2 * cfg.solver.samples_per_shell;
    const SolverState fine = picard_solve(a, window, dense);
    const double h_base = vector_trajectory_norm(
        st.solution, window, cfg.solver.p, cfg.solver.m, cfg.solver.shell_lo,
        cfg.solver.shell_hi, st.top_level, nopts);
    const double h_fine = vector_trajectory_norm(
        fine.solution, window, cfg.solver.p, cfg.solver.m, cfg.solver.shell_lo,
        cfg.solver.shell_hi, fine.top_level, nopts);
    result.report.require_below(
        "mesh-doubling-change",
        h_base > 0.0 ? std::abs(h_fine - h_base) / h_base : 0.0,
        cfg.mesh_change_limit);
  }

  if (cfg.smallness_check) {
    VectorField half = a;
    half *= 0.5;
    const SolverState st_half = picard_solve(half, window, cfg.solver);
    const double inc_full = st.increments.empty() ? 0.0 : st.increments[0];
    const double inc_half =
        st_half.increments.empty() ? 0.0 : st_half.increments[0];
    result.report.require_at_least(
        "smallness-response",
        inc_half > 0.0 ? inc_full / inc_half : cfg.smallness_factor_min,
        cfg.smallness_factor_min);
  }

  if (cfg.lambda > 0) {
    const ScalingCheckResult sc = scaling_check(a, window, cfg.solver, cfg.lambda);
    result.report.require_below("rescaling-deviation", sc.solution_deviation,
                                cfg.scaling_dev_limit);
    result.report.require_below("rescaling-besov-deviation", sc.besov_deviation,
                                cfg.besov_dev_limit);
    result.report.extra["rescaling"] =
        json{{"solution_deviation", sc.solution_deviation},
             {"besov_deviation", sc.besov_deviation},
             {"iteration_counts_match", sc.iteration_counts_match}};
  }

  result.report.extra["state"] = to_json(st);
  return result;
}

}  // namespace pmns

#include "pmns/paraproduct.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "pmns/ensembles.hpp"
#include "pmns/heat_flow.hpp"
#include "pmns/spectral_ops.hpp"

namespace pmns {

SpectralField level_project(const SpectralField& f, const MeyerWindow& window,
                            int j, ProjectionKind kind, int eps) {
  const FrequencyLattice& lat = f.lattice();
  SpectralField out(lat);
  switch (kind) {
    case ProjectionKind::scaling:
      add_band_synthesis(out, window, 0, j, band_coefficients(f, window, 0, j));
      break;
    case ProjectionKind::detail_sum:
      for (int e = 1; e < (1 << lat.dim()); ++e)
        add_band_synthesis(out, window, e, j, band_coefficients(f, window, e, j));
      break;
    case ProjectionKind::detail_band:
      if (eps <= 0 || eps >= (1 << lat.dim()))
        throw std::invalid_argument("level_project: bad detail band selector");
      add_band_synthesis(out, window, eps, j,
                         band_coefficients(f, window, eps, j));
      break;
  }
  return out;
}

namespace {

// Cached P_j / Q_j stack over [base, top]; P grows cumulatively.
struct LevelStack {
  int base = 0, top = 0;
  std::vector<SpectralField> p;  // P_j, j = base..top+1
  std::vector<SpectralField> q;  // Q_j, j = base..top

  const SpectralField& P(int j) const { return p[j - base]; }
  const SpectralField& Q(int j) const { return q[j - base]; }
};

LevelStack build_stack(const SpectralField& f, const MeyerWindow& window,
                       int base, int top) {
  LevelStack st;
  st.base = base;
  st.top = top;
  st.p.push_back(level_project(f, window, base, ProjectionKind::scaling));
  for (int j = base; j <= top; ++j) {
    st.q.push_back(level_project(f, window, j, ProjectionKind::detail_sum));
    st.p.push_back(st.p.back() + st.q.back());
  }
  return st;
}

}  // namespace

std::string paraproduct_term_label(int term) {
  static const char* kLabels[kParaproductTermCount] = {
      "sum P[j-2]u Q[j]v", "sum Q[j-2]u Q[j]v", "sum Q[j-1]u Q[j]v",
      "sum Q[j]u Q[j]v",   "sum Q[j]u Q[j-1]v", "sum Q[j]u Q[j-2]v",
      "sum Q[j]u P[j-2]v", "P[b+1]u Q[b+1]v",   "Q[b+1]u Q[b+1]v",
      "Q[b+1]u P[b+1]v",   "P[b]u Q[b]v",       "Q[b]u Q[b]v",
      "Q[b]u P[b]v",       "P[b]u P[b]v"};
  if (term < 0 || term >= kParaproductTermCount)
    throw std::invalid_argument("paraproduct term index out of range");
  return kLabels[term];
}

namespace {

SpectralField term_from_stacks(const LevelStack& su, const LevelStack& sv,
                               const FrequencyLattice& lat, int base, int top,
                               int term) {
  SpectralField out(lat);
  if (term < 7) {
    for (int j = base + 2; j <= top; ++j) {
      switch (term) {
        case 0: out += pointwise_product(su.P(j - 2), sv.Q(j)); break;
        case 1: out += pointwise_product(su.Q(j - 2), sv.Q(j)); break;
        case 2: out += pointwise_product(su.Q(j - 1), sv.Q(j)); break;
        case 3: out += pointwise_product(su.Q(j), sv.Q(j)); break;
        case 4: out += pointwise_product(su.Q(j), sv.Q(j - 1)); break;
        case 5: out += pointwise_product(su.Q(j), sv.Q(j - 2)); break;
        case 6: out += pointwise_product(su.Q(j), sv.P(j - 2)); break;
      }
    }
    return out;
  }
  if (term < 10) {
    const int j = base + 1;
    if (j > top) return out;  // Q vanishes on representable inputs
    switch (term) {
      case 7: return pointwise_product(su.P(j), sv.Q(j));
      case 8: return pointwise_product(su.Q(j), sv.Q(j));
      case 9: return pointwise_product(su.Q(j), sv.P(j));
    }
  }
  switch (term) {
    case 10: return pointwise_product(su.P(base), sv.Q(base));
    case 11: return pointwise_product(su.Q(base), sv.Q(base));
    case 12: return pointwise_product(su.Q(base), sv.P(base));
    case 13: return pointwise_product(su.P(base), sv.P(base));
  }
  throw std::invalid_argument("paraproduct term index out of range");
}

}  // namespace

ParaproductTerms paraproduct_decompose(const SpectralField& u,
                                       const SpectralField& v,
                                       const MeyerWindow& window, double t,
                                       int top_level) {
  const FrequencyLattice& lat = u.lattice();
  u.require_same_lattice(v);
  if (top_level > product_safe_level_max(lat))
    throw std::invalid_argument(
        "paraproduct_decompose: top level not product-safe on this lattice");
  const int j_t = parameter_index(t, top_level).level;

  ParaproductTerms result{pointwise_product(u, v)};
  result.base_level = j_t;
  result.top_level = top_level;

  const LevelStack su = build_stack(u, window, j_t, top_level);
  const LevelStack sv = build_stack(v, window, j_t, top_level);

  SpectralField sum(lat);
  for (int term = 0; term < kParaproductTermCount; ++term) {
    SpectralField field = term_from_stacks(su, sv, lat, j_t, top_level, term);
    sum += field;
    result.terms.push_back({paraproduct_term_label(term), std::move(field)});
  }
  const double ref = result.product.l2_norm();
  result.completeness_residual =
      ref > 0.0 ? (sum - result.product).l2_norm() / ref : sum.l2_norm();
  return result;
}

SpectralField paraproduct_term_field(const SpectralField& u_s,
                                     const SpectralField& v_s,
                                     const MeyerWindow& window, int j_s,
                                     int top_level, int term) {
  const LevelStack su = build_stack(u_s, window, j_s, top_level);
  const LevelStack sv = build_stack(v_s, window, j_s, top_level);
  return term_from_stacks(su, sv, u_s.lattice(), j_s, top_level, term);
}

// --- quadrature --------------------------------------------------------------

std::vector<double> duhamel_mesh(int shell_lo, int shell_hi,
                                 int samples_per_shell, int band_bound) {
  if (samples_per_shell < 4)
    throw std::invalid_argument("duhamel_mesh: need >= 4 samples per shell");
  if (band_bound < 1) band_bound = 1;
  const double lambda_max =
      3.0 * (kTwoPi * band_bound) * (kTwoPi * band_bound);
  const double t_min =
      std::min(std::ldexp(1.0, -2 * (shell_hi + 1)), 0.05 / lambda_max);

  std::vector<double> mesh;
  mesh.push_back(0.0);
  std::vector<double> desc;
  for (int i = 1;; ++i) {
    const double e = 2.0 * (1 - shell_lo) -
                     2.0 * static_cast<double>(i) / samples_per_shell;
    const double t = std::exp2(e);
    desc.push_back(t);
    if (t <= t_min) break;
  }
  for (auto it = desc.rbegin(); it != desc.rend(); ++it) mesh.push_back(*it);
  return mesh;
}

namespace {

// g0(z) = (1 - e^{-z})/z, g1(z) = (1 - g0)/z; trapezoid limits at z = 0.
void exp_weights(double z, double& g0, double& g1) {
  if (z < 1e-2) {
    g0 = 1.0 - z * (0.5 - z * (1.0 / 6.0 - z / 24.0));
    g1 = 0.5 - z * (1.0 / 6.0 - z * (1.0 / 24.0 - z / 120.0));
    return;
  }
  g0 = -std::expm1(-z) / z;
  g1 = (1.0 - g0) / z;
}

}  // namespace

std::vector<SpectralField> duhamel_march(
    const FrequencyLattice& lattice, const std::vector<double>& times,
    const std::function<SpectralField(std::size_t)>& integrand_at_node) {
  if (times.empty() || times[0] != 0.0)
    throw std::invalid_argument("duhamel_march: mesh must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("duhamel_march: mesh not increasing");

  const std::size_t total = lattice.total();
  std::vector<double> lambda(total);
  std::vector<int> m(lattice.dim());
  for (std::size_t i = 0; i < total; ++i) {
    lattice.decode(i, m.data());
    lambda[i] = physical_freq_sq(m.data(), lattice.dim());
  }

  std::vector<SpectralField> out;
  out.reserve(times.size());
  out.emplace_back(lattice);

  SpectralField w_prev = integrand_at_node(0);
  SpectralField state(lattice);
  for (std::size_t node = 1; node < times.size(); ++node) {
    const double h = times[node] - times[node - 1];
    SpectralField w_next = integrand_at_node(node);
    for (std::size_t i = 0; i < total; ++i) {
      const double z = lambda[i] * h;
      double g0, g1;
      exp_weights(z, g0, g1);
      const double decay = std::exp(-z);
      state[i] = decay * state[i] +
                 h * (w_prev[i] * (g0 - g1) + w_next[i] * g1);
    }
    w_prev = std::move(w_next);
    out.push_back(state);
  }
  return out;
}

namespace {

std::vector<double> nodes_below(const std::vector<double>& times, double t) {
  std::vector<double> nodes;
  nodes.push_back(0.0);
  for (double s : times)
    if (s > 0.0 && s < t) nodes.push_back(s);
  nodes.push_back(t);
  return nodes;
}

SpectralField march_product(const TrajectorySampler& u,
                            const TrajectorySampler& v,
                            const std::vector<double>& nodes,
                            KernelFamily family,
                            const std::array<int, 3>& index) {
  const FrequencyLattice lat = u.at(nodes.back()).lattice();
  auto integrand = [&](std::size_t i) {
    return apply_kernel_operator(pointwise_product(u.at(nodes[i]), v.at(nodes[i])),
                                 0.0, family, index);
  };
  return duhamel_march(lat, nodes, integrand).back();
}

}  // namespace

SpectralField bilinear_duhamel(const TrajectorySampler& u,
                               const TrajectorySampler& v, double t,
                               KernelFamily family,
                               const std::array<int, 3>& index,
                               BilinearDiagnostics* diag) {
  if (!(t > 0.0)) throw std::invalid_argument("bilinear_duhamel: requires t > 0");
  const std::vector<double> nodes = nodes_below(u.times(), t);
  SpectralField fine = march_product(u, v, nodes, family, index);
  if (diag) {
    std::vector<double> coarse;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (i % 2 == 0 || i + 1 == nodes.size()) coarse.push_back(nodes[i]);
    const SpectralField rough = march_product(u, v, coarse, family, index);
    const double ref = fine.l2_norm();
    diag->step_halving_rel = ref > 0.0 ? (fine - rough).l2_norm() / ref : 0.0;
    diag->coarse_warning = diag->step_halving_rel > 0.01;
  }
  return fine;
}

std::vector<SpectralField> bilinear_duhamel_trajectory(
    const TrajectorySampler& u, const TrajectorySampler& v,
    const std::vector<double>& times, KernelFamily family,
    const std::array<int, 3>& index, int band_cap) {
  const FrequencyLattice lat = u.at(times.back()).lattice();
  auto integrand = [&](std::size_t i) {
    if (times[i] == 0.0 && i == 0) {
      // t = 0 product from the samplers' own initial states.
      return apply_kernel_operator(pointwise_product(u.at(0.0), v.at(0.0)), 0.0,
                                   family, index);
    }
    return apply_kernel_operator(pointwise_product(u.at(times[i]), v.at(times[i])),
                                 0.0, family, index);
  };
  std::vector<SpectralField> out = duhamel_march(lat, times, integrand);
  if (band_cap >= 0)
    for (SpectralField& f : out) band_limit(f, band_cap);
  return out;
}

namespace {

int parameter_level_at(double s, int top_level) {
  if (s <= 0.0) return top_level;  // s -> 0 pushes the cut to the finest level
  return parameter_index(s, top_level).level;
}

}  // namespace

SpectralField bilinear_duhamel_named_term(const TrajectorySampler& u,
                                          const TrajectorySampler& v, double t,
                                          KernelFamily family,
                                          const std::array<int, 3>& index,
                                          const MeyerWindow& window,
                                          int top_level, int term) {
  if (!(t > 0.0))
    throw std::invalid_argument("bilinear_duhamel_named_term: requires t > 0");
  const std::vector<double> nodes = nodes_below(u.times(), t);
  const FrequencyLattice lat = u.at(t).lattice();
  auto integrand = [&](std::size_t i) {
    const double s = nodes[i];
    const int j_s = parameter_level_at(s, top_level);
    return apply_kernel_operator(
        paraproduct_term_field(u.at(s), v.at(s), window, j_s, top_level, term),
        0.0, family, index);
  };
  return duhamel_march(lat, nodes, integrand).back();
}

SpectralField bilinear_duhamel_term(const TrajectorySampler& u,
                                    const TrajectorySampler& v, double t,
                                    KernelFamily family,
                                    const std::array<int, 3>& index,
                                    const MeyerWindow& window, int top_level,
                                    TermFamily which, int eps) {
  if (!(t > 0.0))
    throw std::invalid_argument("bilinear_duhamel_term: requires t > 0");
  const std::vector<double> nodes = nodes_below(u.times(), t);
  const FrequencyLattice lat = u.at(t).lattice();

  auto integrand = [&](std::size_t i) -> SpectralField {
    const double s = nodes[i];
    const int j_s = parameter_level_at(s, top_level);
    SpectralField w(lat);
    switch (which) {
      case TermFamily::low_high: {
        if (eps <= 0 || eps >= (1 << lat.dim()))
          throw std::invalid_argument("bilinear_duhamel_term: bad band selector");
        const SpectralField us = u.at(s), vs = v.at(s);
        for (int j = j_s + 2; j <= top_level; ++j) {
          const SpectralField pu =
              level_project(us, window, j - 2, ProjectionKind::scaling);
          const SpectralField qv =
              level_project(vs, window, j, ProjectionKind::detail_band, eps);
          w += pointwise_product(pu, qv);
        }
        break;
      }
      case TermFamily::high_high:
        w = paraproduct_term_field(u.at(s), v.at(s), window, j_s, top_level, 3);
        break;
      case TermFamily::scaling_scaling:
        w = paraproduct_term_field(u.at(s), v.at(s), window, j_s, top_level, 13);
        break;
    }
    return apply_kernel_operator(w, 0.0, family, index);
  };
  return duhamel_march(lat, nodes, integrand).back();
}

TrajectorySampler mesh_sampler(std::vector<double> times,
                               std::vector<SpectralField> fields) {
  if (times.size() != fields.size())
    throw std::invalid_argument("mesh_sampler: size mismatch");
  auto shared_times = std::make_shared<std::vector<double>>(times);
  auto shared_fields =
      std::make_shared<std::vector<SpectralField>>(std::move(fields));
  auto lookup = [shared_times, shared_fields](double t) -> SpectralField {
    const auto& ts = *shared_times;
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.end() || *it != t)
      throw std::invalid_argument("mesh_sampler: time not on the mesh");
    return (*shared_fields)[static_cast<std::size_t>(it - ts.begin())];
  };
  return TrajectorySampler(std::move(times), lookup);
}

OperatorNormResult verify_operator_norm(const MeyerWindow& window,
                                        const FrequencyLattice& lattice,
                                        std::uint64_t seed, int count, double p,
                                        double m, int shell_lo, int shell_hi,
                                        int top_level,
                                        const OperatorNormOptions& opts) {
  Rng rng(seed);
  OperatorNormResult result;
  result.resolution = lattice.size();
  const int n = lattice.dim();
  const int cap = representable_band(top_level);
  const FrequencyLattice content(
      lattice.dim(),
      opts.content_resolution < 0 ? lattice.size() : opts.content_resolution);
  NormOptions nopts;
  nopts.min_samples_per_shell = std::min(4, opts.samples_per_shell);

  const std::vector<double> mesh =
      duhamel_mesh(shell_lo, shell_hi, opts.samples_per_shell,
                   representable_band(opts.input_level_cap));

  for (int member = 0; member < count; ++member) {
    // scaling_only_inputs exercises the low-low path: content below every
    // shell's cut level, so the whole trajectory sits in the scaling bands.
    const int low_top = std::max(shell_lo - 1, 0);
    SpectralField f =
        opts.scaling_only_inputs
            ? random_band_limited_field(content, rng, low_top, true)
            : random_detail_field(content, window, rng, 0, opts.input_level_cap);
    SpectralField g =
        opts.scaling_only_inputs
            ? random_band_limited_field(content, rng, low_top, true)
            : random_detail_field(content, window, rng, 0, opts.input_level_cap);
    if (content.size() != lattice.size()) {
      f = embed_field(f, lattice);
      g = embed_field(g, lattice);
    }
    const double nf = f.l2_norm(), ng = g.l2_norm();
    if (nf > 0) f *= 1.0 / nf;
    if (ng > 0) g *= 1.0 / ng;

    HeatTrajectory uh = make_heat_trajectory(f, shell_lo, shell_hi,
                                             opts.samples_per_shell);
    HeatTrajectory vh = make_heat_trajectory(g, shell_lo, shell_hi,
                                             opts.samples_per_shell);
    const TrajectorySampler u = uh.sampler();
    const TrajectorySampler v = vh.sampler();

    const NormReport nu = ypm_norm(u, window, p, m, shell_lo, shell_hi,
                                   top_level, nopts);
    const NormReport nv = ypm_norm(v, window, p, m, shell_lo, shell_hi,
                                   top_level, nopts);
    const double norm_u = std::max(nu.h0, nu.hm);
    const double norm_v = std::max(nv.h0, nv.hm);
    if (norm_u == 0.0 || norm_v == 0.0) {
      ++result.skipped;
      continue;
    }

    OperatorNormRow row;
    row.member = static_cast<std::uint64_t>(member);
    row.family = member % 2;
    if (row.family == 0) {
      row.index = {static_cast<int>(rng.integer(n)), -1, -1};
    } else {
      row.index = {static_cast<int>(rng.integer(n)),
                   static_cast<int>(rng.integer(n)),
                   static_cast<int>(rng.integer(n))};
    }

    std::vector<SpectralField> b = bilinear_duhamel_trajectory(
        u, v, mesh, row.family == 0 ? KernelFamily::first_order
                                    : KernelFamily::third_order,
        row.index, cap);
    std::vector<double> positive(mesh.begin() + 1, mesh.end());
    b.erase(b.begin());
    const TrajectorySampler bs = mesh_sampler(positive, std::move(b));
    const NormReport nb = ypm_norm(bs, window, p, m, shell_lo, shell_hi,
                                   top_level, nopts);
    row.ratio = std::max(nb.h0, nb.hm) / (norm_u * norm_v);
    result.constant = std::max(result.constant, row.ratio);
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace pmns

#include "pmns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmns {

TrajectorySampler::TrajectorySampler(std::vector<double> times,
                                     std::function<SpectralField(double)> field_at)
    : times_(std::move(times)), field_at_(std::move(field_at)) {
  if (times_.empty()) throw std::invalid_argument("TrajectorySampler: empty mesh");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw std::invalid_argument("TrajectorySampler: mesh not strictly increasing");
  if (!field_at_) throw std::invalid_argument("TrajectorySampler: null accessor");
}

std::vector<double> TrajectorySampler::shell_times(int shell) const {
  std::vector<double> out;
  for (double t : times_) {
    const double scaled = std::ldexp(t, 2 * shell);
    if (scaled >= 1.0 && scaled < 4.0) out.push_back(t);
  }
  return out;
}

std::vector<double> shell_mesh(int shell_lo, int shell_hi, int samples_per_shell) {
  if (shell_hi < shell_lo)
    throw std::invalid_argument("shell_mesh: empty shell range");
  if (samples_per_shell < 1)
    throw std::invalid_argument("shell_mesh: need at least one sample per shell");
  std::vector<double> mesh;
  for (int shell = shell_hi; shell >= shell_lo; --shell) {
    const double base = std::ldexp(1.0, -2 * shell);
    for (int i = 0; i < samples_per_shell; ++i)
      mesh.push_back(base * std::pow(4.0, static_cast<double>(i) /
                                              samples_per_shell));
  }
  return mesh;
}

namespace {

double band_p_sum(const std::vector<cplx>& band, double p) {
  double s = 0.0;
  for (const cplx& v : band) s += std::pow(std::abs(v), p);
  return s;
}

void check_norm_preconditions(double p, int dim, const NormOptions& opts) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("block_norms: requires finite p >= 1");
  if (p <= static_cast<double>(dim) && !opts.allow_low_p)
    throw std::invalid_argument(
        "block_norms: p <= n is outside the well-posedness hypothesis; set "
        "allow_low_p to explore anyway");
}

}  // namespace

ShellBlocks block_norms(const TrajectorySampler& traj, const MeyerWindow& window,
                        double p, double m, int shell, int top_level,
                        const NormOptions& opts) {
  check_norm_preconditions(p, 0, opts);  // dim checked against first field below
  const std::vector<double> samples = traj.shell_times(shell);
  if (static_cast<int>(samples.size()) < opts.min_samples_per_shell)
    throw std::invalid_argument(
        "block_norms: shell " + std::to_string(shell) + " has only " +
        std::to_string(samples.size()) + " mesh samples, need >= " +
        std::to_string(opts.min_samples_per_shell));

  ShellBlocks blocks;
  blocks.shell = shell;
  blocks.detail_blocks.assign(static_cast<std::size_t>(top_level - shell + 1), 0.0);

  int dim = 0;
  double scaling_max = 0.0;
  std::vector<double> detail_max(blocks.detail_blocks.size(), 0.0);
  for (double t : samples) {
    const SpectralField u = traj.at(t);
    dim = u.lattice().dim();
    if (p <= static_cast<double>(dim) && !opts.allow_low_p)
      check_norm_preconditions(p, dim, opts);
    const WaveletCoefficients c = analyze_parameter(u, window, t, top_level,
                                                    opts.cut_offset, opts.leak_tol);
    if (c.base_level != shell)
      throw std::logic_error("block_norms: shell/base level mismatch");
    scaling_max = std::max(scaling_max, band_p_sum(c.scaling, p));
    for (int j = shell; j <= top_level; ++j) {
      double s = 0.0;
      for (int eps = 1; eps < (1 << dim); ++eps)
        s += band_p_sum(c.detail_band(j, eps), p);
      detail_max[j - shell] = std::max(detail_max[j - shell], s);
    }
  }

  const double half_dim = 0.5 * dim;
  blocks.scaling_block =
      std::exp2(p * shell * (half_dim - 1.0)) * scaling_max;
  for (int j = shell; j <= top_level; ++j) {
    blocks.detail_blocks[j - shell] =
        std::exp2(2.0 * m * p * (j - shell) + p * j * (half_dim - 1.0)) *
        detail_max[j - shell];
  }
  return blocks;
}

double NormReport::recompute_h0() const {
  double worst = 0.0;
  for (const auto& b : shells) worst = std::max(worst, b.scaling_block);
  return std::pow(worst, 1.0 / p);
}

double NormReport::recompute_hm() const {
  double worst = 0.0;
  for (const auto& b : shells) {
    double s = 0.0;
    for (double v : b.detail_blocks) s += v;
    worst = std::max(worst, s);
  }
  return std::pow(worst, 1.0 / p);
}

NormReport ypm_norm(const TrajectorySampler& traj, const MeyerWindow& window,
                    double p, double m, int shell_lo, int shell_hi,
                    int top_level, const NormOptions& opts) {
  if (!(m > 0.0)) throw std::invalid_argument("ypm_norm: requires m > 0");
  NormReport report;
  report.p = p;
  report.m = m;
  report.shell_lo = shell_lo;
  report.shell_hi = shell_hi;
  report.top_level = top_level;
  report.low_m_flagged = m < 1.0;

  for (int shell = shell_lo; shell <= shell_hi; ++shell)
    report.shells.push_back(
        block_norms(traj, window, p, m, shell, top_level, opts));

  for (const auto& b : report.shells) {
    double sum = 0.0;
    for (double v : b.detail_blocks) sum += v;
    report.tail_fraction.push_back(sum > 0.0 ? b.detail_blocks.back() / sum : 0.0);
  }
  report.h0 = report.recompute_h0();
  report.hm = report.recompute_hm();

  double sup_besov = 0.0;
  int dim = 0;
  for (int shell = shell_lo; shell <= shell_hi; ++shell) {
    for (double t : traj.shell_times(shell)) {
      const SpectralField u = traj.at(t);
      dim = u.lattice().dim();
      const double s = static_cast<double>(dim) / p - 1.0;
      const WaveletCoefficients c =
          analyze(u, window, 0, top_level, opts.leak_tol);
      sup_besov = std::max(sup_besov, besov_norm(c, s, p, p));
    }
  }
  report.dim = dim;
  report.sup_besov = sup_besov;
  return report;
}

double low_freq_bound_check(const TrajectorySampler& traj,
                            const MeyerWindow& window, double p, double m,
                            int shell_lo, int shell_hi, int top_level,
                            const NormOptions& opts) {
  (void)p;
  (void)m;
  double worst = 0.0;
  std::size_t samples = 0;
  for (int shell = shell_lo; shell <= shell_hi; ++shell) {
    samples += traj.shell_times(shell).size();
  }
  if (samples == 0)
    throw std::invalid_argument(
        "low_freq_bound_check: mesh covers none of the requested shells");
  for (int shell = shell_lo; shell <= shell_hi; ++shell) {
    for (double t : traj.shell_times(shell)) {
      const SpectralField u = traj.at(t);
      const int dim = u.lattice().dim();
      const int j_t = parameter_index(t, top_level).level;
      for (int j = j_t; j <= top_level; ++j) {
        const std::vector<cplx> band = band_coefficients(u, window, 0, j);
        double big = 0.0;
        for (const cplx& v : band) big = std::max(big, std::abs(v));
        worst = std::max(worst,
                         std::exp2(0.5 * dim * j) * big * std::exp2(-j_t));
      }
    }
  }
  return worst;
}

double besov_norm(const WaveletCoefficients& c, double s, double p, double q) {
  const bool p_inf = std::isinf(p);
  const bool q_inf = std::isinf(q);
  if ((!p_inf && p < 1.0) || (!q_inf && q < 1.0))
    throw std::invalid_argument("besov_norm: requires p, q >= 1");

  const double n = static_cast<double>(c.dim);
  double outer = 0.0;
  for (int j = c.base_level; j <= c.top_level; ++j) {
    double inner = 0.0;
    for (int eps = 1; eps < (1 << c.dim); ++eps) {
      for (const cplx& v : c.detail_band(j, eps)) {
        const double a = std::abs(v);
        if (p_inf)
          inner = std::max(inner, a);
        else
          inner += std::pow(a, p);
      }
    }
    const double level_lp = p_inf ? inner : std::pow(inner, 1.0 / p);
    const double weight = std::exp2(j * (s + 0.5 * n - (p_inf ? 0.0 : n / p)));
    const double term = weight * level_lp;
    if (q_inf)
      outer = std::max(outer, term);
    else
      outer += std::pow(term, q);
  }
  return q_inf ? outer : std::pow(outer, 1.0 / q);
}

double besov_scaling_term(const WaveletCoefficients& c, double s, double p) {
  const bool p_inf = std::isinf(p);
  const double n = static_cast<double>(c.dim);
  double inner = 0.0;
  for (const cplx& v : c.scaling) {
    const double a = std::abs(v);
    if (p_inf)
      inner = std::max(inner, a);
    else
      inner += std::pow(a, p);
  }
  const double level_lp = p_inf ? inner : std::pow(inner, 1.0 / p);
  return std::exp2(c.base_level * (s + 0.5 * n - (p_inf ? 0.0 : n / p))) *
         level_lp;
}

}  // namespace pmns

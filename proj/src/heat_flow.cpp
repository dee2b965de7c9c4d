#include "pmns/heat_flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmns/ensembles.hpp"
#include "pmns/fft.hpp"
#include "pmns/spectral_ops.hpp"

namespace pmns {

TrajectorySampler HeatTrajectory::sampler() const {
  SpectralField a = initial;
  return TrajectorySampler(times, [a](double t) { return heat_semigroup(a, t); });
}

HeatTrajectory make_heat_trajectory(const SpectralField& a, int shell_lo,
                                    int shell_hi, int samples_per_shell) {
  const int top = admissible_level_max(a.lattice());
  if (shell_lo < 0 || shell_hi > top || shell_hi < shell_lo)
    throw std::invalid_argument(
        "make_heat_trajectory: shell range not representable on this lattice");
  if (samples_per_shell < 1)
    throw std::invalid_argument("make_heat_trajectory: need >= 1 sample per shell");

  HeatTrajectory traj(a);
  traj.times = shell_mesh(shell_lo, shell_hi, samples_per_shell);
  traj.fields.reserve(traj.times.size());
  for (double t : traj.times) traj.fields.push_back(heat_semigroup(a, t));
  return traj;
}

namespace {

// Translation-independent part of <e^{tDelta} atom(eps_s, j_s, .), atom(eps_t, j_t, .)>,
// tabulated over the offset classes d = k_t 2^{J-j_t} - k_s 2^{J-j_s} mod 2^J.
struct PairTable {
  int J = 0;
  bool vanishes = true;
  std::vector<cplx> values;
};

PairTable evolution_pair_table(const FrequencyLattice& lat,
                               const MeyerWindow& window, double t, int eps_s,
                               int j_s, int eps_t, int j_t) {
  PairTable table;
  table.J = std::max(j_s, j_t);
  const int n = lat.dim();
  const int count = 1 << table.J;
  const std::size_t folded_total = translations_per_level(n, table.J);
  std::vector<cplx> folded(folded_total, cplx(0.0));

  const double norm =
      std::ldexp(1.0, -(n * (j_s + j_t)) / 2) *
      ((n * (j_s + j_t)) % 2 ? std::sqrt(0.5) : 1.0);

  std::vector<int> m(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < lat.total(); ++i) {
    lat.decode(i, m.data());
    cplx w(norm);
    bool zero = false;
    std::size_t r = 0;
    for (int a = 0; a < n; ++a) {
      const double xi = kTwoPi * m[a];
      const cplx ws = window.symbol(eps_bit(eps_s, a), std::ldexp(xi, -j_s));
      if (ws == cplx(0.0)) {
        zero = true;
        break;
      }
      const cplx wt = window.symbol(eps_bit(eps_t, a), std::ldexp(xi, -j_t));
      if (wt == cplx(0.0)) {
        zero = true;
        break;
      }
      w *= ws * std::conj(wt);
      int res = m[a] % count;
      if (res < 0) res += count;
      r = r * count + static_cast<std::size_t>(res);
    }
    if (zero) continue;
    w *= heat_multiplier(physical_freq_sq(m.data(), n), t);
    folded[r] += w;
    peak = std::max(peak, std::abs(w));
  }
  if (peak < 1e-300) return table;

  std::vector<int> dims(n, count);
  fft(folded, dims, +1);
  table.values = std::move(folded);
  table.vanishes = false;
  return table;
}

}  // namespace

double verify_transfer(const SpectralField& a, const MeyerWindow& window,
                       double t, int top_level) {
  const FrequencyLattice& lat = a.lattice();
  const int n = lat.dim();
  const WaveletCoefficients statics = analyze(a, window, 0, top_level);
  const WaveletCoefficients direct =
      analyze_parameter(heat_semigroup(a, t), window, t, top_level);
  const int j_t = direct.base_level;

  // Source bands: static scaling band at 0 plus every detail band.
  std::vector<std::pair<int, int>> sources;
  sources.push_back({0, 0});
  for (int j = 0; j <= top_level; ++j)
    for (int eps = 1; eps < (1 << n); ++eps) sources.push_back({eps, j});

  double worst = 0.0;
  std::vector<int> kt(n), ks(n);

  auto accumulate_target = [&](int eps_t, int level_t,
                               const std::vector<cplx>& direct_band) {
    const std::size_t count_t = translations_per_level(n, level_t);
    std::vector<cplx> rebuilt(count_t, cplx(0.0));
    for (const auto& [eps_s, level_s] : sources) {
      const PairTable table =
          evolution_pair_table(lat, window, t, eps_s, level_s, eps_t, level_t);
      if (table.vanishes) continue;
      const int count_J = 1 << table.J;
      const std::vector<cplx>& src =
          eps_s == 0 ? statics.scaling : statics.detail_band(level_s, eps_s);
      const std::size_t count_s = translations_per_level(n, level_s);
      for (std::size_t it = 0; it < count_t; ++it) {
        k_decode(it, n, level_t, kt.data());
        cplx sum(0.0);
        for (std::size_t is = 0; is < count_s; ++is) {
          if (src[is] == cplx(0.0)) continue;
          k_decode(is, n, level_s, ks.data());
          std::size_t d = 0;
          for (int x = 0; x < n; ++x) {
            int delta = (kt[x] << (table.J - level_t)) -
                        (ks[x] << (table.J - level_s));
            delta %= count_J;
            if (delta < 0) delta += count_J;
            d = d * count_J + static_cast<std::size_t>(delta);
          }
          sum += src[is] * table.values[d];
        }
        rebuilt[it] += sum;
      }
    }
    for (std::size_t it = 0; it < count_t; ++it)
      worst = std::max(worst, std::abs(rebuilt[it] - direct_band[it]));
  };

  accumulate_target(0, j_t, direct.scaling);
  for (int j = j_t; j <= top_level; ++j)
    for (int eps = 1; eps < (1 << n); ++eps)
      accumulate_target(eps, j, direct.detail_band(j, eps));
  return worst;
}

std::pair<DecayFit, DecayFit> verify_heat_decay(const MeyerWindow& window,
                                                const FrequencyLattice& lattice,
                                                std::uint64_t seed, int count) {
  if (count <= 0)
    throw std::invalid_argument("verify_heat_decay: empty ensemble");
  return {fit_decay("heat-coefficient-detail", window, lattice, seed, count),
          fit_decay("heat-coefficient-scaling", window, lattice, seed + 1, count)};
}

EmbeddingResult embedding_experiment(const MeyerWindow& window,
                                     const FrequencyLattice& lattice,
                                     std::uint64_t seed, int count, double p,
                                     double m, int shell_lo, int shell_hi,
                                     int top_level, int content_resolution) {
  if (count <= 0)
    throw std::invalid_argument("embedding_experiment: empty ensemble");
  if (!(p > lattice.dim()))
    throw std::invalid_argument("embedding_experiment: requires p > n");
  if (!(m > 0.0))
    throw std::invalid_argument("embedding_experiment: requires m > 0");

  Rng rng(seed);
  EmbeddingResult result;
  result.resolution = lattice.size();
  const FrequencyLattice content(
      lattice.dim(),
      content_resolution < 0 ? lattice.size() : content_resolution);
  if (top_level > admissible_level_max(content))
    throw std::invalid_argument(
        "embedding_experiment: top level exceeds the content lattice");
  const double s = static_cast<double>(lattice.dim()) / p - 1.0;
  for (int member = 0; member < count; ++member) {
    SpectralField f = random_detail_field(content, window, rng, 0, top_level);
    if (content.size() != lattice.size()) f = embed_field(f, lattice);
    const double besov = besov_norm(analyze(f, window, 0, top_level), s, p, p);
    if (besov <= 0.0) continue;

    const HeatTrajectory traj =
        make_heat_trajectory(f, shell_lo, shell_hi, 4);
    const NormReport report = ypm_norm(traj.sampler(), window, p, m, shell_lo,
                                       shell_hi, top_level);
    EmbeddingRow row;
    row.member = static_cast<std::uint64_t>(member);
    row.besov = besov;
    row.trajectory_norm = std::max(report.h0, report.hm);
    row.ratio = row.trajectory_norm / besov;
    result.constant = std::max(result.constant, row.ratio);
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace pmns

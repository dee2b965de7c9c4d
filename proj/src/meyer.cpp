#include "pmns/meyer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pmns/fft.hpp"

namespace pmns {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLow = 2.0 * kPi / 3.0;
constexpr double kHigh = 4.0 * kPi / 3.0;
}  // namespace

double MeyerWindow::quartic_ramp(double x) {
  return x * x * x * x * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

MeyerWindow::MeyerWindow(Ramp ramp) : ramp_(std::move(ramp)) {
  if (!ramp_) throw std::invalid_argument("MeyerWindow: null ramp");
  if (std::abs(ramp_(0.0)) > 1e-12 || std::abs(ramp_(1.0) - 1.0) > 1e-12)
    throw std::invalid_argument("MeyerWindow: ramp endpoints must be 0 and 1");
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    if (std::abs(ramp_(x) + ramp_(1.0 - x) - 1.0) > 1e-12)
      throw std::invalid_argument(
          "MeyerWindow: ramp violates nu(x) + nu(1-x) = 1; the partition of "
          "unity would fail");
  }
}

double MeyerWindow::scaling_symbol(double xi) const {
  const double a = std::abs(xi);
  if (a <= kLow) return 1.0;
  if (a >= kHigh) return 0.0;
  const double u = a * (3.0 / (2.0 * kPi)) - 1.0;  // in (0,1)
  return std::cos(0.5 * kPi * ramp_(u));
}

double MeyerWindow::annulus_symbol(double xi) const {
  const double lo = scaling_symbol(0.5 * xi);
  const double hi = scaling_symbol(xi);
  const double d = lo * lo - hi * hi;
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

cplx MeyerWindow::wavelet_symbol(double xi) const {
  const double mag = annulus_symbol(xi);
  if (mag == 0.0) return cplx(0.0);
  return mag * std::polar(1.0, -0.5 * xi);
}

MeyerWindow build_window(MeyerWindow::Ramp ramp) {
  return MeyerWindow(std::move(ramp));
}

int admissible_level_max(const FrequencyLattice& lattice) {
  // Detail windows vanish for |m| >= (4/3) 2^j; require that band inside the
  // lattice: (4/3) 2^j <= M/2.
  int j = 0;
  while ((std::int64_t{4} << (j + 1)) <= std::int64_t{3} * lattice.nyquist()) ++j;
  return j;
}

namespace {

double physical_of_int(int m) { return kTwoPi * static_cast<double>(m); }

// 2^{-n j / 2}
double level_norm(int dim, int level) {
  const int e = dim * level;
  return std::ldexp(1.0, -(e / 2)) * (e % 2 ? std::sqrt(0.5) : 1.0);
}

}  // namespace

WaveletAtom atom_spectrum(const MeyerWindow& window, int eps, int level,
                          const std::vector<int>& shift,
                          const FrequencyLattice& lattice) {
  const int n = lattice.dim();
  if (eps < 0 || eps >= (1 << n))
    throw std::invalid_argument("atom_spectrum: bad band selector");
  const int max_level = admissible_level_max(lattice);
  if (level < 0 || level > max_level)
    throw std::invalid_argument(
        "atom_spectrum: level " + std::to_string(level) +
        " not admissible; maximal admissible level is " +
        std::to_string(max_level));
  if (static_cast<int>(shift.size()) != n)
    throw std::invalid_argument("atom_spectrum: shift size mismatch");

  WaveletAtom atom{SpectralField(lattice)};
  atom.eps = eps;
  atom.level = level;
  atom.shift = shift;

  std::vector<std::vector<cplx>> tables(n);
  for (int a = 0; a < n; ++a) {
    std::vector<cplx> t(lattice.size());
    const double scale = std::ldexp(1.0, -level);
    for (int i = 0; i < lattice.size(); ++i) {
      const double xi = physical_of_int(lattice.freq_of_index(i)) * scale;
      t[i] = window.symbol(eps_bit(eps, a), xi);
    }
    tables[a] = std::move(t);
  }

  const double norm = level_norm(n, level);
  const int count = 1 << level;
  std::vector<int> m(n);
  for (std::size_t i = 0; i < atom.spectrum.size(); ++i) {
    lattice.decode(i, m.data());
    cplx v(norm);
    double phase = 0.0;
    for (int a = 0; a < n; ++a) {
      const cplx w = tables[a][lattice.index_of_freq(m[a])];
      if (w == cplx(0.0)) {
        v = cplx(0.0);
        break;
      }
      v *= w;
      phase += static_cast<double>(shift[a]) * m[a];
    }
    if (v != cplx(0.0)) v *= std::polar(1.0, -kTwoPi * phase / count);
    atom.spectrum[i] = v;
  }
  return atom;
}

double WaveletCoefficients::total_energy() const {
  double s = 0.0;
  for (const cplx& v : scaling) s += std::norm(v);
  for (const auto& lvl : detail)
    for (const auto& band : lvl)
      for (const cplx& v : band) s += std::norm(v);
  return s;
}

double WaveletCoefficients::detail_energy(int j) const {
  double s = 0.0;
  for (const auto& band : detail[j - base_level])
    for (const cplx& v : band) s += std::norm(v);
  return s;
}

WaveletCoefficients& WaveletCoefficients::operator+=(const WaveletCoefficients& o) {
  if (dim != o.dim || base_level != o.base_level || top_level != o.top_level)
    throw std::invalid_argument("WaveletCoefficients: layout mismatch");
  for (std::size_t i = 0; i < scaling.size(); ++i) scaling[i] += o.scaling[i];
  for (std::size_t l = 0; l < detail.size(); ++l)
    for (std::size_t e = 0; e < detail[l].size(); ++e)
      for (std::size_t k = 0; k < detail[l][e].size(); ++k)
        detail[l][e][k] += o.detail[l][e][k];
  return *this;
}

ParameterIndexSet parameter_index(double t, int top_level) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("parameter_index: time must be positive");
  int j = static_cast<int>(std::ceil(-0.5 * std::log2(t)));
  while (std::ldexp(t, 2 * j) < 1.0) ++j;
  while (j - 1 > -512 && std::ldexp(t, 2 * (j - 1)) >= 1.0) --j;

  ParameterIndexSet idx;
  idx.t = t;
  idx.raw_level = j;
  idx.top_level = top_level;
  idx.level = std::min(std::max(j, 0), top_level);
  idx.truncated = idx.level != j;
  return idx;
}

std::vector<cplx> band_coefficients(const SpectralField& f,
                                    const MeyerWindow& window, int eps, int j) {
  const FrequencyLattice& lat = f.lattice();
  const int n = lat.dim();
  const int max_level = admissible_level_max(lat);
  if (j < 0 || j > max_level)
    throw std::invalid_argument(
        "band_coefficients: level " + std::to_string(j) +
        " not admissible; maximal admissible level is " +
        std::to_string(max_level));

  std::vector<std::vector<cplx>> tables(n);
  for (int a = 0; a < n; ++a) {
    std::vector<cplx> t(lat.size());
    const double scale = std::ldexp(1.0, -j);
    for (int i = 0; i < lat.size(); ++i) {
      const double xi = physical_of_int(lat.freq_of_index(i)) * scale;
      t[i] = std::conj(window.symbol(eps_bit(eps, a), xi));
    }
    tables[a] = std::move(t);
  }

  const int count = 1 << j;
  const std::size_t folded_total = translations_per_level(n, j);
  std::vector<cplx> folded(folded_total, cplx(0.0));
  const double norm = level_norm(n, j);

  std::vector<int> m(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cplx v = f[i];
    if (v == cplx(0.0)) continue;
    lat.decode(i, m.data());
    cplx w(norm);
    bool zero = false;
    std::size_t r = 0;
    for (int a = 0; a < n; ++a) {
      const cplx t = tables[a][lat.index_of_freq(m[a])];
      if (t == cplx(0.0)) {
        zero = true;
        break;
      }
      w *= t;
      int res = m[a] % count;
      if (res < 0) res += count;
      r = r * count + static_cast<std::size_t>(res);
    }
    if (!zero) folded[r] += v * w;
  }

  std::vector<int> dims(n, count);
  fft(folded, dims, +1);
  return folded;
}

void add_band_synthesis(SpectralField& out, const MeyerWindow& window, int eps,
                        int j, const std::vector<cplx>& coeffs) {
  const FrequencyLattice& lat = out.lattice();
  const int n = lat.dim();
  if (coeffs.size() != translations_per_level(n, j))
    throw std::invalid_argument("add_band_synthesis: coefficient count mismatch");

  const int count = 1 << j;
  std::vector<cplx> spread = coeffs;
  std::vector<int> dims(n, count);
  fft(spread, dims, -1);  // S_r = sum_k a_k e^{-2 pi i k.r / 2^j}

  std::vector<std::vector<cplx>> tables(n);
  for (int a = 0; a < n; ++a) {
    std::vector<cplx> t(lat.size());
    const double scale = std::ldexp(1.0, -j);
    for (int i = 0; i < lat.size(); ++i) {
      const double xi = physical_of_int(lat.freq_of_index(i)) * scale;
      t[i] = window.symbol(eps_bit(eps, a), xi);
    }
    tables[a] = std::move(t);
  }

  const double norm = level_norm(n, j);
  std::vector<int> m(n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    lat.decode(i, m.data());
    cplx w(norm);
    bool zero = false;
    std::size_t r = 0;
    for (int a = 0; a < n; ++a) {
      const cplx t = tables[a][lat.index_of_freq(m[a])];
      if (t == cplx(0.0)) {
        zero = true;
        break;
      }
      w *= t;
      int res = m[a] % count;
      if (res < 0) res += count;
      r = r * count + static_cast<std::size_t>(res);
    }
    if (!zero) out[i] += w * spread[r];
  }
}

WaveletCoefficients analyze(const SpectralField& f, const MeyerWindow& window,
                            int base_level, int top_level, double leak_tol) {
  const FrequencyLattice& lat = f.lattice();
  const int n = lat.dim();
  const int max_level = admissible_level_max(lat);
  if (base_level < 0 || base_level > top_level || top_level > max_level)
    throw std::invalid_argument(
        "analyze: level range [" + std::to_string(base_level) + ", " +
        std::to_string(top_level) + "] not admissible; maximal level is " +
        std::to_string(max_level));

  WaveletCoefficients c;
  c.dim = n;
  c.base_level = base_level;
  c.top_level = top_level;
  c.scaling = band_coefficients(f, window, 0, base_level);
  c.detail.resize(top_level - base_level + 1);
  for (int j = base_level; j <= top_level; ++j) {
    auto& lvl = c.detail[j - base_level];
    lvl.resize(c.eps_count());
    for (int eps = 1; eps < (1 << n); ++eps)
      lvl[eps - 1] = band_coefficients(f, window, eps, j);
  }

  const double total = f.l2_norm();
  if (total > 0.0) {
    const int bound = representable_band(top_level);
    double outside = 0.0;
    std::vector<int> m(n);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] == cplx(0.0)) continue;
      lat.decode(i, m.data());
      for (int a = 0; a < n; ++a) {
        if (std::abs(m[a]) > bound) {
          outside += std::norm(f[i]);
          break;
        }
      }
    }
    if (std::sqrt(outside) > leak_tol * total)
      throw std::domain_error(
          "analyze: input carries relative energy " +
          std::to_string(std::sqrt(outside) / total) +
          " outside the representable band (leakage)");
  }
  return c;
}

SpectralField synthesize(const WaveletCoefficients& coeffs,
                         const MeyerWindow& window,
                         const FrequencyLattice& lattice) {
  if (coeffs.dim != lattice.dim())
    throw std::invalid_argument("synthesize: dimension mismatch");
  const int max_level = admissible_level_max(lattice);
  if (coeffs.top_level > max_level)
    throw std::invalid_argument("synthesize: coefficient levels not admissible");

  SpectralField out(lattice);
  add_band_synthesis(out, window, 0, coeffs.base_level, coeffs.scaling);
  for (int j = coeffs.base_level; j <= coeffs.top_level; ++j)
    for (int eps = 1; eps < (1 << coeffs.dim); ++eps)
      add_band_synthesis(out, window, eps, j, coeffs.detail_band(j, eps));
  return out;
}

WaveletCoefficients analyze_parameter(const SpectralField& f,
                                      const MeyerWindow& window, double t,
                                      int top_level, int cut_offset,
                                      double leak_tol) {
  const ParameterIndexSet idx = parameter_index(t, top_level);
  const int base =
      std::min(std::max(idx.level + cut_offset, 0), top_level);
  return analyze(f, window, base, top_level, leak_tol);
}

}  // namespace pmns

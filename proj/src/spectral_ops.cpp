#include "pmns/spectral_ops.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pmns/fft.hpp"

namespace pmns {

SpectralField heat_semigroup(const SpectralField& f, double t) {
  if (t < 0.0) throw std::domain_error("heat_semigroup: negative time");
  if (!std::isfinite(t)) throw std::domain_error("heat_semigroup: time not finite");
  const FrequencyLattice& lat = f.lattice();
  SpectralField out = f;
  std::vector<int> m(lat.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    lat.decode(i, m.data());
    out[i] *= heat_multiplier(physical_freq_sq(m.data(), lat.dim()), t);
  }
  return out;
}

VectorField heat_semigroup(const VectorField& v, double t) {
  std::vector<SpectralField> comps;
  comps.reserve(v.dim());
  for (int a = 0; a < v.dim(); ++a) comps.push_back(heat_semigroup(v[a], t));
  return VectorField(std::move(comps));
}

std::vector<std::vector<double>> leray_symbol(const std::vector<int>& m) {
  const int n = static_cast<int>(m.size());
  double msq = 0.0;
  for (int a = 0; a < n; ++a) msq += static_cast<double>(m[a]) * m[a];
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double v = (a == b) ? 1.0 : 0.0;
      if (msq > 0.0) v -= static_cast<double>(m[a]) * m[b] / msq;
      p[a][b] = v;
    }
  }
  return p;
}

VectorField leray_project(const VectorField& v) {
  const FrequencyLattice& lat = v.lattice();
  const int n = lat.dim();
  VectorField out(lat);
  std::vector<int> m(n);
  std::vector<cplx> in(n);
  for (std::size_t i = 0; i < lat.total(); ++i) {
    lat.decode(i, m.data());
    double msq = 0.0;
    for (int a = 0; a < n; ++a) msq += static_cast<double>(m[a]) * m[a];
    if (msq == 0.0) {
      // Symbol singular at the zero mode; constants are divergence-free.
      for (int a = 0; a < n; ++a) out[a][i] = v[a][i];
      continue;
    }
    for (int a = 0; a < n; ++a) in[a] = v[a][i];
    for (int a = 0; a < n; ++a) {
      cplx s(0.0);
      for (int b = 0; b < n; ++b) {
        const double p = (a == b ? 1.0 : 0.0) -
                         static_cast<double>(m[a]) * m[b] / msq;
        s += p * in[b];
      }
      out[a][i] = s;
    }
  }
  return out;
}

SpectralField derivative(const SpectralField& f, const std::vector<int>& alpha) {
  const FrequencyLattice& lat = f.lattice();
  if (static_cast<int>(alpha.size()) != lat.dim())
    throw std::invalid_argument("derivative: multi-index size mismatch");
  int order = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("derivative: negative order");
    order += a;
  }
  if (order > 5)
    throw std::invalid_argument("derivative: orders above 5 are not supported");
  SpectralField out = f;
  out.set_real_valued(false);
  std::vector<int> m(lat.dim());
  std::vector<double> xi(lat.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    lat.decode(i, m.data());
    for (int a = 0; a < lat.dim(); ++a) xi[a] = physical_freq(m[a]);
    out[i] *= derivative_symbol(xi, alpha);
  }
  return out;
}

std::vector<cplx> to_physical(const SpectralField& f, int pad) {
  if (pad < 1) throw std::invalid_argument("to_physical: pad must be >= 1");
  const FrequencyLattice& lat = f.lattice();
  const int n = lat.dim();
  const int big = pad * lat.size();
  std::vector<int> dims(n, big);
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(big);
  std::vector<cplx> buf(total, cplx(0.0));
  std::vector<int> m(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cplx v = f[i];
    if (v == cplx(0.0)) continue;
    lat.decode(i, m.data());
    std::size_t flat = 0;
    for (int a = 0; a < n; ++a) {
      const int idx = m[a] >= 0 ? m[a] : m[a] + big;
      flat = flat * big + static_cast<std::size_t>(idx);
    }
    buf[flat] = v;
  }
  fft(buf, dims, +1);
  return buf;
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  f.require_same_lattice(g);
  const FrequencyLattice& lat = f.lattice();
  const int n = lat.dim();
  const int quarter = lat.size() / 4;
  for (const SpectralField* h : {&f, &g}) {
    const auto bound = h->support_bound();
    for (int a = 0; a < n; ++a)
      if (bound[a] >= quarter)
        throw std::domain_error(
            "pointwise_product: input not band-limited to |m| < M/4; the "
            "product would alias");
  }

  const int big = 2 * lat.size();
  std::vector<int> dims(n, big);
  std::vector<cplx> fa = to_physical(f, 2);
  std::vector<cplx> ga = to_physical(g, 2);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= ga[i];
  fft(fa, dims, -1);
  const double scale = 1.0 / static_cast<double>(fa.size());

  SpectralField out(lat, f.real_valued() && g.real_valued());
  std::vector<int> m(n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    lat.decode(i, m.data());
    std::size_t flat = 0;
    for (int a = 0; a < n; ++a) {
      const int idx = m[a] >= 0 ? m[a] : m[a] + big;
      flat = flat * big + static_cast<std::size_t>(idx);
    }
    out[i] = fa[flat] * scale;
  }
  return out;
}

double band_limit(SpectralField& f, int bound) {
  const FrequencyLattice& lat = f.lattice();
  std::vector<int> m(lat.dim());
  double removed = 0.0, total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    total += std::norm(f[i]);
    lat.decode(i, m.data());
    for (int a = 0; a < lat.dim(); ++a) {
      if (std::abs(m[a]) > bound) {
        removed += std::norm(f[i]);
        f[i] = cplx(0.0);
        break;
      }
    }
  }
  return total > 0.0 ? std::sqrt(removed / total) : 0.0;
}

double band_limit(VectorField& f, int bound) {
  double worst = 0.0;
  for (int a = 0; a < f.dim(); ++a) worst = std::max(worst, band_limit(f[a], bound));
  return worst;
}

SpectralField embed_field(const SpectralField& f, const FrequencyLattice& finer) {
  const FrequencyLattice& lat = f.lattice();
  if (finer.dim() != lat.dim() || finer.size() < lat.size())
    throw std::invalid_argument("embed_field: target lattice not finer");
  SpectralField out(finer);
  std::vector<int> m(lat.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == cplx(0.0)) continue;
    lat.decode(i, m.data());
    out.set_freq(m.data(), f[i]);
  }
  out.set_real_valued(f.real_valued());
  return out;
}

}  // namespace pmns

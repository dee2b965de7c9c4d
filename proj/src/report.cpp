#include "pmns/report.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace pmns {

json to_json(const NormReport& report) {
  json shells = json::array();
  for (const auto& b : report.shells) {
    shells.push_back({{"shell", b.shell},
                      {"scaling_block", b.scaling_block},
                      {"detail_blocks", b.detail_blocks}});
  }
  return json{{"dim", report.dim},
              {"p", report.p},
              {"m", report.m},
              {"shell_lo", report.shell_lo},
              {"shell_hi", report.shell_hi},
              {"top_level", report.top_level},
              {"low_m_flagged", report.low_m_flagged},
              {"h0", report.h0},
              {"hm", report.hm},
              {"sup_besov", report.sup_besov},
              {"tail_fraction", report.tail_fraction},
              {"shells", shells}};
}

json to_json(const DecayFit& fit) {
  json j{{"estimate_id", fit.estimate_id},
         {"constant", fit.constant},
         {"sample_count", fit.sample_count},
         {"resolution", fit.resolution},
         {"residual_rms", fit.residual_rms},
         {"certified", fit.certified}};
  if (fit.has_rate) j["rate"] = fit.rate;
  if (fit.has_poly) j["poly_order"] = fit.poly_order;
  if (fit.trend_ratio > 0.0) j["trend_ratio"] = fit.trend_ratio;
  return j;
}

json to_json(const SolverConfig& cfg) {
  return json{{"p", cfg.p},
              {"m", cfg.m},
              {"shell_lo", cfg.shell_lo},
              {"shell_hi", cfg.shell_hi},
              {"samples_per_shell", cfg.samples_per_shell},
              {"top_level", cfg.top_level},
              {"max_iterations", cfg.max_iterations},
              {"increment_tol", cfg.increment_tol},
              {"smallness_threshold", cfg.smallness_threshold},
              {"allow_low_m", cfg.allow_low_m}};
}

json to_json(const SolverState& state) {
  return json{{"config", to_json(state.cfg)},
              {"resolution", state.resolution},
              {"top_level", state.top_level},
              {"mesh_size", state.mesh.size()},
              {"iterations", state.iterations},
              {"status", state.status},
              {"initial_besov", state.initial_besov},
              {"smallness_warning", state.smallness_warning},
              {"heat_norm", state.heat_norm},
              {"increments", state.increments},
              {"ratios", state.ratios},
              {"truncation_tail", state.truncation_tail},
              {"residual", state.residual},
              {"divergence", state.divergence}};
}

json to_json(const OperatorNormResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"member", r.member},
                    {"family", r.family},
                    {"index", {r.index[0], r.index[1], r.index[2]}},
                    {"ratio", r.ratio}});
  }
  return json{{"constant", result.constant},
              {"skipped", result.skipped},
              {"resolution", result.resolution},
              {"rows", rows}};
}

json to_json(const EmbeddingResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"member", r.member},
                    {"ratio", r.ratio},
                    {"besov", r.besov},
                    {"trajectory_norm", r.trajectory_norm}});
  }
  return json{{"constant", result.constant},
              {"resolution", result.resolution},
              {"rows", rows}};
}

void write_field_csv(std::ostream& os, const SpectralField& f) {
  const FrequencyLattice& lat = f.lattice();
  std::vector<int> m(lat.dim());
  os.precision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    lat.decode(i, m.data());
    for (int a = 0; a < lat.dim(); ++a) os << m[a] << ',';
    os << f[i].real() << ',' << f[i].imag() << '\n';
  }
}

SpectralField read_field_csv(std::istream& is, const FrequencyLattice& lattice) {
  SpectralField f(lattice);
  std::string line;
  std::vector<int> m(lattice.dim());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (int a = 0; a < lattice.dim(); ++a) {
      std::getline(ss, cell, ',');
      m[a] = std::stoi(cell);
    }
    std::getline(ss, cell, ',');
    const double re = std::stod(cell);
    std::getline(ss, cell, ',');
    const double im = std::stod(cell);
    f.set_freq(m.data(), cplx(re, im));
  }
  return f;
}

void write_field_binary(std::ostream& os, const SpectralField& f) {
  const std::int32_t dim = f.lattice().dim();
  const std::int32_t size = f.lattice().size();
  os.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  os.write(reinterpret_cast<const char*>(&size), sizeof(size));
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.size() * sizeof(cplx)));
}

void write_coefficients_csv(std::ostream& os, const WaveletCoefficients& c) {
  os.precision(17);
  std::vector<int> k(c.dim);
  for (std::size_t i = 0; i < c.scaling.size(); ++i) {
    k_decode(i, c.dim, c.base_level, k.data());
    os << 0 << ',' << c.base_level;
    for (int a = 0; a < c.dim; ++a) os << ',' << k[a];
    os << ',' << c.scaling[i].real() << ',' << c.scaling[i].imag() << '\n';
  }
  for (int j = c.base_level; j <= c.top_level; ++j) {
    for (int eps = 1; eps < (1 << c.dim); ++eps) {
      const auto& band = c.detail_band(j, eps);
      for (std::size_t i = 0; i < band.size(); ++i) {
        k_decode(i, c.dim, j, k.data());
        os << eps << ',' << j;
        for (int a = 0; a < c.dim; ++a) os << ',' << k[a];
        os << ',' << band[i].real() << ',' << band[i].imag() << '\n';
      }
    }
  }
}

void write_term_energy_csv(std::ostream& os, const ParaproductTerms& terms) {
  os.precision(17);
  os << "term,l2_energy\n";
  for (const auto& term : terms.terms)
    os << '"' << term.label << '"' << ',' << term.field.l2_norm() << '\n';
  os << "\"product\"," << terms.product.l2_norm() << '\n';
  os << "\"completeness_residual\"," << terms.completeness_residual << '\n';
}

void write_increments_csv(std::ostream& os, const SolverState& state) {
  os.precision(17);
  os << "iteration,increment,ratio\n";
  for (std::size_t i = 0; i < state.increments.size(); ++i) {
    os << (i + 1) << ',' << state.increments[i] << ',';
    if (i >= 1 && i - 1 < state.ratios.size())
      os << state.ratios[i - 1];
    else
      os << "";
    os << '\n';
  }
}

void write_blocks_csv(std::ostream& os, const NormReport& report) {
  os.precision(17);
  os << "shell,scaling_block";
  for (int j = 0; j <= report.top_level; ++j) os << ",detail_j" << j;
  os << '\n';
  for (const auto& b : report.shells) {
    os << b.shell << ',' << b.scaling_block;
    for (int j = 0; j < b.shell; ++j) os << ',';
    for (double v : b.detail_blocks) os << ',' << v;
    os << '\n';
  }
}

}  // namespace pmns

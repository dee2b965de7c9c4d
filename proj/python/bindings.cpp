#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pmns/ensembles.hpp"
#include "pmns/heat_flow.hpp"
#include "pmns/paraproduct.hpp"
#include "pmns/report.hpp"
#include "pmns/solver.hpp"
#include "pmns/spectral_ops.hpp"
#include "pmns/suites.hpp"

namespace py = pybind11;
using namespace pmns;

namespace {

py::array_t<cplx> field_to_array(const SpectralField& f) {
  const FrequencyLattice& lat = f.lattice();
  std::vector<py::ssize_t> shape(lat.dim(), lat.size());
  py::array_t<cplx> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

SpectralField field_from_array(const FrequencyLattice& lat,
                               py::array_t<cplx, py::array::c_style |
                                                     py::array::forcecast> arr,
                               bool real_valued) {
  if (arr.size() != static_cast<py::ssize_t>(lat.total()))
    throw std::invalid_argument("array size does not match the lattice");
  std::vector<cplx> values(arr.data(), arr.data() + arr.size());
  return SpectralField(lat, std::move(values), real_valued);
}

std::string dump(const json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_pmns, mod) {
  mod.doc() = "wavelet toolkit for mild Navier-Stokes solutions on the torus";

  py::class_<FrequencyLattice>(mod, "FrequencyLattice")
      .def(py::init<int, int>(), py::arg("dim"), py::arg("size"))
      .def_property_readonly("dim", &FrequencyLattice::dim)
      .def_property_readonly("size", &FrequencyLattice::size)
      .def("total", &FrequencyLattice::total);

  py::class_<SpectralField>(mod, "SpectralField")
      .def(py::init([](const FrequencyLattice& lat) { return SpectralField(lat); }))
      .def_property_readonly("lattice", &SpectralField::lattice)
      .def("l2_norm", &SpectralField::l2_norm)
      .def("max_abs", &SpectralField::max_abs)
      .def("to_array", &field_to_array);

  mod.def("field_from_array", &field_from_array, py::arg("lattice"),
          py::arg("coefficients"), py::arg("real_valued") = false);

  py::class_<MeyerWindow>(mod, "MeyerWindow")
      .def("scaling_symbol", &MeyerWindow::scaling_symbol)
      .def("annulus_symbol", &MeyerWindow::annulus_symbol)
      .def("wavelet_symbol", &MeyerWindow::wavelet_symbol);
  mod.def("build_window", []() { return build_window(); });
  mod.def("build_window",
          [](std::function<double(double)> ramp) { return build_window(ramp); });

  mod.def("admissible_level_max", &admissible_level_max);
  mod.def("product_safe_level_max", &product_safe_level_max);
  mod.def("representable_band", &representable_band);

  mod.def("heat_semigroup",
          py::overload_cast<const SpectralField&, double>(&heat_semigroup));
  mod.def("derivative", &derivative);
  mod.def("pointwise_product", &pointwise_product);
  mod.def("leray_project", [](const std::vector<SpectralField>& comps) {
    const VectorField out = leray_project(VectorField(comps));
    std::vector<SpectralField> fields;
    for (int a = 0; a < out.dim(); ++a) fields.push_back(out[a]);
    return fields;
  });
  mod.def("divergence_ratio", [](const std::vector<SpectralField>& comps) {
    return VectorField(comps).divergence_ratio();
  });

  py::class_<WaveletAtom>(mod, "WaveletAtom")
      .def_readonly("eps", &WaveletAtom::eps)
      .def_readonly("level", &WaveletAtom::level)
      .def_readonly("shift", &WaveletAtom::shift)
      .def_readonly("spectrum", &WaveletAtom::spectrum);
  mod.def("atom_spectrum", &atom_spectrum);

  py::class_<WaveletCoefficients>(mod, "WaveletCoefficients")
      .def_readonly("dim", &WaveletCoefficients::dim)
      .def_readonly("base_level", &WaveletCoefficients::base_level)
      .def_readonly("top_level", &WaveletCoefficients::top_level)
      .def("total_energy", &WaveletCoefficients::total_energy)
      .def("scaling",
           [](const WaveletCoefficients& c) {
             return py::array_t<cplx>(
                 static_cast<py::ssize_t>(c.scaling.size()), c.scaling.data());
           })
      .def("detail_band", [](const WaveletCoefficients& c, int j, int eps) {
        const auto& band = c.detail_band(j, eps);
        return py::array_t<cplx>(static_cast<py::ssize_t>(band.size()),
                                 band.data());
      });

  py::class_<ParameterIndexSet>(mod, "ParameterIndexSet")
      .def_readonly("t", &ParameterIndexSet::t)
      .def_readonly("level", &ParameterIndexSet::level)
      .def_readonly("raw_level", &ParameterIndexSet::raw_level)
      .def_readonly("truncated", &ParameterIndexSet::truncated)
      .def_readonly("top_level", &ParameterIndexSet::top_level);
  mod.def("parameter_index", &parameter_index);

  mod.def("analyze", &analyze, py::arg("field"), py::arg("window"),
          py::arg("base_level"), py::arg("top_level"),
          py::arg("leak_tol") = 1e-8);
  mod.def("synthesize", &synthesize);
  mod.def("analyze_parameter", &analyze_parameter, py::arg("field"),
          py::arg("window"), py::arg("t"), py::arg("top_level"),
          py::arg("cut_offset") = 0, py::arg("leak_tol") = 1e-8);

  mod.def("besov_norm", &besov_norm);
  mod.def("besov_scaling_term", &besov_scaling_term);

  mod.def("level_project",
          [](const SpectralField& f, const MeyerWindow& w, int j,
             const std::string& kind, int eps) {
            ProjectionKind k = kind == "P"   ? ProjectionKind::scaling
                               : kind == "Q" ? ProjectionKind::detail_sum
                                             : ProjectionKind::detail_band;
            return level_project(f, w, j, k, eps);
          },
          py::arg("field"), py::arg("window"), py::arg("level"),
          py::arg("kind"), py::arg("eps") = -1);

  mod.def("paraproduct_decompose",
          [](const SpectralField& u, const SpectralField& v,
             const MeyerWindow& w, double t, int top) {
            const ParaproductTerms terms = paraproduct_decompose(u, v, w, t, top);
            py::list out;
            for (const auto& term : terms.terms)
              out.append(py::make_tuple(term.label, term.field));
            return py::make_tuple(out, terms.product,
                                  terms.completeness_residual);
          });

  mod.def("random_field",
          [](const FrequencyLattice& lat, std::uint64_t seed, int top_level,
             bool real_valued) {
            Rng rng(seed);
            return random_band_limited_field(lat, rng, top_level, real_valued);
          });

  mod.def("heat_trajectory_norms",
          [](const SpectralField& a, const MeyerWindow& w, double p, double m,
             int shell_lo, int shell_hi, int top_level) {
            const HeatTrajectory traj =
                make_heat_trajectory(a, shell_lo, shell_hi, 4);
            return dump(to_json(ypm_norm(traj.sampler(), w, p, m, shell_lo,
                                         shell_hi, top_level)));
          });

  mod.def("fit_decay",
          [](const std::string& id, const MeyerWindow& w,
             const FrequencyLattice& lat, std::uint64_t seed, int count) {
            return dump(to_json(fit_decay(id, w, lat, seed, count)));
          });

  mod.def("initial_data_preset",
          [](const std::string& name, const MeyerWindow& w,
             const FrequencyLattice& lat, double target, double p,
             int atom_level, std::uint64_t seed) {
            const VectorField v =
                initial_data_preset(name, w, lat, target, p, atom_level, seed);
            std::vector<SpectralField> comps;
            for (int a = 0; a < v.dim(); ++a) comps.push_back(v[a]);
            return comps;
          });

  mod.def("picard_solve",
          [](const std::vector<SpectralField>& comps, const MeyerWindow& w,
             double p, double m, int shell_lo, int shell_hi,
             int samples_per_shell, int max_iterations) {
            SolverConfig cfg;
            cfg.p = p;
            cfg.m = m;
            cfg.shell_lo = shell_lo;
            cfg.shell_hi = shell_hi;
            cfg.samples_per_shell = samples_per_shell;
            cfg.max_iterations = max_iterations;
            return dump(to_json(picard_solve(VectorField(comps), w, cfg)));
          },
          py::arg("components"), py::arg("window"), py::arg("p") = 4.0,
          py::arg("m") = 1.0, py::arg("shell_lo") = 0, py::arg("shell_hi") = 1,
          py::arg("samples_per_shell") = 8, py::arg("max_iterations") = 8);

  mod.def("run_basis_suite", [](int dim, int resolution, std::uint64_t seed,
                                int gram_atoms) {
    BasisSuiteConfig cfg;
    cfg.dim = dim;
    cfg.resolution = resolution;
    cfg.seed = seed;
    cfg.gram_atoms = gram_atoms;
    return dump(run_basis_suite(cfg).to_json());
  });
}

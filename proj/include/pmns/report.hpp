#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "pmns/heat_flow.hpp"
#include "pmns/kernels.hpp"
#include "pmns/norms.hpp"
#include "pmns/paraproduct.hpp"
#include "pmns/solver.hpp"

namespace pmns {

using json = nlohmann::json;

json to_json(const NormReport& report);
json to_json(const DecayFit& fit);
json to_json(const SolverConfig& cfg);
json to_json(const SolverState& state);
json to_json(const OperatorNormResult& result);
json to_json(const EmbeddingResult& result);

// frequency tuple, real, imag
void write_field_csv(std::ostream& os, const SpectralField& f);
SpectralField read_field_csv(std::istream& is, const FrequencyLattice& lattice);
void write_field_binary(std::ostream& os, const SpectralField& f);

// eps, level, translation tuple, real, imag
void write_coefficients_csv(std::ostream& os, const WaveletCoefficients& c);

// term label, l2 energy
void write_term_energy_csv(std::ostream& os, const ParaproductTerms& terms);

// iteration, increment, ratio
void write_increments_csv(std::ostream& os, const SolverState& state);

// shell, scaling block, detail blocks...
void write_blocks_csv(std::ostream& os, const NormReport& report);

}  // namespace pmns

#include <sstream>

#include "doctest.h"
#include "pmns/ensembles.hpp"
#include "pmns/heat_flow.hpp"
#include "pmns/report.hpp"

using namespace pmns;

TEST_SUITE_BEGIN("report");

TEST_CASE("field csv round trip") {
  const FrequencyLattice lat(2, 32);
  Rng rng(121);
  const SpectralField f = random_band_limited_field(lat, rng, 2, true);
  std::stringstream ss;
  write_field_csv(ss, f);
  const SpectralField back = read_field_csv(ss, lat);
  CHECK((back - f).max_abs() <= 1e-16 * f.max_abs());
}

TEST_CASE("field binary dump carries the header and payload") {
  const FrequencyLattice lat(2, 32);
  SpectralField f(lat);
  std::vector<int> m{3, -2};
  f.set_freq(m.data(), cplx(0.5, -0.25));
  std::stringstream ss;
  write_field_binary(ss, f);
  const std::string blob = ss.str();
  CHECK(blob.size() == 8 + lat.total() * sizeof(cplx));
}

TEST_CASE("coefficients csv lists every band entry") {
  const FrequencyLattice lat(2, 32);
  const MeyerWindow w = build_window();
  const WaveletCoefficients c = analyze(SpectralField(lat), w, 0, 2);
  std::stringstream ss;
  write_coefficients_csv(ss, c);
  std::size_t lines = 0;
  std::string line;
  while (std::getline(ss, line)) ++lines;
  // scaling 1 + details: 3 bands x (1 + 4 + 16)
  CHECK(lines == 1 + 3 * (1 + 4 + 16));
}

TEST_CASE("norm report json carries the blocks") {
  const FrequencyLattice lat(2, 64);
  const MeyerWindow w = build_window();
  Rng rng(123);
  SpectralField f = random_detail_field(lat, w, rng, 0, 3);
  const HeatTrajectory traj = make_heat_trajectory(f, 0, 2, 4);
  const NormReport r = ypm_norm(traj.sampler(), w, 4.0, 1.0, 0, 2, 3);
  const json j = to_json(r);
  CHECK(j["h0"].get<double>() == r.h0);
  CHECK(j["hm"].get<double>() == r.hm);
  CHECK(j["shells"].size() == r.shells.size());
  std::stringstream blocks;
  write_blocks_csv(blocks, r);
  CHECK(blocks.str().find("shell,scaling_block") == 0);
}

TEST_CASE("decay fit json records the fitted parameters") {
  DecayFit fit;
  fit.estimate_id = "kernel-decay";
  fit.constant = 2.5;
  fit.certified = true;
  fit.trend_ratio = 0.4;
  const json j = to_json(fit);
  CHECK(j["estimate_id"] == "kernel-decay");
  CHECK(j["certified"] == true);
  CHECK(j.contains("trend_ratio"));
  CHECK_FALSE(j.contains("rate"));
}

TEST_SUITE_END();

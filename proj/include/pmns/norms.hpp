#pragma once

#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "pmns/meyer.hpp"

namespace pmns {

// A time mesh plus a field accessor.  The mesh must cover each requested
// dyadic shell 1 <= t 4^{j'} < 4 with at least `min_samples_per_shell`
// entries; the sup over a shell is realized as the max over those samples.
class TrajectorySampler {
 public:
  TrajectorySampler(std::vector<double> times,
                    std::function<SpectralField(double)> field_at);

  const std::vector<double>& times() const { return times_; }
  SpectralField at(double t) const { return field_at_(t); }

  std::vector<double> shell_times(int shell) const;

 private:
  std::vector<double> times_;
  std::function<SpectralField(double)> field_at_;
};

// Mesh with `samples_per_shell` geometric points in every shell of the range.
std::vector<double> shell_mesh(int shell_lo, int shell_hi, int samples_per_shell);

struct NormOptions {
  int min_samples_per_shell = 4;
  bool allow_low_p = false;   // p <= n is outside the well-posedness theorem
  int cut_offset = 0;         // scaling-band cut relative to j_t
  double leak_tol = 1e-8;
};

struct ShellBlocks {
  int shell = 0;                 // j'
  double scaling_block = 0.0;    // A^p_{j'}
  std::vector<double> detail_blocks;  // A^{p,m}_{j,j'} for j = j' .. top_level
};

// Weighted coefficient blocks of one dyadic shell.
ShellBlocks block_norms(const TrajectorySampler& traj, const MeyerWindow& window,
                        double p, double m, int shell, int top_level,
                        const NormOptions& opts = {});

struct NormReport {
  int dim = 0;
  double p = 0.0, m = 0.0;
  int shell_lo = 0, shell_hi = 0;
  int top_level = 0;
  bool low_m_flagged = false;  // m < 1: outside the main well-posedness range
  std::vector<ShellBlocks> shells;
  double h0 = 0.0;        // (sup_{j'} A^p_{j'})^{1/p}
  double hm = 0.0;        // sup_{j'} (sum_{j>=j'} A^{p,m}_{j,j'})^{1/p}
  double sup_besov = 0.0; // sup over mesh samples of the critical Besov norm
  std::vector<double> tail_fraction;  // top-level share of each shell's sum

  // Reassembles h0/hm from the stored blocks (bookkeeping identity).
  double recompute_h0() const;
  double recompute_hm() const;
};

NormReport ypm_norm(const TrajectorySampler& traj, const MeyerWindow& window,
                    double p, double m, int shell_lo, int shell_hi,
                    int top_level, const NormOptions& opts = {});

// sup over shells, levels j >= j_t, samples and k of
// 2^{n j / 2} |a^0_{j,k}(t)| 2^{-j_t}.
double low_freq_bound_check(const TrajectorySampler& traj,
                            const MeyerWindow& window, double p, double m,
                            int shell_lo, int shell_hi, int top_level,
                            const NormOptions& opts = {});

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

// Wavelet-side Besov norm over the detail bands.
double besov_norm(const WaveletCoefficients& c, double s, double p, double q);

// The scaling band's contribution, reported separately.
double besov_scaling_term(const WaveletCoefficients& c, double s, double p);

}  // namespace pmns

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsr/sensor_sim.hpp"
#include "tsr/signals.hpp"
#include "tsr/solver.hpp"

namespace tsr::analysis {

// Trace similarity metrics. Inputs may live on different sample grids; the
// coarser one is resampled to the finer by zero-order hold first, which
// requires the finer rate to be an integer multiple of the coarser.
double l2_error(const std::vector<double>& a, double rate_a,
                const std::vector<double>& b, double rate_b);
double cosine_error(const std::vector<double>& a, double rate_a,
                    const std::vector<double>& b, double rate_b);

struct EnsembleSpec {
  int n_trials = 1000;
  double freq_lo_hz = 5.0;
  double freq_hi_hz = 30.0;
  double duration_s = 5.0;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
};

// Per-frequency-bin mean errors of one (pattern, n) evaluation. Two ground
// truth references are kept side by side: the sub-step mean reference (the
// quantity the solver actually targets) and the fine-grid signal itself.
// Baseline columns hold the non-up-sampled camera estimate on the same
// trials.
struct ErrorProfile {
  std::vector<std::pair<double, double>> freq_bins;
  std::vector<double> mean_l2;        // vs sub-step means
  std::vector<double> mean_l2_fine;   // vs fine grid
  std::vector<double> mean_cosine;    // vs sub-step means, radians
  std::vector<double> baseline_l2;
  std::vector<double> baseline_l2_fine;
  std::vector<int> trial_counts;
  std::string pattern_id;
  int n_factor = 0;
};

struct PatternConstraints {
  bool full_rank = true;
  bool no_zero_row = false;
};

// All binary n x m patterns meeting the constraints, in ascending bit-mask
// order (row-major bits). Exhaustive range is capped at n*m <= 36.
std::vector<sensor::FlickerPattern> enumerate_patterns(int n, int m,
                                                       const PatternConstraints& c);

enum class PatternMode { Fixed, RandomPerFrame };

ErrorProfile evaluate_pattern(const sensor::FlickerPattern& pattern,
                              const EnsembleSpec& spec,
                              const sensor::CameraConfig& cam,
                              PatternMode mode = PatternMode::Fixed,
                              double bin_hz = 1.0);

enum class ErrorRef { SubstepMean, FineGrid };

struct BandWinner {
  double f_lo = 0.0;
  double f_hi = 0.0;
  int n_factor = 0;
  std::string pattern_id;
  double mean_error = 0.0;
};

// Winner per half-band ((j-1) fps/2, j fps/2]; ties break toward lower n,
// then lower pattern id.
std::vector<BandWinner> band_winner_table(const std::vector<ErrorProfile>& profiles,
                                          double fps,
                                          ErrorRef ref = ErrorRef::SubstepMean);

// Mean error of one profile inside (f_lo, f_hi], trial-count weighted.
double band_mean_error(const ErrorProfile& profile, double f_lo, double f_hi,
                       ErrorRef ref);

struct AlphaPoint {
  double alpha = 0.0;
  double mean_cosine_error = 0.0;
  double snr_ratio_measured = 0.0;
  double snr_ratio_bound = 0.0;
  double snr_ratio_sigma = 0.0;  // Monte-Carlo standard error of the measured ratio
  double signal_ratio = 0.0;     // mean coded counts over mean plain counts
};

struct AlphaSweepOptions {
  sensor::CameraConfig cam;
  double env_intensity = 1000.0;  // plain-camera light level; flicker = alpha * env
  sensor::NoiseModel noise{0.0, 0.0, true};
  int snr_trials = 10000;
  double scene_offset = 1.2;  // keeps the Monte-Carlo scene non-negative
};

// Per-alpha Monte-Carlo study: cosine reconstruction error of noisy tone
// scenes, and the measured SNR ratio of the coded capture against a plain
// camera under the ambient light alone. The measured ratio applies the
// three-halves SNR law to the Monte-Carlo signal ratio.
std::vector<AlphaPoint> alpha_sweep(const std::vector<double>& alphas,
                                    const sensor::FlickerPattern& pattern,
                                    const EnsembleSpec& spec,
                                    const AlphaSweepOptions& options = {});

}  // namespace tsr::analysis

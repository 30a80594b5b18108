#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tsr/sensor_sim.hpp"
#include "tsr/signals.hpp"
#include "tsr/solver.hpp"

namespace tsr::scanning {

struct WindowPlan {
  int n_factor = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

// Splits total_s into equal-duration windows, one per entry of n_sequence.
std::vector<WindowPlan> plan_windows(const std::vector<int>& n_sequence,
                                     double total_s, double fps);

// One reconstructed window of the scan, with its spectrum on the window's
// own frequency axis.
struct TemporalWindow {
  int n_factor = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  solver::ReconstructedTrace trace;
  signals::SpectrumView spectrum;
};

struct StitchBand {
  double f_lo = 0.0;
  double f_hi = 0.0;
  std::vector<int> window_indices;  // contributing windows, empty when unreachable
  int n_factor = 0;                 // minimum detecting n, 0 when unreachable
};

struct StitchedSpectrum {
  std::vector<StitchBand> bands;
  signals::SpectrumView combined;
};

enum class Averaging { Complex, Magnitude };
enum class AaMode { Composition, Literal };

// Assembles one spectrum over [0, max_N * fps / 2): each half-band
// ((j-1) * fps/2, j * fps/2) is the bin-wise mean over the windows whose
// n_factor is the smallest one that detects the band.
StitchedSpectrum stitch(const std::vector<TemporalWindow>& windows, double fps,
                        Averaging averaging = Averaging::Complex);

// Alias-ghost subtraction. Composition mode walks distinct n factors in
// descending order (skipping the maximum): the next-higher band is band-pass
// extracted, mirrored about its lower edge, equalized for the two bands'
// sub-step integrators, and its magnitude is subtracted (clipped at zero,
// phases kept) where it lands. Literal mode is the simpler variant: for each
// n the whole spectrum is mirrored about (n-1) * fps/2 and subtracted
// complex-wise in place.
StitchedSpectrum anti_alias(const StitchedSpectrum& stitched,
                            const std::vector<int>& n_sequence, double fps,
                            AaMode mode = AaMode::Composition);

struct ScanOptions {
  Averaging averaging = Averaging::Complex;
  AaMode aa_mode = AaMode::Composition;
  double noise_floor_fraction = 0.0;  // per-window spectral threshold
};

struct ScanResult {
  std::vector<TemporalWindow> windows;
  StitchedSpectrum stitched;
  StitchedSpectrum anti_aliased;
};

// End-to-end scan: plan windows, capture and reconstruct each one with the
// pattern chosen for its n factor, then stitch and anti-alias.
ScanResult run_scan(const signals::FineSignal& sig,
                    const std::vector<int>& n_sequence, double fps,
                    const std::function<sensor::FlickerPattern(int)>& pattern_for_n,
                    const sensor::IlluminationModel& illum,
                    const sensor::NoiseModel& noise, std::uint64_t seed,
                    const ScanOptions& options = {});

}  // namespace tsr::scanning

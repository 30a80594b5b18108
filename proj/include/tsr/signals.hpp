#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tsr::signals {

// Dense sample grid representing the ground-truth scene intensity.
struct FineSignal {
  std::vector<double> samples;
  double grid_rate = 0.0;  // samples per second
  double t0 = 0.0;         // absolute start time of samples[0]
  double duration_s() const {
    return grid_rate > 0.0 ? static_cast<double>(samples.size()) / grid_rate : 0.0;
  }
};

struct ToneComponent {
  double amplitude = 1.0;
  double freq_hz = 0.0;
  double phase_rad = 0.0;
};

// One-sided spectrum. bins[k] corresponds to frequency k * df; phases are
// referenced to absolute time zero regardless of the start time of the trace
// the spectrum was taken from. time_len is the length of the originating time
// series and fixes the bin weights used for energy accounting (DC and, for
// even lengths, the top bin count once; every other bin counts twice).
struct SpectrumView {
  std::vector<std::complex<double>> bins;
  double df = 0.0;
  int time_len = 0;
  double f_max() const { return bins.empty() ? 0.0 : df * static_cast<double>(bins.size() - 1); }
};

FineSignal gen_sinusoid_mix(const std::vector<ToneComponent>& tones,
                            double duration_s, double grid_rate, double t0 = 0.0);

// Bipolar square wave derived from the sign of a sine; samples landing exactly
// on a zero crossing are emitted as 0.
FineSignal gen_square_wave(double freq_hz, double duration_s, double grid_rate,
                           double t0 = 0.0);

// Sample-wise sum; all inputs must share grid_rate, t0 and length.
FineSignal superpose(const std::vector<FineSignal>& parts);

SpectrumView spectrum(const std::vector<double>& samples, double sample_rate,
                      double t0 = 0.0);
SpectrumView spectrum(const FineSignal& sig);

// Keeps bins with frequency in [f_min, f_max), zeroes the rest.
SpectrumView band_pass(const SpectrumView& sv, double f_min, double f_max);

// Mirrors the spectrum about f_pivot: the bin at frequency f moves to
// 2 * f_pivot - f with conjugated value; bins mapping outside the one-sided
// range are discarded.
SpectrumView rotate_spectrum(const SpectrumView& sv, double f_pivot);

// Zeroes bins whose magnitude is below fraction * peak magnitude.
SpectrumView threshold_noise_floor(const SpectrumView& sv, double fraction);

// Energy accounting; the two sides agree by Parseval's identity.
double signal_energy(const std::vector<double>& samples, double sample_rate);
double signal_energy(const FineSignal& sig);
double spectrum_energy(const SpectrumView& sv);

// 1 for DC and (even time_len) the top bin, 2 otherwise.
double bin_weight(const SpectrumView& sv, std::size_t k);

}  // namespace tsr::signals

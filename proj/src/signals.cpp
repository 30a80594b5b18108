#include "tsr/signals.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsr::signals {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::size_t sample_count(double duration_s, double grid_rate) {
  if (duration_s <= 0.0 || grid_rate <= 0.0) {
    throw std::invalid_argument("signal duration and grid rate must be positive");
  }
  const double n = duration_s * grid_rate;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-6 * std::max(1.0, n)) {
    throw std::invalid_argument("duration must cover a whole number of grid samples");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

FineSignal gen_sinusoid_mix(const std::vector<ToneComponent>& tones,
                            double duration_s, double grid_rate, double t0) {
  if (tones.empty()) throw std::invalid_argument("no components");
  for (const auto& tone : tones) {
    if (grid_rate < 10.0 * tone.freq_hz) {
      throw std::invalid_argument("grid rate must be at least 10x the component frequency");
    }
  }
  const std::size_t n = sample_count(duration_s, grid_rate);
  FineSignal sig;
  sig.grid_rate = grid_rate;
  sig.t0 = t0;
  sig.samples.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) / grid_rate;
    double v = 0.0;
    for (const auto& tone : tones) {
      v += tone.amplitude * std::sin(kTwoPi * tone.freq_hz * t + tone.phase_rad);
    }
    sig.samples[k] = v;
  }
  return sig;
}

FineSignal gen_square_wave(double freq_hz, double duration_s, double grid_rate,
                           double t0) {
  if (freq_hz <= 0.0) {
    throw std::invalid_argument("square wave frequency must be positive");
  }
  const std::size_t n = sample_count(duration_s, grid_rate);
  FineSignal sig;
  sig.grid_rate = grid_rate;
  sig.t0 = t0;
  sig.samples.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) / grid_rate;
    // Half-period count; integer values are the sign changes of sin(2*pi*f*t).
    const double ph = 2.0 * freq_hz * t;
    const double nearest = std::round(ph);
    if (std::abs(ph - nearest) < 1e-9) {
      sig.samples[k] = 0.0;
    } else {
      const auto half_periods = static_cast<long long>(std::floor(ph));
      sig.samples[k] = (half_periods % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return sig;
}

FineSignal superpose(const std::vector<FineSignal>& parts) {
  if (parts.empty()) throw std::invalid_argument("superpose needs at least one signal");
  FineSignal out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const FineSignal& p = parts[i];
    if (p.samples.size() != out.samples.size() || p.grid_rate != out.grid_rate ||
        p.t0 != out.t0) {
      throw std::invalid_argument("superpose inputs must share grid and span");
    }
    for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] += p.samples[k];
  }
  return out;
}

SpectrumView spectrum(const std::vector<double>& samples, double sample_rate,
                      double t0) {
  if (samples.size() < 2 || sample_rate <= 0.0) {
    throw std::invalid_argument("spectrum needs at least two samples");
  }
  const std::size_t n = samples.size();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> full;
  std::vector<double> in(samples);
  fft.fwd(full, in);

  SpectrumView sv;
  sv.time_len = static_cast<int>(n);
  sv.df = sample_rate / static_cast<double>(n);
  const std::size_t half = n / 2 + 1;
  sv.bins.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(half));
  // Amplitude normalization: a unit sinusoid on the grid shows magnitude 1/2
  // in its bin (1 at DC), independent of trace length.
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& b : sv.bins) b *= scale;
  // Re-reference phases to absolute time zero so spectra of traces that start
  // at different times are directly comparable.
  if (t0 != 0.0) {
    for (std::size_t k = 0; k < sv.bins.size(); ++k) {
      const double f = sv.df * static_cast<double>(k);
      sv.bins[k] *= std::polar(1.0, -kTwoPi * f * t0);
    }
  }
  return sv;
}

SpectrumView spectrum(const FineSignal& sig) {
  return spectrum(sig.samples, sig.grid_rate, sig.t0);
}

SpectrumView band_pass(const SpectrumView& sv, double f_min, double f_max) {
  if (!(f_min >= 0.0) || !(f_min < f_max)) {
    throw std::invalid_argument("inverted band");
  }
  if (f_max > sv.f_max() + 0.5 * sv.df) {
    throw std::invalid_argument("band exceeds spectrum range");
  }
  SpectrumView out = sv;
  const double eps = 1e-9 * sv.df;
  for (std::size_t k = 0; k < out.bins.size(); ++k) {
    const double f = sv.df * static_cast<double>(k);
    const bool keep = f >= f_min - eps && f < f_max - eps;
    if (!keep) out.bins[k] = 0.0;
  }
  return out;
}

SpectrumView rotate_spectrum(const SpectrumView& sv, double f_pivot) {
  if (f_pivot < 0.0 || f_pivot > sv.f_max()) {
    throw std::invalid_argument("pivot outside spectrum range");
  }
  SpectrumView out = sv;
  std::fill(out.bins.begin(), out.bins.end(), std::complex<double>(0.0, 0.0));
  // Mirror index: bin k lands on 2*f_pivot/df - k.
  const long long m = std::llround(2.0 * f_pivot / sv.df);
  const auto n = static_cast<long long>(sv.bins.size());
  for (long long k = 0; k < n; ++k) {
    const long long j = m - k;
    if (j >= 0 && j < n) out.bins[static_cast<std::size_t>(j)] = std::conj(sv.bins[static_cast<std::size_t>(k)]);
  }
  return out;
}

SpectrumView threshold_noise_floor(const SpectrumView& sv, double fraction) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw std::invalid_argument("threshold fraction must be in [0, 1]");
  }
  double peak = 0.0;
  for (const auto& b : sv.bins) peak = std::max(peak, std::abs(b));
  SpectrumView out = sv;
  const double cut = fraction * peak;
  for (auto& b : out.bins) {
    if (std::abs(b) < cut) b = 0.0;
  }
  return out;
}

double signal_energy(const std::vector<double>& samples, double sample_rate) {
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return acc / sample_rate;
}

double signal_energy(const FineSignal& sig) {
  return signal_energy(sig.samples, sig.grid_rate);
}

double bin_weight(const SpectrumView& sv, std::size_t k) {
  if (k == 0) return 1.0;
  if (sv.time_len % 2 == 0 && k + 1 == sv.bins.size()) return 1.0;
  return 2.0;
}

double spectrum_energy(const SpectrumView& sv) {
  // Parseval with the amplitude normalization used by spectrum(): the time
  // domain energy sum(x^2)/rate equals n/rate * sum_k w_k |X_k|^2.
  double acc = 0.0;
  for (std::size_t k = 0; k < sv.bins.size(); ++k) {
    acc += bin_weight(sv, k) * std::norm(sv.bins[k]);
  }
  const double n = static_cast<double>(sv.time_len);
  const double rate = sv.df * n;
  return acc * n / rate;
}

}  // namespace tsr::signals

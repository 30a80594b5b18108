#include "tsr/scanning.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tsr/rng.hpp"

namespace {
constexpr double kPi = M_PI;
}

namespace tsr::scanning {

namespace {

// Smallest n in the windows that detects band index j (band top j * fps/2).
int min_detecting_n(const std::vector<TemporalWindow>& windows, int band_j) {
  int best = 0;
  for (const auto& w : windows) {
    if (w.n_factor >= band_j && (best == 0 || w.n_factor < best)) best = w.n_factor;
  }
  return best;
}

}  // namespace

std::vector<WindowPlan> plan_windows(const std::vector<int>& n_sequence,
                                     double total_s, double fps) {
  if (n_sequence.empty()) throw std::invalid_argument("empty window sequence");
  if (total_s <= 0.0 || fps <= 0.0) {
    throw std::invalid_argument("total duration and fps must be positive");
  }
  for (int n : n_sequence) {
    if (n < 1) throw std::invalid_argument("window n factors must be >= 1");
  }
  const double dur = total_s / static_cast<double>(n_sequence.size());
  const double frames = dur * fps;
  if (frames < 1.0 - 1e-9) {
    throw std::invalid_argument("window shorter than one frame");
  }
  if (std::abs(frames - std::round(frames)) > 1e-6 * frames) {
    throw std::invalid_argument("window duration must cover whole frames");
  }
  std::vector<WindowPlan> plan;
  plan.reserve(n_sequence.size());
  for (std::size_t w = 0; w < n_sequence.size(); ++w) {
    WindowPlan p;
    p.n_factor = n_sequence[w];
    p.start_s = dur * static_cast<double>(w);
    p.end_s = dur * static_cast<double>(w + 1);
    plan.push_back(p);
  }
  return plan;
}

StitchedSpectrum stitch(const std::vector<TemporalWindow>& windows, double fps,
                        Averaging averaging) {
  if (windows.empty()) throw std::invalid_argument("stitch needs at least one window");
  const double df = windows.front().spectrum.df;
  std::size_t max_bins = 0;
  int max_n = 0;
  int longest = 0;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto& sv = windows[w].spectrum;
    if (std::abs(sv.df - df) > 1e-9 * df) {
      throw std::invalid_argument("window spectra must share frequency resolution");
    }
    if (sv.bins.size() > max_bins) {
      max_bins = sv.bins.size();
      longest = static_cast<int>(w);
    }
    max_n = std::max(max_n, windows[w].n_factor);
  }

  StitchedSpectrum out;
  out.combined.df = df;
  out.combined.time_len = windows[static_cast<std::size_t>(longest)].spectrum.time_len;
  out.combined.bins.assign(max_bins, {0.0, 0.0});

  const double half = fps / 2.0;
  const double eps = 1e-9 * df;
  for (int j = 1; j <= max_n; ++j) {
    StitchBand band;
    band.f_lo = half * static_cast<double>(j - 1);
    band.f_hi = half * static_cast<double>(j);
    band.n_factor = min_detecting_n(windows, j);
    if (band.n_factor > 0) {
      for (std::size_t w = 0; w < windows.size(); ++w) {
        if (windows[w].n_factor == band.n_factor) {
          band.window_indices.push_back(static_cast<int>(w));
        }
      }
      for (std::size_t k = 0; k < max_bins; ++k) {
        const double f = df * static_cast<double>(k);
        if (f < band.f_lo - eps || f >= band.f_hi - eps) continue;
        std::complex<double> acc(0.0, 0.0);
        double mag_acc = 0.0;
        int count = 0;
        for (int w : band.window_indices) {
          const auto& bins = windows[static_cast<std::size_t>(w)].spectrum.bins;
          if (k < bins.size()) {
            acc += bins[k];
            mag_acc += std::abs(bins[k]);
            ++count;
          }
        }
        if (count == 0) continue;
        if (averaging == Averaging::Complex) {
          out.combined.bins[k] = acc / static_cast<double>(count);
        } else {
          const double phase = std::arg(acc);
          out.combined.bins[k] = std::polar(mag_acc / static_cast<double>(count), phase);
        }
      }
    }
    out.bands.push_back(std::move(band));
  }
  return out;
}

StitchedSpectrum anti_alias(const StitchedSpectrum& stitched,
                            const std::vector<int>& n_sequence, double fps,
                            AaMode mode) {
  if (n_sequence.empty()) throw std::invalid_argument("empty window sequence");
  StitchedSpectrum out = stitched;
  const double half = fps / 2.0;

  if (mode == AaMode::Literal) {
    std::vector<int> order(n_sequence);
    std::sort(order.begin(), order.end(), std::greater<int>());
    for (int n : order) {
      const double f_min = half * static_cast<double>(n - 1);
      if (f_min > out.combined.f_max()) continue;
      const auto a = signals::rotate_spectrum(out.combined, f_min);
      for (std::size_t k = 0; k < out.combined.bins.size(); ++k) {
        out.combined.bins[k] -= a.bins[k];
      }
    }
    return out;
  }

  std::set<int> distinct(n_sequence.begin(), n_sequence.end());
  std::vector<int> ns(distinct.begin(), distinct.end());
  // Descending, skipping the maximum: each n is corrected by the band of the
  // next-higher n folded down about that band's lower edge.
  for (auto it = ns.rbegin(); it != ns.rend(); ++it) {
    if (it == ns.rbegin()) continue;
    const int higher = *std::prev(it);
    const double src_lo = half * static_cast<double>(higher - 1);
    const double src_hi = half * static_cast<double>(higher);
    if (src_hi > out.combined.f_max() + 0.5 * out.combined.df) continue;
    auto a = signals::rotate_spectrum(signals::band_pass(out.combined, src_lo, src_hi),
                                      src_lo);
    const double land_lo = std::max(0.0, src_lo - (src_hi - src_lo));
    if (land_lo >= src_lo) continue;
    a = signals::band_pass(a, land_lo, src_lo);
    // The folded copy predicts ghost magnitudes once it is equalized for the
    // two windows' sub-step integrators: a tone at f_src is attenuated by
    // sinc(pi f / rate) of whichever window observes it. Phases are not
    // comparable across windows captured at different times (the leakage
    // skirts carry each window's own group delay), so the correction is
    // applied to magnitudes, clipped at zero, keeping the original phase.
    // This can only remove energy, never inject it.
    const int n_dst = (higher >= 2 && static_cast<std::size_t>(higher - 2) < out.bands.size())
                          ? out.bands[static_cast<std::size_t>(higher - 2)].n_factor
                          : 0;
    const int n_src = (static_cast<std::size_t>(higher - 1) < out.bands.size())
                          ? out.bands[static_cast<std::size_t>(higher - 1)].n_factor
                          : 0;
    if (n_dst <= 0 || n_src <= 0) continue;
    const double rate_src = static_cast<double>(n_src) * fps;
    const double rate_dst = static_cast<double>(n_dst) * fps;
    const double eps = 1e-9 * out.combined.df;
    const auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
    for (std::size_t k = 0; k < out.combined.bins.size(); ++k) {
      if (a.bins[k] == std::complex<double>(0.0, 0.0)) continue;
      const double f_dst = out.combined.df * static_cast<double>(k);
      if (f_dst < land_lo - eps || f_dst >= src_lo - eps) continue;
      const double f_src = 2.0 * src_lo - f_dst;
      const double den = sinc(kPi * f_src / rate_src);
      const double ratio =
          std::abs(den) < 1e-12 ? 1.0 : sinc(kPi * f_src / rate_dst) / den;
      const double predicted = std::abs(a.bins[k]) * std::abs(ratio);
      const double mag = std::abs(out.combined.bins[k]);
      const double corrected = std::max(0.0, mag - predicted);
      out.combined.bins[k] = std::polar(corrected, std::arg(out.combined.bins[k]));
    }
  }
  return out;
}

ScanResult run_scan(const signals::FineSignal& sig,
                    const std::vector<int>& n_sequence, double fps,
                    const std::function<sensor::FlickerPattern(int)>& pattern_for_n,
                    const sensor::IlluminationModel& illum,
                    const sensor::NoiseModel& noise, std::uint64_t seed,
                    const ScanOptions& options) {
  const auto plan = plan_windows(n_sequence, sig.duration_s(), fps);
  ScanResult result;
  result.windows.reserve(plan.size());
  for (std::size_t w = 0; w < plan.size(); ++w) {
    const auto& p = plan[w];
    sensor::CameraConfig cam;
    cam.fps = fps;
    cam.n_factor = p.n_factor;

    const auto k0 = static_cast<std::size_t>(std::llround(p.start_s * sig.grid_rate));
    const auto k1 = static_cast<std::size_t>(std::llround(p.end_s * sig.grid_rate));
    if (k1 > sig.samples.size() || k0 >= k1) {
      throw std::invalid_argument("signal does not cover the planned windows");
    }
    signals::FineSignal slice;
    slice.grid_rate = sig.grid_rate;
    slice.t0 = sig.t0 + p.start_s;
    slice.samples.assign(sig.samples.begin() + static_cast<std::ptrdiff_t>(k0),
                         sig.samples.begin() + static_cast<std::ptrdiff_t>(k1));

    const auto pattern = pattern_for_n(p.n_factor);
    const auto frames = sensor::simulate_sequence(slice, cam, pattern, illum, noise,
                                                  mix_seed(seed, w));
    auto trace = solver::reconstruct_sequence(frames, pattern, cam, illum.gammas);
    trace.start_s = slice.t0;
    const double gain = sensor::substep_gain(cam, illum);
    for (auto& v : trace.values) v /= gain;

    // Zero-pad every window to the full scan span before transforming, so all
    // spectra share the total-duration frequency resolution. On the shared
    // fine grid the per-bin phase reference is exact, which the alias
    // subtraction depends on; at window-length resolution a tone halfway
    // between bins picks up a window-position sign that breaks cancellation.
    std::vector<double> padded = trace.values;
    padded.resize(static_cast<std::size_t>(
                      std::llround(sig.duration_s() * cam.substep_rate())),
                  0.0);

    TemporalWindow window;
    window.n_factor = p.n_factor;
    window.start_s = p.start_s;
    window.end_s = p.end_s;
    window.spectrum = signals::spectrum(padded, cam.substep_rate(), trace.start_s);
    if (options.noise_floor_fraction > 0.0) {
      window.spectrum =
          signals::threshold_noise_floor(window.spectrum, options.noise_floor_fraction);
    }
    window.trace = std::move(trace);
    result.windows.push_back(std::move(window));
  }
  result.stitched = stitch(result.windows, fps, options.averaging);
  result.anti_aliased = anti_alias(result.stitched, n_sequence, fps, options.aa_mode);
  return result;
}

}  // namespace tsr::scanning

#include "tsr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "tsr/rng.hpp"

namespace tsr::analysis {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

struct ResampledPair {
  std::vector<double> a;
  std::vector<double> b;
  double rate = 0.0;
};

std::vector<double> zero_order_hold(const std::vector<double>& v, std::size_t factor) {
  std::vector<double> out;
  out.reserve(v.size() * factor);
  for (double x : v) out.insert(out.end(), factor, x);
  return out;
}

ResampledPair to_common_grid(const std::vector<double>& a, double rate_a,
                             const std::vector<double>& b, double rate_b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty trace");
  if (rate_a <= 0.0 || rate_b <= 0.0) throw std::invalid_argument("non-positive sample rate");
  ResampledPair out;
  if (rate_a == rate_b) {
    out = {a, b, rate_a};
  } else {
    const double fine = std::max(rate_a, rate_b);
    const double coarse = std::min(rate_a, rate_b);
    const double ratio = fine / coarse;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio) {
      throw std::invalid_argument("sample rates are not integer multiples");
    }
    const auto factor = static_cast<std::size_t>(rounded);
    if (rate_a < rate_b) {
      out = {zero_order_hold(a, factor), b, rate_b};
    } else {
      out = {a, zero_order_hold(b, factor), rate_a};
    }
  }
  if (out.a.size() != out.b.size()) {
    throw std::invalid_argument("length mismatch after resampling");
  }
  return out;
}

// Per-exposure means of the fine signal, the non-up-sampled camera estimate.
std::vector<double> baseline_trace(const signals::FineSignal& sig,
                                   const sensor::CameraConfig& cam, int frame_count) {
  sensor::CameraConfig whole = cam;
  whole.n_factor = 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(frame_count));
  for (int f = 0; f < frame_count; ++f) {
    out.push_back(sensor::substep_averages(sig, whole, f).front());
  }
  return out;
}

std::vector<double> substep_truth(const signals::FineSignal& sig,
                                  const sensor::CameraConfig& cam, int frame_count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(frame_count * cam.n_factor));
  for (int f = 0; f < frame_count; ++f) {
    const auto s = sensor::substep_averages(sig, cam, f);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

double ensemble_grid_rate(const sensor::CameraConfig& cam, double max_freq) {
  const double base = cam.fps * static_cast<double>(cam.n_factor);
  const double k = std::max(1.0, std::ceil(100.0 * max_freq / base));
  return base * k;
}

const std::vector<sensor::FlickerPattern>& full_rank_set(int n, int m) {
  static std::map<std::pair<int, int>, std::vector<sensor::FlickerPattern>> cache;
  auto it = cache.find({n, m});
  if (it == cache.end()) {
    PatternConstraints c;
    c.full_rank = true;
    c.no_zero_row = false;
    it = cache.emplace(std::make_pair(n, m), enumerate_patterns(n, m, c)).first;
  }
  return it->second;
}

std::string canonical_pattern_id(const sensor::FlickerPattern& p) {
  std::string id;
  for (int c = 0; c < p.m(); ++c) {
    if (c) id += '/';
    id += p.row_string(c);
  }
  return id;
}

void remove_mean(std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace

double l2_error(const std::vector<double>& a, double rate_a,
                const std::vector<double>& b, double rate_b) {
  const auto rp = to_common_grid(a, rate_a, b, rate_b);
  double acc = 0.0;
  for (std::size_t k = 0; k < rp.a.size(); ++k) {
    const double d = rp.a[k] - rp.b[k];
    acc += d * d;
  }
  return std::sqrt(acc / rp.rate);
}

double cosine_error(const std::vector<double>& a, double rate_a,
                    const std::vector<double>& b, double rate_b) {
  const auto rp = to_common_grid(a, rate_a, b, rate_b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < rp.a.size(); ++k) {
    dot += rp.a[k] * rp.b[k];
    na += rp.a[k] * rp.a[k];
    nb += rp.b[k] * rp.b[k];
  }
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("zero-norm input");
  const double c = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
  return std::acos(c);
}

std::vector<sensor::FlickerPattern> enumerate_patterns(int n, int m,
                                                       const PatternConstraints& c) {
  if (n < m) throw std::invalid_argument("enumeration requires n >= m");
  if (n < 1 || m < 1) throw std::invalid_argument("n and m must be positive");
  if (n * m > 36) {
    throw std::invalid_argument(
        "pattern space too large for exhaustive enumeration; use sampled mode");
  }
  const std::uint64_t total = 1ULL << (n * m);
  std::vector<sensor::FlickerPattern> out;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<std::vector<int>> channels(
        static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(n), 0));
    bool zero_row = false;
    for (int i = 0; i < n; ++i) {
      int row_sum = 0;
      for (int ch = 0; ch < m; ++ch) {
        const int bit = static_cast<int>((mask >> (i * m + ch)) & 1ULL);
        channels[static_cast<std::size_t>(ch)][static_cast<std::size_t>(i)] = bit;
        row_sum += bit;
      }
      if (row_sum == 0) zero_row = true;
    }
    if (c.no_zero_row && zero_row) continue;
    auto p = sensor::FlickerPattern::from_channels(channels);
    if (c.full_rank && !p.full_column_rank()) continue;
    out.push_back(std::move(p));
  }
  return out;
}

ErrorProfile evaluate_pattern(const sensor::FlickerPattern& pattern,
                              const EnsembleSpec& spec,
                              const sensor::CameraConfig& cam_in, PatternMode mode,
                              double bin_hz) {
  if (spec.n_trials < 1) throw std::invalid_argument("ensemble needs n_trials >= 1");
  if (!(spec.freq_lo_hz < spec.freq_hi_hz)) {
    throw std::invalid_argument("ensemble frequency range inverted");
  }
  if (bin_hz <= 0.0) throw std::invalid_argument("bin width must be positive");

  sensor::CameraConfig cam = cam_in;
  cam.n_factor = pattern.n();
  const double grid_rate = ensemble_grid_rate(cam, spec.freq_hi_hz);
  const double substep_rate = cam.fps * static_cast<double>(cam.n_factor);

  const sensor::IlluminationModel illum;  // unit flicker, no environment light
  const sensor::NoiseModel noise;         // noise off
  const double gain = sensor::substep_gain(cam, illum);

  const std::vector<sensor::FlickerPattern>* random_set = nullptr;
  if (mode == PatternMode::RandomPerFrame) {
    random_set = &full_rank_set(pattern.n(), pattern.m());
    if (random_set->empty()) throw std::logic_error("no full-rank patterns exist");
  }

  ErrorProfile profile;
  profile.n_factor = pattern.n();
  profile.pattern_id = mode == PatternMode::RandomPerFrame
                           ? "random"
                           : canonical_pattern_id(pattern);
  const int n_bins = static_cast<int>(
      std::ceil((spec.freq_hi_hz - spec.freq_lo_hz) / bin_hz - 1e-12));
  profile.freq_bins.resize(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    profile.freq_bins[static_cast<std::size_t>(b)] = {
        spec.freq_lo_hz + bin_hz * b,
        std::min(spec.freq_hi_hz, spec.freq_lo_hz + bin_hz * (b + 1))};
  }
  profile.mean_l2.assign(static_cast<std::size_t>(n_bins), 0.0);
  profile.mean_l2_fine.assign(static_cast<std::size_t>(n_bins), 0.0);
  profile.mean_cosine.assign(static_cast<std::size_t>(n_bins), 0.0);
  profile.baseline_l2.assign(static_cast<std::size_t>(n_bins), 0.0);
  profile.baseline_l2_fine.assign(static_cast<std::size_t>(n_bins), 0.0);
  profile.trial_counts.assign(static_cast<std::size_t>(n_bins), 0);

  for (int trial = 0; trial < spec.n_trials; ++trial) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(trial)));
    const double freq = rng.uniform(spec.freq_lo_hz, spec.freq_hi_hz);
    const double phase = rng.uniform(0.0, kTwoPi);
    const auto sig = signals::gen_sinusoid_mix({{spec.amplitude, freq, phase}},
                                               spec.duration_s, grid_rate);

    std::vector<double> trace;
    int frame_count = 0;
    if (mode == PatternMode::Fixed) {
      const auto frames = sensor::simulate_sequence(sig, cam, pattern, illum, noise, 0);
      frame_count = static_cast<int>(frames.size());
      auto rec = solver::reconstruct_sequence(frames, pattern, cam, {});
      trace = std::move(rec.values);
    } else {
      frame_count = static_cast<int>(sig.duration_s() * cam.fps + 1e-9);
      trace.reserve(static_cast<std::size_t>(frame_count * cam.n_factor));
      for (int f = 0; f < frame_count; ++f) {
        const auto& s =
            (*random_set)[static_cast<std::size_t>(rng.uniform_int(
                0, static_cast<int>(random_set->size()) - 1))];
        const auto substeps = sensor::substep_averages(sig, cam, f);
        const auto frame = sensor::capture_frame(substeps, s, cam, illum, noise, 0, f);
        const auto rec = solver::reconstruct(frame, s, {});
        trace.insert(trace.end(), rec.begin(), rec.end());
      }
    }
    for (double& v : trace) v /= gain;

    const auto truth_sub = substep_truth(sig, cam, frame_count);
    const auto baseline = baseline_trace(sig, cam, frame_count);

    const double l2_sub = l2_error(trace, substep_rate, truth_sub, substep_rate);
    const double l2_fine = l2_error(trace, substep_rate, sig.samples, grid_rate);
    const double cos = cosine_error(trace, substep_rate, truth_sub, substep_rate);
    const double bl_sub = l2_error(baseline, cam.fps, truth_sub, substep_rate);
    const double bl_fine = l2_error(baseline, cam.fps, sig.samples, grid_rate);

    int b = static_cast<int>((freq - spec.freq_lo_hz) / bin_hz);
    b = std::clamp(b, 0, n_bins - 1);
    const auto bi = static_cast<std::size_t>(b);
    profile.mean_l2[bi] += l2_sub;
    profile.mean_l2_fine[bi] += l2_fine;
    profile.mean_cosine[bi] += cos;
    profile.baseline_l2[bi] += bl_sub;
    profile.baseline_l2_fine[bi] += bl_fine;
    profile.trial_counts[bi] += 1;
  }

  for (std::size_t b = 0; b < profile.freq_bins.size(); ++b) {
    const int c = profile.trial_counts[b];
    if (c == 0) continue;
    const double inv = 1.0 / static_cast<double>(c);
    profile.mean_l2[b] *= inv;
    profile.mean_l2_fine[b] *= inv;
    profile.mean_cosine[b] *= inv;
    profile.baseline_l2[b] *= inv;
    profile.baseline_l2_fine[b] *= inv;
  }
  return profile;
}

double band_mean_error(const ErrorProfile& profile, double f_lo, double f_hi,
                       ErrorRef ref) {
  double acc = 0.0;
  int count = 0;
  for (std::size_t b = 0; b < profile.freq_bins.size(); ++b) {
    const double center =
        0.5 * (profile.freq_bins[b].first + profile.freq_bins[b].second);
    if (center <= f_lo || center > f_hi) continue;
    const int c = profile.trial_counts[b];
    if (c == 0) continue;
    const double v = ref == ErrorRef::SubstepMean ? profile.mean_l2[b]
                                                  : profile.mean_l2_fine[b];
    acc += v * static_cast<double>(c);
    count += c;
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return acc / static_cast<double>(count);
}

std::vector<BandWinner> band_winner_table(const std::vector<ErrorProfile>& profiles,
                                          double fps, ErrorRef ref) {
  if (profiles.empty()) throw std::invalid_argument("no profiles");
  int max_n = 0;
  for (const auto& p : profiles) max_n = std::max(max_n, p.n_factor);
  const double half = fps / 2.0;

  std::vector<BandWinner> table;
  for (int j = 1; j <= max_n; ++j) {
    const double f_lo = half * static_cast<double>(j - 1);
    const double f_hi = half * static_cast<double>(j);
    const ErrorProfile* best = nullptr;
    double best_err = 0.0;
    for (const auto& p : profiles) {
      const double err = band_mean_error(p, f_lo, f_hi, ref);
      if (std::isnan(err)) continue;
      const bool better =
          best == nullptr || err < best_err ||
          (err == best_err && (p.n_factor < best->n_factor ||
                               (p.n_factor == best->n_factor &&
                                p.pattern_id < best->pattern_id)));
      if (better) {
        best = &p;
        best_err = err;
      }
    }
    if (best == nullptr) continue;
    BandWinner w;
    w.f_lo = f_lo;
    w.f_hi = f_hi;
    w.n_factor = best->n_factor;
    w.pattern_id = best->pattern_id;
    w.mean_error = best_err;
    table.push_back(std::move(w));
  }
  return table;
}

std::vector<AlphaPoint> alpha_sweep(const std::vector<double>& alphas,
                                    const sensor::FlickerPattern& pattern,
                                    const EnsembleSpec& spec,
                                    const AlphaSweepOptions& options) {
  for (double a : alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("alphas must be positive");
  }
  sensor::CameraConfig cam = options.cam;
  cam.n_factor = pattern.n();
  const double grid_rate = ensemble_grid_rate(cam, spec.freq_hi_hz);
  const double substep_rate = cam.fps * static_cast<double>(cam.n_factor);

  std::vector<AlphaPoint> points;
  points.reserve(alphas.size());
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    const double alpha = alphas[ai];
    sensor::IlluminationModel illum;
    if (std::isfinite(alpha)) {
      illum.env_intensity = options.env_intensity;
      illum.flicker_intensity = alpha * options.env_intensity;
    } else {
      illum.env_intensity = 0.0;
      illum.flicker_intensity = options.env_intensity;
    }

    AlphaPoint pt;
    pt.alpha = alpha;
    pt.snr_ratio_bound = std::isfinite(alpha)
                             ? sensor::snr_ratio_bound(illum)
                             : std::numeric_limits<double>::infinity();

    // Reconstruction quality: noisy tone scenes, cosine error against the
    // sub-step ground truth, DC removed from both sides so the metric sees
    // waveform shape only. Trial seeds are shared across alphas.
    double cos_acc = 0.0;
    for (int trial = 0; trial < spec.n_trials; ++trial) {
      Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(trial)));
      const double freq = rng.uniform(spec.freq_lo_hz, spec.freq_hi_hz);
      const double phase = rng.uniform(0.0, kTwoPi);
      auto sig = signals::gen_sinusoid_mix({{spec.amplitude, freq, phase}},
                                           spec.duration_s, grid_rate);
      for (double& v : sig.samples) v += spec.amplitude * options.scene_offset;

      const auto frames = sensor::simulate_sequence(
          sig, cam, pattern, illum, options.noise,
          mix_seed(spec.seed ^ 0xC051E5EEDULL, static_cast<std::uint64_t>(trial)));
      const auto rec = solver::reconstruct_sequence(frames, pattern, cam, {});
      auto trace = rec.values;
      auto truth = substep_truth(sig, cam, static_cast<int>(frames.size()));
      remove_mean(trace);
      remove_mean(truth);
      cos_acc += cosine_error(trace, substep_rate, truth, substep_rate);
    }
    pt.mean_cosine_error = cos_acc / static_cast<double>(spec.n_trials);

    if (!std::isfinite(alpha)) {
      // No ambient light means the plain camera measures nothing to compare
      // against; the ratio diverges.
      pt.signal_ratio = std::numeric_limits<double>::infinity();
      pt.snr_ratio_measured = std::numeric_limits<double>::infinity();
      points.push_back(pt);
      continue;
    }

    // SNR ratio: coded counts of a unit white scene against a plain camera
    // under the ambient light alone, same exposure. The three-halves law
    // turns the signal ratio into the SNR ratio.
    const std::vector<double> unit(static_cast<std::size_t>(pattern.n()), 1.0);
    const auto clean =
        sensor::capture_frame(unit, pattern, cam, illum, sensor::NoiseModel{}, 0);
    const double dark = options.noise.dark_current * cam.exposure_s();
    const double read2 = options.noise.read_noise * options.noise.read_noise;
    const double plain_clean = illum.env_intensity * cam.exposure_s();

    Rng rng(mix_seed(spec.seed ^ 0x51700B0CULL, static_cast<std::uint64_t>(ai)));
    const int trials = options.snr_trials;
    double sx = 0.0, sxx = 0.0, sy = 0.0, syy = 0.0;
    for (int t = 0; t < trials; ++t) {
      double x = 0.0;
      for (double c : clean.c_values) {
        x += c + std::sqrt(std::max(c, 0.0) + dark + read2) * rng.normal();
      }
      const double y =
          plain_clean + std::sqrt(std::max(plain_clean, 0.0) + dark + read2) * rng.normal();
      sx += x;
      sxx += x * x;
      sy += y;
      syy += y * y;
    }
    const double nt = static_cast<double>(trials);
    const double mx = sx / nt;
    const double my = sy / nt;
    const double vx = (sxx - nt * mx * mx) / (nt - 1.0);
    const double vy = (syy - nt * my * my) / (nt - 1.0);
    if (my <= 0.0) throw std::runtime_error("plain-camera signal vanished");
    const double rho = mx / my;
    const double var_rho =
        rho * rho * (vx / (nt * mx * mx) + vy / (nt * my * my));
    pt.signal_ratio = rho;
    pt.snr_ratio_measured = std::pow(rho, 1.5);
    pt.snr_ratio_sigma = 1.5 * std::sqrt(rho) * std::sqrt(var_rho);
    points.push_back(pt);
  }
  return points;
}

}  // namespace tsr::analysis
